import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.integrate import quad
from scipy.special import airy, gamma as G

from circjack.errors import DomainError, UnsupportedModeError
from circjack.ensemble import EnsembleParams
from circjack.limits import (
    LimitQuery,
    S_b,
    a_k,
    airy_multi,
    airy_series,
    bulk_edge_check,
    bulk_edge_prediction,
    c_k,
    correlation_limit,
    edge_rho,
    gamma_mn,
    gauss_gamma,
    gauss_multiplication,
    limit_measure,
    omega_bin_probabilities,
    omega_theta,
    p_bulk_closed,
    p_derivative,
    p_edge_closed,
    p_function,
    saddle_data,
    singularity_limit_check,
    transition_check,
    transition_exponents,
)

D_VALUES = [0.5, 1.0, 2.0]


def angles(d):
    th = limit_measure(d).theta_d
    inner = np.linspace(th, 2 * np.pi - th, 7)[1:-1]
    return [th, *inner, 2 * np.pi - th]


# measure


def test_theta_d():
    assert limit_measure(1.0).theta_d == pytest.approx(np.pi / 3, rel=1e-15)
    assert limit_measure(0.0).theta_d == 0.0
    with pytest.raises(DomainError):
        limit_measure(-1.0)


def test_omega_examples():
    assert omega_theta(1.0, np.pi / 3) == 0.0
    assert omega_theta(1.0, np.pi) == pytest.approx(math.sqrt(3), rel=1e-15)
    assert omega_theta(1.0, 0.5) == 0.0


@pytest.mark.parametrize("d", D_VALUES)
def test_omega_normalized(d):
    th = limit_measure(d).theta_d
    total = quad(lambda t: omega_theta(d, t), th, 2 * np.pi - th, epsabs=1e-13, limit=200)[0]
    assert total / (2 * np.pi) == pytest.approx(1.0, abs=1e-8)
    assert omega_bin_probabilities(d, np.linspace(0, 2 * np.pi, 13)).sum() == pytest.approx(1.0, abs=1e-8)


@pytest.mark.parametrize("d", D_VALUES)
def test_omega_square_root_edge(d):
    th = limit_measure(d).theta_d
    r = [omega_theta(d, th + e) / math.sqrt(e) for e in (1e-2, 1e-3, 1e-4)]
    assert max(r) / min(r) - 1 < 0.05


# saddles


@pytest.mark.parametrize("d", D_VALUES)
def test_saddle_residuals(d):
    for theta in angles(d):
        s = saddle_data(d, theta)
        pts = [s.x_zero] if s.kind == "edge" else [s.x_plus, s.x_minus]
        for x in pts:
            assert abs(p_derivative(d, theta, x, 1)) < 1e-12
        if s.kind == "edge":
            assert abs(p_derivative(d, theta, s.x_zero, 2)) < 1e-10


@pytest.mark.parametrize("d", D_VALUES)
def test_bulk_closed_forms(d):
    h = 1e-4
    for theta in angles(d)[1:-1]:
        s = saddle_data(d, theta)
        for sign, x, p_at in ((1, s.x_plus, s.p_at[0]), (-1, s.x_minus, s.p_at[1])):
            pv, p2 = p_bulk_closed(d, theta, sign)
            direct = complex(p_function(d, theta, x))
            k = round((pv - direct).imag / (2 * math.pi))
            assert abs(pv - direct - 2j * math.pi * k) < 1e-8
            fd = (p_function(d, theta, x + h) - 2 * p_function(d, theta, x) + p_function(d, theta, x - h)) / h**2
            assert abs(p2 - fd) < 1e-6 * max(1, abs(p2))
            assert abs(p2 - p_derivative(d, theta, x, 2)) < 1e-8 * max(1, abs(p2))


@pytest.mark.parametrize("d", D_VALUES)
def test_edge_closed_form(d):
    s = saddle_data(d, limit_measure(d).theta_d)
    diff = p_edge_closed(d) - s.p_at[0]
    k = round(diff.imag / (2 * math.pi))
    assert abs(diff - 2j * math.pi * k) < 1e-10


def test_saddle_examples():
    s = saddle_data(1.0, np.pi)
    assert s.x_plus == pytest.approx(0.5 + math.sqrt(3) / 6, abs=1e-14)
    s = saddle_data(1.0, np.pi / 3)
    assert s.x_zero == pytest.approx(0.5 + 1j * math.sqrt(3) / 6, abs=1e-14)
    with pytest.raises(DomainError):
        saddle_data(1.0, 0.5)


# constants


def test_gamma_mn_examples():
    assert gamma_mn(0, 1, 1, 1.0) == pytest.approx(1.0)
    assert gamma_mn(0.4, 0, 0, 2.0) == 1.0
    b = 0.7 + 0.3j
    assert gamma_mn(b, 2, 2, 1.5) == pytest.approx(gamma_mn(b.conjugate(), 2, 2, 1.5), rel=1e-12)


@pytest.mark.parametrize("beta", [1.0, 2.0, 4.0])
def test_gauss_gamma_quadrature(beta):
    assert gauss_gamma(beta, 1) == pytest.approx(math.sqrt(2 * math.pi), rel=1e-12)
    # two dimensions: rotate to u = (x-y)/sqrt2, v = (x+y)/sqrt2
    u_part = 2 * quad(lambda u: math.exp(-u * u / 2) * (math.sqrt(2) * u) ** beta, 0, np.inf, epsabs=1e-14)[0]
    v_part = quad(lambda v: math.exp(-v * v / 2), -np.inf, np.inf, epsabs=1e-14)[0]
    assert gauss_gamma(beta, 2) == pytest.approx(u_part * v_part, rel=1e-6)


@pytest.mark.parametrize("l", [1, 2, 3])
def test_gauss_multiplication(l, rng):
    for a in rng.uniform(0.1, 5.0, size=10):
        lhs, rhs = gauss_multiplication(a, l)
        assert abs(lhs - rhs) < 1e-12 * abs(rhs)


def test_correlation_constants_positive():
    for beta in (2, 4, 6):
        for k in (1, 2, 3):
            assert a_k(beta, k) > 0
            assert c_k(0.5, beta, k).real > 0


# S_b


@pytest.mark.parametrize("m, n", [(1, 0), (0, 1), (1, 1), (2, 1)])
@pytest.mark.parametrize("alpha", [0.5, 1.0, 2.0])
def test_S_b_at_zero(m, n, alpha):
    b = 0.6 + 0.2j
    v = S_b(b, alpha, m, n, np.zeros(m + n), method="series").value
    assert v == pytest.approx(gamma_mn(b, m, n, alpha), rel=1e-13)


@given(st.lists(st.floats(-3, 3), min_size=2, max_size=2), st.sampled_from([0.5, 1.0, 2.0]), st.floats(0, 2))
def test_S_b_real_when_balanced(x, alpha, b):
    v = S_b(b, alpha, 1, 1, np.array(x)).value
    assert abs(v.imag) < 1e-10 * max(1.0, abs(v))


@pytest.mark.parametrize("m, n", [(1, 0), (1, 1), (0, 2)])
@pytest.mark.parametrize("alpha", [0.5, 1.0, 2.0])
def test_append_zeros_identity(m, n, alpha, rng):
    b = float(rng.uniform(0, 1.5))
    x = rng.uniform(-2, 2, size=m + n)
    lhs = S_b(b, alpha, m + 1, n + 1, np.concatenate([x, [0.0, 0.0]]), method="series").value
    ratio = G((1 + b) / alpha) ** 2 / (G((1 + 2 * b) / alpha) * G((2 + 2 * b) / alpha))
    rhs = ratio * S_b(b + 1, alpha, m, n, x, method="series").value
    assert abs(lhs - rhs) < 1e-10 * abs(rhs)


def test_S_b_paths_agree(rng):
    x = rng.uniform(-3, 3, size=3)
    det = S_b(0.4, 1.0, 2, 1, x, method="determinant").value
    ser = S_b(0.4, 1.0, 2, 1, x, method="series").value
    assert det == pytest.approx(ser, rel=1e-10)
    one = S_b(0.4, 1.5, 1, 0, x[:1], method="scalar").value
    assert one == pytest.approx(S_b(0.4, 1.5, 1, 0, x[:1], method="series").value, rel=1e-12)


def test_S_b_domain():
    with pytest.raises(DomainError):
        S_b(-0.7, 1.0, 1, 0, [0.1])
    with pytest.raises(DomainError):
        S_b(0.0, 1.0, 1, 1, [0.1])


# Airy


@pytest.mark.parametrize("x", [0.0, 1.0, -1.0, 2.0, -2.0, 0.37])
def test_airy_one(x):
    r = airy_multi(1.0, 1, [x])
    assert r.converged
    assert r.value == pytest.approx(airy_series(x), abs=1e-9)
    assert airy_series(x) == pytest.approx(airy(x)[0], abs=1e-14)


def test_airy_known_values():
    assert airy_series(0.0) == pytest.approx(0.3550280539, abs=1e-10)
    assert airy_series(1.0) == pytest.approx(0.1352924163, abs=1e-10)


@pytest.mark.parametrize("alpha", [0.5, 1.0, 2.0])
def test_airy_two_symmetric(alpha):
    a = airy_multi(alpha, 2, [0.3, -0.8]).value
    b = airy_multi(alpha, 2, [-0.8, 0.3]).value
    assert abs(a - b) < 1e-8


def test_airy_two_alpha_one_kernel():
    x1, x2 = 0.4, -0.9
    (a1, d1, _, _), (a2, d2, _, _) = airy(x1), airy(x2)
    want = 2 * (a1 * d2 - d1 * a2) / (x1 - x2)
    assert airy_multi(1.0, 2, [x1, x2]).value == pytest.approx(want, rel=1e-10)


def test_airy_unsupported():
    with pytest.raises(UnsupportedModeError):
        airy_multi(1.0, 3, [0, 0, 0])


# limit queries and predictions


def test_limit_query_validation():
    with pytest.raises(DomainError):
        LimitQuery("bulk", (0.1,), 1, 0, d=1.0, theta=np.pi)
    with pytest.raises(DomainError):
        LimitQuery("bulk", (0.1, 0.2), 1, 1, d=1.0, theta=0.5)
    with pytest.raises(DomainError):
        LimitQuery("edge", (0.1,), 1, 0, d=1.0, theta=2.0)
    with pytest.raises(DomainError):
        LimitQuery("nowhere", ())
    q = LimitQuery("edge", (0.0,), 1, 0, d=1.0)
    assert q.theta == pytest.approx(np.pi / 3) and q.edge_sign == 1


def test_edge_rho_formula():
    d, N = 1.0, 20
    sd = 0.5
    cot = 1 / math.tan(limit_measure(d).theta_d / 2)
    mag = (1 - sd) ** (-2 / 3) * cot ** (1 / 3) * (4 * N) ** (-1 / 3)
    assert edge_rho(d, N, 1) == pytest.approx(-mag, rel=1e-14)
    assert edge_rho(d, N, -1) == pytest.approx(mag, rel=1e-14)


def test_bulk_prediction_at_zero():
    q = LimitQuery("bulk", (0.0, 0.0), 1, 1, d=1.0, theta=np.pi)
    from circjack.limits import bulk_rho, log_Psi
    N = 12
    psi = np.exp(complex(log_Psi(1.0, np.pi, 1, 1, 2.0, N, bulk_rho(1.0, np.pi))))
    pred = bulk_edge_prediction(q, 2.0, N, prec=160)
    assert complex(pred) / psi == pytest.approx(gamma_mn(0, 1, 1, 1.0), rel=1e-10)


def test_singularity_trivial():
    rep = singularity_limit_check(EnsembleParams(2.0, 0.0, 1), 0, 0, [], N_list=(4, 8))
    assert all(r.rel_err < 1e-14 for r in rep.rows)


def test_singularity_b1_monotone():
    rep = singularity_limit_check(EnsembleParams(2.0, 1.0, 1), 1, 0, [0.7], N_list=(8, 16, 32))
    assert rep.strictly_decreasing()


def test_edge_other_side_converges():
    th = 2 * np.pi - limit_measure(1.0).theta_d
    rep = bulk_edge_check(LimitQuery("edge", (0.0,), 1, 0, d=1.0, theta=th), 2.0, (10, 20, 40))
    assert rep.strictly_decreasing()
    assert rep.errors[-1] < 0.2


def test_report_csv_roundtrip():
    rep = singularity_limit_check(EnsembleParams(2.0, 0.0, 1), 1, 1, [0.5, -0.5], N_list=(8, 16))
    text = rep.to_csv({"seed": None})
    data = np.loadtxt(text.splitlines(), delimiter=",", comments="#", skiprows=2)
    assert data.shape == (2, 7)
    assert data[0, 5] == rep.rows[0].rel_err
    assert data[1, 1] == rep.rows[1].lhs.real


def test_transition_exponents_symbolic():
    e = transition_exponents(1.0, 1, 0)
    # (m^2 + n^2 - 4mn - m - n)/(6 alpha) + (m + n)/6 and (n - 2m - 1)(m + n)/(3 alpha) + (m + n)/3
    assert e["b_over_alpha_linear"] == -1.0
    assert e["b_over_alpha_const"] == pytest.approx(1 / 6)
    assert e["two_const"] == pytest.approx(-2 / 3)
    assert all(math.isfinite(v) for v in transition_exponents(0.5, 1, 0).values())


def test_transition_requires_small_rank():
    with pytest.raises(UnsupportedModeError):
        transition_check([20.0], 1.0, 2, 1, [0.0, 0.0, 0.0])


# correlation limits


def sine_two_point(y1, y2):
    u = y1 - y2
    return (1 / (2 * np.pi)) ** 2 - (np.sin(u / 2) / (np.pi * u)) ** 2


@pytest.mark.parametrize("y", [(0.3, 1.1), (-0.5, 0.4), (1.0, 3.5), (-2.0, 2.0), (0.1, -0.25)])
def test_sine_kernel_reduction(y):
    got = correlation_limit("singularity", 2, 2, y, b=0.0, rho=1.0)
    assert got == pytest.approx(sine_two_point(*y), abs=1e-6 * 1 / (2 * np.pi) ** 2)


def test_bulk_one_point_constant():
    vals = [correlation_limit("bulk", 2, 1, [y]) for y in (-1.3, -0.2, 0.0, 0.7, 2.4)]
    assert np.ptp(vals) < 1e-10 * abs(vals[0])
    assert vals[0] > 0


def test_edge_one_point_decays():
    ys = np.linspace(0.0, 2.0, 5)
    vals = [correlation_limit("edge", 2, 1, [y]) for y in ys]
    assert all(v > 0 for v in vals)
    assert all(b < a for a, b in zip(vals, vals[1:]))


def test_correlation_limit_odd_beta():
    with pytest.raises(UnsupportedModeError):
        correlation_limit("bulk", 3, 1, [0.0])


def test_transition_large_b_no_underflow():
    # S_b is below double range here; the ratio must still be finite and close
    rep = transition_check([160.0, 320.0], 1.0, 1, 0, [0.0])
    assert rep.strictly_decreasing()
    assert rep.errors[-1] < 0.1
