import math

import numpy as np
import pytest
from scipy.integrate import quad
from scipy.special import gamma

from circjack.errors import DomainError, UnsupportedModeError
from circjack.ensemble import (
    EnsembleParams,
    MCMCConfig,
    MomentQuery,
    correlation_R,
    manova_density,
    mcmc_sample,
    moments_K,
    norm_const_M,
    oracle_K_quadrature,
    oracle_norm_quadrature,
    oracle_R_quadrature,
    write_samples,
)
from circjack.limits import tv_distance


def unit(rng, k):
    return np.exp(2j * np.pi * rng.uniform(size=k))


@pytest.mark.parametrize("beta, b, N", [(0.0, 0, 2), (2.0, -0.6, 2), (2.0, 0, 0), (2.0, 0, 1.5)])
def test_params_validation(beta, b, N):
    with pytest.raises(DomainError):
        EnsembleParams(beta, b, N)


def test_alpha_is_half_beta():
    assert EnsembleParams(4.0, 0.5, 3).alpha_jack == 2.0


@pytest.mark.parametrize(
    "N, a, b, alpha, expected",
    [
        (1, 0, 0, 1.0, 2 * math.pi),
        (1, 0.7, 0.7, 2.3, 2 * math.pi * gamma(2.4) / gamma(1.7) ** 2),
        (2, 0, 0, 1.0, (2 * math.pi) ** 2 * 2),
    ],
)
def test_norm_const_examples(N, a, b, alpha, expected):
    assert norm_const_M(N, a, b, alpha).real == pytest.approx(expected, rel=1e-13)


def test_norm_const_pole():
    with pytest.raises(DomainError, match="j="):
        norm_const_M(2, -1.0, 0.0, 1.0)


@pytest.mark.parametrize("beta", [1.0, 2.0, 4.0, 0.7])
@pytest.mark.parametrize("N", [1, 3, 8])
def test_moments_b0_single_s(beta, N, rng):
    s = complex(rng.normal(), rng.normal())
    assert moments_K(EnsembleParams(beta, 0, N), MomentQuery([s])) == pytest.approx(1.0, abs=1e-12)


def test_moments_empty_query():
    assert moments_K(EnsembleParams(2.0, 0.3, 4), MomentQuery()) == 1.0


@pytest.mark.parametrize("b", [0.5, 1.0, 2.5])
def test_moments_one_angle(b):
    s = 0.5 + 0.3j
    got = moments_K(EnsembleParams(4.0, b, 1), MomentQuery([s]))
    assert got == pytest.approx(1 + s * b / (1 + b), rel=1e-13)


def test_moments_zero_t():
    with pytest.raises(DomainError):
        moments_K(EnsembleParams(2.0, 0, 2), MomentQuery([1.0], [0.0]))


@pytest.mark.parametrize("beta", [1.0, 2.0, 4.0])
@pytest.mark.parametrize("m", [1, 2])
def test_conjugation_symmetry(beta, m, rng):
    s = unit(rng, m) * rng.uniform(0.5, 1.5, size=m)
    K = moments_K(EnsembleParams(beta, 0.8, 5), MomentQuery(s, s))
    assert abs(K.imag) < 1e-10 * abs(K)


def test_oracle_trivial_examples():
    r = oracle_K_quadrature(EnsembleParams(2.0, 0.0, 2), MomentQuery([0.3 + 0.4j]))
    assert r.converged and r.value == pytest.approx(1.0, abs=1e-8)
    r = oracle_K_quadrature(EnsembleParams(2.0, 1.0, 1), MomentQuery([0.5]))
    assert r.value == pytest.approx(1.25, rel=1e-8)


def test_oracle_matches_closed_form(rng):
    P = EnsembleParams(2.0, 1.0, 2)
    q = MomentQuery(unit(rng, 1), unit(rng, 1))
    assert oracle_K_quadrature(P, q).value == pytest.approx(moments_K(P, q), rel=1e-6)


def test_oracle_rejects_complex_b():
    with pytest.raises(DomainError):
        oracle_K_quadrature(EnsembleParams(2.0, 0.5 + 0.2j, 2), MomentQuery([1.0]))


@pytest.mark.parametrize("N", [1, 2])
@pytest.mark.parametrize("beta, b", [(1.0, 0.0), (2.0, 0.5), (4.0, 1.0), (2.0, 2.0)])
def test_density_normalization(N, beta, b):
    r = oracle_norm_quadrature(EnsembleParams(beta, b, N))
    assert r.value == pytest.approx(norm_const_M(N, b, b, beta / 2).real, rel=1e-8)


def test_correlation_cue_one_point(rng):
    for N in (1, 2, 5):
        P = EnsembleParams(2.0, 0.0, N)
        vals = [correlation_R(P, 1, [t]) for t in rng.uniform(0, 2 * np.pi, 4)]
        np.testing.assert_allclose(vals, (N + 1) / (2 * np.pi), rtol=1e-12)


def test_correlation_rotation_invariance():
    P = EnsembleParams(4.0, 0.0, 3)
    assert correlation_R(P, 1, [0.4]) == pytest.approx(correlation_R(P, 1, [2.1]), rel=1e-12)


def test_correlation_integrates_to_count():
    P = EnsembleParams(2.0, 0.0, 2)
    total, _ = quad(lambda t: correlation_R(P, 1, [t]), 0, 2 * np.pi, epsabs=1e-10)
    assert total == pytest.approx(1 + P.N, rel=1e-6)


@pytest.mark.parametrize("b", [0.0, 1.0])
def test_correlation_two_point_oracle(b):
    P = EnsembleParams(2.0, b, 2)
    assert correlation_R(P, 2, [0.0 + 0.3, np.pi]) == pytest.approx(
        oracle_R_quadrature(P, 2, [0.3, np.pi]).value, rel=1e-6
    )


def test_correlation_odd_beta():
    with pytest.raises(UnsupportedModeError):
        correlation_R(EnsembleParams(1.0, 0.0, 2), 1, [0.3])


def test_mcmc_determinism(tmp_path):
    P = EnsembleParams(2.0, 1.0, 6)
    conf = MCMCConfig(sweeps=500, burn_in=200, seed=11)
    a, b = mcmc_sample(P, config=conf), mcmc_sample(P, config=conf)
    np.testing.assert_array_equal(a.angles, b.angles)
    write_samples(tmp_path / "a.csv", a)
    write_samples(tmp_path / "b.csv", b)
    assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()
    c = mcmc_sample(P, config=MCMCConfig(sweeps=500, burn_in=200, seed=12))
    assert not np.array_equal(a.angles, c.angles)


def test_mcmc_samples_in_range():
    chain = mcmc_sample(EnsembleParams(4.0, 0.5, 5), sweeps=300, burn_in=100, seed=1)
    assert len(chain) == 300
    s = chain[17]
    assert s.angles.shape == (5,)
    assert np.all((s.angles >= 0) & (s.angles < 2 * np.pi))
    assert np.isfinite(s.log_weight)
    assert 0.2 <= chain.acceptance <= 0.5


def test_mcmc_uniform_small():
    chain = mcmc_sample(EnsembleParams(2.0, 0.0, 10), sweeps=20000, burn_in=1000, seed=4)
    assert tv_distance(chain.angles.ravel(), 0.0) < 0.04


def test_manova_sigma_one_is_jacobi():
    lam = [0.2, 0.6]
    a = manova_density(lam, [1.0, 1.0], 3.0, 4.0, 2.0)
    b = manova_density(lam, [1.0 - 1e-13, 1.0], 3.0, 4.0, 2.0)
    assert a == pytest.approx(b, rel=1e-10)


@pytest.mark.parametrize("p, m", [(2, 3), (4, 2), (5, 5)])
def test_manova_one_dimensional_mass(p, m):
    total, _ = quad(lambda t: manova_density([t], [1.0], p, m, 2.0), 0, 1, epsabs=1e-12)
    assert total == pytest.approx(1.0, abs=1e-6)


def test_manova_sigma_factor_restores_mass():
    f = lambda t: manova_density([t], [2.5], 3, 2, 2.0, include_sigma_factor=True)
    total, _ = quad(f, 0, 1, epsabs=1e-12)
    assert total == pytest.approx(1.0, abs=1e-6)


def test_manova_positive(rng):
    for _ in range(30):
        n = int(rng.integers(1, 4))
        lam = np.sort(rng.uniform(0.02, 0.98, n))
        sigma = rng.uniform(0.1, 3.0, n)
        beta = float(rng.choice([1.0, 2.0, 4.0]))
        assert manova_density(lam, sigma, n + 0.5, n + 1.0, beta) > 0


@pytest.mark.parametrize(
    "lam, sigma, p",
    [([0.3, 0.3], [1, 1], 3), ([1.2], [1], 3), ([0.3], [-1], 3), ([0.3, 0.5], [1, 1], 0.5)],
)
def test_manova_domain(lam, sigma, p):
    with pytest.raises(DomainError):
        manova_density(lam, sigma, p, 3, 2.0)
