"""Acceptance criteria 1 to 12.

Each test records a PASS/FAIL line (printed in the pytest terminal summary)
and then asserts.  Thresholds are fixed; run standalone with
``python tests/test_acceptance.py``.
"""

import math
import sys
import time
from fractions import Fraction

import numpy as np
import pytest

from circjack.ensemble import (
    EnsembleParams,
    MomentQuery,
    correlation_R,
    mcmc_sample,
    moments_K,
    oracle_K_quadrature,
    oracle_R_quadrature,
)
from circjack.hyper import (
    HyperSeriesSpec,
    TruncationPolicy,
    alpha1_determinant,
    hyper_F,
    hyper_F2,
    identity_suite,
    one_f_zero_closed,
    positivity_check,
)
from circjack.jack import jack_coefficients, jack_eval
from circjack.limits import (
    LimitQuery,
    airy_multi,
    airy_series,
    bulk_edge_check,
    correlation_limit,
    singularity_limit_check,
    transition_check,
    tv_distance,
)
from circjack.partitions import enumerate_partitions, jack_at_ones

TIGHT = TruncationPolicy(max_degree=96, rel_tol=1e-15)
ALPHAS = (Fraction(1, 2), Fraction(1), Fraction(2))


def disk(rng, shape, r):
    return r * np.sqrt(rng.uniform(size=shape)) * np.exp(2j * np.pi * rng.uniform(size=shape))


def decreasing(errs):
    return all(b < a for a, b in zip(errs, errs[1:]))


def fmt(errs):
    return "[" + ", ".join(f"{e:.4g}" for e in errs) + "]"


def test_c01_jack(acceptance):
    t0 = time.perf_counter()
    kaps = [k for w in range(1, 7) for k in enumerate_partitions(w, w)]
    mismatches = 0
    for a in ALPHAS:
        for k in kaps:
            exact = jack_coefficients(k, a).coefficients
            fl = jack_coefficients(k, float(a)).coefficients
            mismatches += sum(float(exact[mu]) != fl.get(mu) for mu in exact) + len(set(fl) - set(exact))
    p2 = all(jack_coefficients((2,), a).coefficients[(1, 1)] == 2 / (1 + a) for a in ALPHAS)
    worst = 0.0
    for a in (0.5, 1.0, 2.0):
        for k in kaps:
            for n in range(len(k), 7):
                want = float(jack_at_ones(k, n, a))
                worst = max(worst, abs(jack_eval(k, a, np.ones(n)) - want) / abs(want))
    dt = time.perf_counter() - t0
    ok = mismatches == 0 and p2 and worst < 1e-10 and dt < 10
    acceptance(1, "Jack tables", ok, f"mismatches={mismatches} P_(2) exact={p2} ones rel={worst:.2e} time={dt:.1f}s")
    assert ok


def test_c02_closed_forms(acceptance):
    rng = np.random.default_rng(2)
    worst_closed = 0.0
    for al in (0.5, 1.0, 2.0):
        a = disk(rng, 100, 2.0)
        x = disk(rng, (100, 3), 0.7)
        series = hyper_F(HyperSeriesSpec((a,), (), al, TIGHT), x).value
        closed = one_f_zero_closed(a, x)
        worst_closed = max(worst_closed, float(np.max(np.abs(series / closed - 1))))
    worst_det = 0.0
    for upper, lower in [((), ()), ((1.4 + 0.2j,), (2.6,)), ((-3, 0.8), (2.2,))]:
        spec = HyperSeriesSpec(upper, lower, 1.0, TIGHT)
        for _ in range(10):
            x, y = disk(rng, 2, 0.8), disk(rng, 2, 0.8)
            for det, ser in (
                (alpha1_determinant(spec, x), hyper_F(spec, x).scalar().value),
                (alpha1_determinant(spec, x, y), hyper_F2(spec, x, y).scalar().value),
            ):
                worst_det = max(worst_det, abs(det / ser - 1))
    ok = worst_closed < 1e-12 and worst_det < 1e-8
    acceptance(2, "1F0 closed form and alpha=1 determinants", ok, f"closed rel={worst_closed:.2e} det rel={worst_det:.2e}")
    assert ok


def test_c03_identities(acceptance):
    rep = identity_suite(npoints=100, seed=0, tol=1e-10)
    detail = " ".join(f"{c.name}={c.max_residual:.1e}" for c in rep.checks)
    acceptance(3, "identity suite", rep.passed, detail)
    assert rep.passed, rep.text()


def test_c04_positivity(acceptance):
    checks = [positivity_check(name, npoints=10_000, seed=4) for name in ("0F0", "1F0")]
    ok = all(c.passed for c in checks)
    detail = " ".join(f"{c.name}: nonpos={c.nonpositive} unconv={c.unconverged} min={c.min_value:.2e}" for c in checks)
    acceptance(4, "positivity", ok, detail)
    assert ok


def test_c05_oracle_grid(acceptance):
    rng = np.random.default_rng(5)
    t0 = time.perf_counter()
    worst, count, unconv = 0.0, 0, 0
    for N in (1, 2, 3):
        for b in (0.0, 0.5, 1.0, 2.0):
            for beta in (1.0, 2.0, 4.0):
                P = EnsembleParams(beta, b, N)
                for m, n in ((1, 0), (0, 1), (1, 1), (2, 1)):
                    for _ in range(3):
                        q = MomentQuery(np.exp(2j * np.pi * rng.uniform(size=m)), np.exp(2j * np.pi * rng.uniform(size=n)))
                        k = moments_K(P, q)
                        r = oracle_K_quadrature(P, q)
                        unconv += not r.converged
                        worst = max(worst, abs(r.value - k) / abs(k))
                        count += 1
    dt = time.perf_counter() - t0
    ok = worst <= 1e-6 and dt < 300
    acceptance(5, "finite-N oracle grid", ok, f"points={count} max rel={worst:.2e} unconverged={unconv} time={dt:.0f}s")
    assert ok


SINGULARITY_CASES = {
    (2.0, 0.0, 1, 1): [(0.5, -0.5), (2.0, -2.0), (1.3, 0.4), (-2.0, -1.0)],
    (2.0, 1.0, 1, 0): [(0.0,), (0.7,), (2.0,), (-1.5,)],
    (4.0, 0.5, 1, 1): [(0.5, -0.5), (2.0, -2.0), (1.3, 0.4), (-2.0, -1.0)],
}


def test_c06_singularity(acceptance):
    parts, ok = [], True
    for (beta, b, m, n), xs in SINGULARITY_CASES.items():
        final, mono = 0.0, True
        for x in xs:
            rep = singularity_limit_check(EnsembleParams(beta, b, 1), m, n, list(x), N_list=(8, 16, 32))
            mono &= rep.strictly_decreasing()
            final = max(final, rep.errors[-1])
        case_ok = mono and final < 0.05
        ok &= case_ok
        parts.append(f"(beta={beta:g},b={b:g},m={m},n={n}) decreasing={mono} final={final:.4f}{'' if case_ok else ' FAIL'}")
    acceptance(6, "spectrum-singularity limit", ok, "; ".join(parts))
    assert ok


def test_c07_bulk(acceptance):
    parts, ok = [], True
    for x in ((0.0, 0.0), (0.2, -0.1), (0.4, 0.1)):
        rep = bulk_edge_check(LimitQuery("bulk", x, 1, 1, d=1.0, theta=np.pi), 2.0, (8, 16, 24))
        err = [r.modulus_err for r in rep.rows]
        phase = max(abs(r.phase_offset) for r in rep.rows)
        ok &= decreasing(err) and err[-1] < 0.10
        parts.append(f"x={x} |ratio|-1={fmt(err)} phase={phase:.1e}")
    acceptance(7, "bulk limit", ok, "; ".join(parts))
    assert ok


def test_c08_edge(acceptance):
    parts, ok = [], True
    for x in (0.0, -0.5):
        rep = bulk_edge_check(LimitQuery("edge", (x,), 1, 0, d=1.0), 2.0, (10, 20, 40))
        ok &= rep.strictly_decreasing() and rep.errors[-1] < 0.20
        parts.append(f"x={x} err={fmt(rep.errors)}")
    info = bulk_edge_check(LimitQuery("edge", (0.5,), 1, 0, d=1.0), 2.0, (10, 20, 40))
    ok &= info.strictly_decreasing()
    parts.append(f"x=0.5 (monotone only) err={fmt(info.errors)}")
    acceptance(8, "soft-edge limit", ok, "; ".join(parts))
    assert ok


def test_c09_airy(acceptance):
    worst, conv = 0.0, True
    for x in (0.0, 1.0, -1.0, 2.0):
        r = airy_multi(1.0, 1, [x])
        conv &= r.converged
        worst = max(worst, abs(r.value - float(airy_series(x))))
    anchors = abs(airy_series(0.0) - 0.3550280539) < 1e-10 and abs(airy_series(1.0) - 0.1352924163) < 1e-10
    ok = worst < 1e-6 and conv and anchors
    acceptance(9, "one-variable Airy", ok, f"max abs err={worst:.2e} converged={conv}")
    assert ok


def test_c10_transition(acceptance):
    parts, ok = [], True
    for eta in (0.0, 1.0):
        rep = transition_check([20.0, 40.0, 80.0], 1.0, 1, 0, [eta])
        ok &= rep.strictly_decreasing()
        parts.append(f"eta={eta} err={fmt(rep.errors)}")
    acceptance(10, "transition regime", ok, "; ".join(parts))
    assert ok


def test_c11_mcmc(acceptance):
    t0 = time.perf_counter()
    N = 50
    tv1 = tv_distance(mcmc_sample(EnsembleParams(2.0, 2.0 * N * 1.0 / 2, N), sweeps=100_000, seed=11).angles, 1.0)
    tv0 = tv_distance(mcmc_sample(EnsembleParams(2.0, 0.0, N), sweeps=100_000, seed=12).angles, 0.0)
    dt = time.perf_counter() - t0
    ok = tv1 < 0.05 and tv0 < 0.03 and dt < 120
    acceptance(11, "MCMC vs limit density", ok, f"TV(d=1)={tv1:.4f} TV(b=0)={tv0:.4f} time={dt:.0f}s")
    assert ok


def test_c12_correlations(acceptance):
    worst = 0.0
    rng = np.random.default_rng(12)
    for b in (0.0, 1.0):
        P = EnsembleParams(2.0, b, 2)
        for k in (1, 2):
            for _ in range(3):
                r = rng.uniform(0, 2 * np.pi, k)
                want = oracle_R_quadrature(P, k, r).value
                worst = max(worst, abs(correlation_R(P, k, r) - want) / abs(want))
    sine = 0.0
    for y in ((0.3, 1.1), (-0.5, 0.4), (1.0, 3.5), (-2.0, 2.0)):
        u = y[0] - y[1]
        want = (1 / (2 * np.pi)) ** 2 - (math.sin(u / 2) / (math.pi * u)) ** 2
        sine = max(sine, abs(correlation_limit("singularity", 2, 2, y, b=0.0) - want) / want)
    ok = worst < 1e-6 and sine < 1e-6
    acceptance(12, "even-beta correlations", ok, f"oracle rel={worst:.2e} sine-kernel rel={sine:.2e}")
    assert ok


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
