"""Scaling limits of the circular Jacobi ensemble.

Four regimes are covered:

* singularity: fixed b, angles of order 1/N around 0; the limit is S_b.
* bulk: b = beta N d / 2, an angle inside (theta_d, 2 pi - theta_d).
* edge: b = beta N d / 2 at theta_d or 2 pi - theta_d; multivariate Airy.
* transition: S_b as b -> infinity near x = 2b/alpha, again Airy.

Each ``*_check`` function evaluates the exact finite-size quantity along a
sequence of N (or b) and returns a :class:`ConvergenceReport` against the
predicted limit.

Only real d >= 0 is handled, so xi_d = 0 throughout.  Fractional powers of
positive quantities are positive reals.  The complex ratio in the edge
constant uses the principal branch.  The edge scale rho at theta_d is the
real cube root of a negative number, so rho < 0 there.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Optional

import mpmath
import numpy as np
from scipy.integrate import quad
from scipy.special import airy, hyp0f1, roots_legendre

from .ensemble import EnsembleParams, MomentQuery, _lgamma, moments_K
from .errors import ConsistencyError, DomainError, UnsupportedModeError
from .hyper import HyperSeriesSpec, SeriesResult, TruncationPolicy, _nonpos_int, alpha1_determinant, hyper_F

REGIMES = ("singularity", "bulk", "edge", "transition")


# ---------------------------------------------------------------- measure


@dataclass(frozen=True)
class LimitMeasure:
    d: float
    theta_d: float
    xi_d: float = 0.0


def limit_measure(d) -> LimitMeasure:
    if not d >= 0:
        raise DomainError(f"d must be a nonnegative real, got {d}", param="d")
    return LimitMeasure(float(d), 2 * math.asin(d / (1 + d)), 0.0)


def omega_theta(d, theta):
    """Density of the limiting angle distribution with respect to dtheta/2pi.

    Vanishes outside (theta_d, 2 pi - theta_d); d = 0 gives the uniform
    density 1.
    """
    th = np.mod(np.asarray(theta, dtype=float), 2 * np.pi)
    if d == 0:
        return np.ones_like(th) if th.ndim else 1.0
    if not d > 0:
        raise DomainError(f"d must be positive, got {d}", param="d")
    sd = d / (1 + d)
    S = np.sin(th / 2)
    v = S * S - sd * sd
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.where(v > 0, np.sqrt(np.maximum(v, 0.0)) / (abs(1 / (1 + d)) * np.abs(S)), 0.0)
    return out if out.ndim else float(out)


def omega_bin_probabilities(d, edges):
    """Mass of omega_d dtheta / 2pi in each bin."""
    edges = np.asarray(edges, dtype=float)
    if d == 0:
        return np.diff(edges) / (2 * np.pi)
    th_d = limit_measure(d).theta_d
    kinks = [th_d, 2 * np.pi - th_d]
    out = np.empty(len(edges) - 1)
    for i, (a, b) in enumerate(zip(edges[:-1], edges[1:])):
        pts = [t for t in kinks if a < t < b] or None
        out[i] = quad(lambda t: float(omega_theta(d, t)), a, b, points=pts, epsabs=1e-13, limit=200)[0]
    return out / (2 * np.pi)


def tv_distance(angles, d, bins=60):
    """Total-variation distance between the angle histogram and omega_d."""
    edges = np.linspace(0, 2 * np.pi, bins + 1)
    a = np.mod(np.asarray(angles, dtype=float).ravel(), 2 * np.pi)
    h = np.histogram(a, edges)[0] / a.size
    return 0.5 * float(np.abs(h - omega_bin_probabilities(d, edges)).sum())


# ----------------------------------------------------------------- saddles


def p_function(d, theta, y):
    """p(y) = -d log y - d log(1 - y) - log(1 - (1 - e^{i theta}) y)."""
    y = np.asarray(y, dtype=complex)
    return -d * np.log(y) - d * np.log(1 - y) - np.log(1 - (1 - np.exp(1j * theta)) * y)


def p_derivative(d, theta, y, order=1):
    y = np.asarray(y, dtype=complex)
    c = 1 - np.exp(1j * theta)
    f = math.factorial(order - 1)
    s = (-1) ** order
    return f * (s * d / y**order + d / (1 - y) ** order + c**order / (1 - c * y) ** order)


@dataclass
class SaddleData:
    d: float
    theta: float
    u: complex
    kind: str  # "bulk" or "edge"
    x_plus: Optional[complex] = None
    x_minus: Optional[complex] = None
    x_zero: Optional[complex] = None
    p_at: tuple = ()
    p2_at: tuple = ()
    p3_at: tuple = ()
    phi: float = 0.0


def p_bulk_closed(d, theta, sign):
    """Closed forms of p and p'' at x_plus (sign=+1) or x_minus (sign=-1)."""
    sd = d / (1 + d)
    cd = math.sqrt(1 - sd * sd)
    S, C = math.sin(theta / 2), math.cos(theta / 2)
    r = math.sqrt(max(S * S - sd * sd, 0.0))
    phi = math.atan2(sd * C, r)
    pv = (
        -sign * 1j * (math.pi / 2 + d * phi)
        + (1 + d) * np.log((r + sign * 1j * C) / cd)
        - 1j * theta / 2
        + math.log((1 + sd) / cd)
        + d * math.log(2)
        + d * math.log((1 + sd) / sd * S)
    )
    den = cd * S * (1 + sd)
    p2 = 4 * r / (sd * (1 - sd) ** 2) * cd * S * (1 + sd) * (
        sign * 1j * C * (2 * S * S + sd - sd * sd) / den + (2 * S * S + sd - 1) / den * r
    )
    return complex(pv), complex(p2)


def p_edge_closed(d):
    """p(x0) at theta = theta_d."""
    sd = d / (1 + d)
    cd = math.sqrt(1 - sd * sd)
    th_d = 2 * math.asin(sd)
    return complex(-1j * th_d / 2 + math.log((1 + sd) / cd) + d * math.log(2) + d * math.log(1 + sd))


def _same_mod_2pi_i(a, b, tol):
    k = round((a - b).imag / (2 * math.pi))
    return abs(a - b - 2j * math.pi * k) < tol


def saddle_data(d, theta, tol=1e-12) -> SaddleData:
    """Saddle points of p and the values of p, p'', p''' there.

    The saddles come from their closed forms; p' is checked to vanish.
    """
    if not d > 0:
        raise DomainError(f"d must be positive, got {d}", param="d")
    th_d = limit_measure(d).theta_d
    theta = float(theta)
    edge_tol = 1e-12
    if theta < th_d - edge_tol or theta > 2 * math.pi - th_d + edge_tol:
        raise DomainError(f"theta={theta} lies outside [theta_d, 2pi - theta_d]", param="theta")
    sd = d / (1 + d)
    cd = math.sqrt(1 - sd * sd)
    u = 1 / (1 - np.exp(1j * theta))
    rad = cd / (2 * (1 + sd))
    if abs(theta - th_d) < edge_tol or abs(theta - (2 * math.pi - th_d)) < edge_tol:
        sgn = 1 if abs(theta - th_d) < edge_tol else -1
        x0 = 0.5 + sgn * 1j * rad
        out = SaddleData(d, theta, complex(u), "edge", x_zero=complex(x0))
        pts = (x0,)
        out.phi = sgn * math.pi / 2
    else:
        S, C = math.sin(theta / 2), math.cos(theta / 2)
        r = math.sqrt(S * S - sd * sd)
        phi = math.atan2(sd * C / (cd * S), r / (cd * S))
        xp = 0.5 + rad * np.exp(1j * phi)
        xm = 0.5 + rad * np.exp(1j * (math.pi - phi))
        out = SaddleData(d, theta, complex(u), "bulk", x_plus=complex(xp), x_minus=complex(xm), phi=phi)
        pts = (xp, xm)
    for x in pts:
        res = abs(p_derivative(d, theta, x, 1))
        if res > tol * max(1.0, d):
            raise ConsistencyError(f"p' = {res:.3e} at the saddle {x}")
    out.p_at = tuple(complex(p_function(d, theta, x)) for x in pts)
    out.p2_at = tuple(complex(p_derivative(d, theta, x, 2)) for x in pts)
    out.p3_at = tuple(complex(p_derivative(d, theta, x, 3)) for x in pts)
    return out


# --------------------------------------------------------------- constants


def _gamma_ratio(nums, dens, prec=None):
    acc = 0
    for z in nums:
        acc += _lgamma(z, prec)
    for z in dens:
        acc -= _lgamma(z, prec)
    return acc


def log_gamma_mn(b, m, n, alpha, prec=None):
    b = complex(b)
    bc = b.conjugate()
    nums = [(1 + bc + j) / alpha for j in range(m)] + [(1 + b + j) / alpha for j in range(n)]
    dens = [(1 + bc + b + n + j) / alpha for j in range(m)] + [(1 + bc + b + j) / alpha for j in range(n)]
    return _gamma_ratio(nums, dens, prec)


def gamma_mn(b, m, n, alpha):
    """The constant gamma_{m,n}(b, 2/alpha) multiplying S_b."""
    return complex(np.exp(log_gamma_mn(b, m, n, alpha)))


def gauss_gamma(beta, l):
    """Gamma_{beta,l}: integral of prod e^{-x^2/2} |Delta(x)|^beta over R^l."""
    out = (2 * math.pi) ** (l / 2)
    for j in range(1, l + 1):
        out *= math.gamma(1 + j * beta / 2) / math.gamma(1 + beta / 2)
    return out


def gauss_multiplication(a, l):
    """(lhs, rhs) of prod_{j<l} Gamma(a + j/l) = l^{1/2 - l a} (2pi)^{(l-1)/2} Gamma(l a)."""
    lhs = mpmath.mpf(1)
    for j in range(l):
        lhs *= mpmath.gamma(a + mpmath.mpf(j) / l)
    rhs = mpmath.power(l, 0.5 - l * a) * (2 * mpmath.pi) ** (mpmath.mpf(l - 1) / 2) * mpmath.gamma(l * a)
    return complex(lhs), complex(rhs)


def c_k(b, beta, k):
    """Normalization of the even-beta correlation limit at the singularity."""
    b = complex(b)
    bc = b.conjugate()
    acc = ((bc + b) * k + beta * k * (k - 1) / 2) * math.log(beta / 2) + k * math.lgamma(1 + beta / 2)
    acc -= sum(_lgamma(1 + bc + b + beta * j / 2) for j in range(2 * k))
    acc += sum(_lgamma(1 + bc + beta * j / 2) + _lgamma(1 + b + beta * j / 2) for j in range(k))
    return complex(np.exp(acc))


def a_k(beta, k):
    """Normalization of the even-beta soft-edge correlation limit."""
    acc = (beta * k + 1) * k * math.log(beta / 2) + k * math.lgamma(1 + beta / 2)
    for j in range(1, 2 * k + 1):
        acc += beta / 2 * math.lgamma(1 + 2 / beta) - math.lgamma(1 + beta * j / 2)
    return math.exp(acc)


# --------------------------------------------------------------------- S_b


def _S_b_closed(b, alpha, m, n, x, method):
    """Scalar or alpha = 1 determinant value of S_b as an mpmath number
    (no double-precision exponent limits)."""
    a_par = (b + n) / alpha
    c_par = (b.conjugate() + b + m + n) / alpha
    dps = 30 + int(float(np.max(np.abs(x))) * 0.9)
    if method == "scalar":
        if len(x) != 1:
            raise DomainError("scalar path needs one variable", param="x")
        with mpmath.workdps(dps):
            g = mpmath.exp(log_gamma_mn(b, m, n, alpha, prec=mpmath.mp.prec))
            f = mpmath.hyp1f1(mpmath.mpc(a_par), mpmath.mpc(c_par), 1j * mpmath.mpf(x[0]))
            return g * mpmath.exp(-0.5j * mpmath.mpf(x[0])) * f
    if alpha != 1:
        raise DomainError("determinant path needs alpha = 1", param="alpha")
    f = alpha1_determinant(HyperSeriesSpec((a_par,), (c_par,), 1.0), 1j * x, dps=dps)
    with mpmath.workdps(dps):
        g = mpmath.exp(log_gamma_mn(b, m, n, alpha, prec=mpmath.mp.prec))
        return g * mpmath.exp(-0.5j * mpmath.fsum(x)) * mpmath.mpc(f)


def S_b(b, alpha, m, n, x, truncation: Optional[TruncationPolicy] = None, prec=None, method="auto") -> SeriesResult:
    """gamma_{m,n}(b, 2/alpha) prod e^{-i x_k / 2} 1F1((b+n)/alpha; (conj b + b + m + n)/alpha; i x).

    ``method``: "scalar" (one variable, mpmath 1F1), "determinant" (alpha = 1,
    distinct x), "series" (Jack series), or "auto" which picks the first that
    applies.  Closed-form paths report ``degree_used = 0``.
    """
    b = complex(b)
    if not b.real > -0.5:
        raise DomainError(f"need Re(b) > -1/2, got {b}", param="b")
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if len(x) != m + n:
        raise DomainError(f"need m + n = {m + n} arguments, got {len(x)}", param="x")
    if m + n == 0:
        return SeriesResult(complex(gamma_mn(b, 0, 0, alpha)), 0, True, 0.0)
    a_par = (b + n) / alpha
    c_par = (b.conjugate() + b + m + n) / alpha
    distinct = len(set(np.round(x, 12))) == len(x)
    auto = method == "auto"
    if auto:
        if len(x) == 1:
            method = "scalar"
        elif alpha == 1 and distinct and _nonpos_int(a_par - (m + n - 1)) is None:
            method = "determinant"
        else:
            method = "series"
    if method in ("scalar", "determinant"):
        return SeriesResult(complex(_S_b_closed(b, alpha, m, n, x, method)), 0, True, 0.0)
    if method != "series":
        raise DomainError(f"unknown method {method!r}", param="method")
    spec = HyperSeriesSpec((a_par,), (c_par,), alpha, truncation or TruncationPolicy(), prec)
    res = hyper_F(spec, 1j * x).scalar()
    val = gamma_mn(b, m, n, alpha) * np.exp(-0.5j * x.sum()) * res.value
    return SeriesResult(complex(val), res.degree_used, res.converged, abs(val) * float(res.tail_estimate) / max(abs(res.value), 1e-300))


# ------------------------------------------------------------------- Airy


@dataclass
class AiryResult:
    value: float
    converged: bool
    iterates: tuple = ()


def airy_series(x, dps=40):
    """Ai(x) from its Maclaurin series (independent of scipy)."""
    with mpmath.workdps(dps):
        x = mpmath.mpf(x)
        c1 = 1 / (mpmath.power(3, mpmath.mpf(2) / 3) * mpmath.gamma(mpmath.mpf(2) / 3))
        c2 = 1 / (mpmath.power(3, mpmath.mpf(1) / 3) * mpmath.gamma(mpmath.mpf(1) / 3))
        f = g = mpmath.mpf(0)
        tf, tg = mpmath.mpf(1), x
        k = 0
        while True:
            f += tf
            g += tg
            tf *= x**3 / ((3 * k + 2) * (3 * k + 3))
            tg *= x**3 / ((3 * k + 3) * (3 * k + 4))
            k += 1
            if abs(tf) + abs(tg) < mpmath.mpf(10) ** (-dps) * (abs(f) + abs(g) + 1) and k > 5:
                break
        return float(c1 * f - c2 * g)


_GL = roots_legendre(24)


def _regularized_airy(x, eps):
    """(1/pi) int_0^inf cos(w^3/3 + x w) e^{-eps w^2} dw by Gauss-Legendre panels
    whose width follows the local oscillation frequency."""
    W = math.sqrt(44 / eps) + 2
    edges = [0.0]
    while edges[-1] < W:
        w = edges[-1]
        edges.append(w + min(1.0, 3.0 / (w * w + abs(x) + 1)))
    e = np.asarray(edges)
    a, b = e[:-1, None], e[1:, None]
    t = 0.5 * (b - a) * _GL[0][None, :] + 0.5 * (a + b)
    wt = 0.5 * (b - a) * _GL[1][None, :]
    return float((wt * np.cos(t**3 / 3 + x * t) * np.exp(-eps * t * t)).sum() / math.pi)


def _neville_at_zero(h, v):
    v = list(v)
    n = len(v)
    for k in range(1, n):
        for i in range(n - k):
            v[i] = (-h[i + k] * v[i] + h[i] * v[i + 1]) / (h[i] - h[i + k])
    return v[0]


def _airy_1(x, eps0=0.4, ratio=0.75, levels=10, tol=1e-8):
    eps = [eps0 * ratio**k for k in range(levels)]
    vals = [_regularized_airy(x, e) for e in eps]
    ests = [_neville_at_zero(eps[:k], vals[:k]) for k in range(4, levels + 1)]
    ok = abs(ests[-1] - ests[-2]) < tol * max(1.0, abs(ests[-1]))
    return AiryResult(ests[-1], bool(ok), (ests[-2], ests[-1]))


def _airy_2(alpha, x1, x2, tol=1e-12):
    lam = 2.0 ** (-1 / 3)
    c = x2 - x1
    top = math.sqrt(max(2 * (40 / lam - x1 - x2), 1.0))

    def f(dl):
        return dl ** (2 / alpha) * hyp0f1(1 / alpha + 0.5, -dl * dl * c * c / 16) * airy(lam * (dl * dl / 2 + x1 + x2))[0]

    pts = None
    if x1 + x2 < 0:
        pts = [math.sqrt(-2 * (x1 + x2))]
    val, err = quad(f, 0, top, points=pts, limit=500, epsabs=1e-15, epsrel=tol)
    return AiryResult(lam / math.pi * val, bool(err <= 1e3 * tol * max(abs(val), 1e-300)), (val, err))


def airy_multi(alpha, n, x) -> AiryResult:
    """Multivariate Airy function Ai_n^{(alpha)}(x) for n in {1, 2}.

    n = 1: the oscillatory integral damped by e^{-eps w^2}, evaluated for a
    geometric sequence of eps and extrapolated to eps = 0 by Neville's
    scheme (the damped integral is entire in eps).
    n = 2: exact reduction to one real integral in the difference variable
    delta = w1 - w2; the centre-of-mass integral is a classical Airy
    function and the remaining Jack factor is a 0F1 Bessel-type function.
    """
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if n not in (1, 2) or len(x) != n:
        raise UnsupportedModeError(f"airy_multi supports n in {{1, 2}} with n arguments, got n={n}", param="n")
    if not alpha > 0:
        raise DomainError("alpha must be positive", param="alpha")
    if n == 1:
        return _airy_1(float(x[0]))
    return _airy_2(float(alpha), float(x[0]), float(x[1]))


# ----------------------------------------------------------------- queries


@dataclass
class LimitQuery:
    regime: str
    x: tuple = ()
    m: int = 0
    n: int = 0
    d: float = 1.0
    theta: Optional[float] = None
    b: complex = 0.0
    rho: Optional[float] = None

    def __post_init__(self):
        if self.regime not in REGIMES:
            raise DomainError(f"unknown regime {self.regime!r}", param="regime")
        self.x = tuple(float(v) for v in self.x)
        if len(self.x) != self.m + self.n:
            raise DomainError(f"need m + n = {self.m + self.n} arguments, got {len(self.x)}", param="x")
        if self.regime in ("bulk", "edge"):
            th_d = limit_measure(self.d).theta_d
            if not self.d > 0:
                raise DomainError("d must be positive", param="d")
            if self.regime == "bulk":
                if self.theta is None or not th_d < self.theta < 2 * math.pi - th_d:
                    raise DomainError("bulk needs theta_d < theta < 2pi - theta_d", param="theta")
                if (self.m + self.n) % 2:
                    raise DomainError("bulk needs m + n even", param="m")
            else:
                if self.theta is None:
                    self.theta = th_d
                if min(abs(self.theta - th_d), abs(self.theta - (2 * math.pi - th_d))) > 1e-12:
                    raise DomainError("edge needs theta in {theta_d, 2pi - theta_d}", param="theta")

    @property
    def edge_sign(self):
        """+1 at theta_d, -1 at 2 pi - theta_d."""
        return 1 if self.theta < math.pi else -1


def bulk_rho(d, theta):
    sd = d / (1 + d)
    S = math.sin(theta / 2)
    return math.sqrt(S * S - sd * sd) / (2 * math.pi * (1 - sd) * S)


def edge_rho(d, N, sign=1):
    sd = d / (1 + d)
    th_d = 2 * math.asin(sd)
    cube = -np.cbrt(1 / math.tan(th_d / 2))  # real cube root of -cot(theta_d/2)
    return sign * (1 - sd) ** (-2 / 3) * cube * (4 * N) ** (-1 / 3)


def _with_logs(prec, fn):
    if prec is None:
        return fn(np)
    with mpmath.workprec(prec):
        return fn(mpmath)


def log_Psi(d, theta, m, n, beta, N, rho):
    """log of the bulk normalization Psi_{N,m,n}."""
    l = (m + n) // 2
    log = mpmath.log
    val = (
        (2 * l * (l + 1) / beta - l) * log(2 * mpmath.pi * rho)
        + 1j * ((m - n) / 2 * N * theta + (m - n) / beta * l * (theta - math.pi))
        - 2 * l * d * N * log(2 * mpmath.sin(theta / 2))
        + 2 * l * l / beta * log(N)
        + (m - n) ** 2 / (2 * beta) * log(d)
        + (-2 * l * (1 + d) * N - (m * (m + 1) + n * (n + 1)) / beta + l) * log(1 + d)
        + (l * (1 + 2 * d) * N + l * (l + 1) / beta - l / 2) * log(1 + 2 * d)
    )
    return val


def log_Phi(d, m, n, beta, N, sign=1):
    """log of the soft-edge normalization Phi_{N,m,n} (with the (1+2d)
    exponent taken as +(m+n)(1+2d)N/2, see the module notes)."""
    M = m + n
    log = mpmath.log
    th_d = 2 * mpmath.asin(mpmath.mpf(d) / (1 + d))
    ratio = (mpmath.sqrt(1 + 2 * d) - 1j) / (mpmath.sqrt(1 + 2 * d) + 1j)
    val = (
        (-M * d * N + M / 3 - M * (M + 2) / (3 * beta)) * log(2)
        + (-M * d * N + (m * m + n * n - 4 * m * n - m - n) / (3 * beta)) * log(d)
        + (-M * N + M / 6 - (2 * m * m + 2 * n * n - 2 * m * n + m + n) / (3 * beta)) * log(1 + d)
        + (M * (1 + 2 * d) * N / 2 - M / 3 + M * (M + 2) / (3 * beta)) * log(1 + 2 * d)
        + sign * (m - n) * M / beta * log(ratio)
        + sign * 1j * (m - n) * N * th_d / 2
        + (M / 6 + M * (M - 1) / (3 * beta)) * log(N)
    )
    return val


def bulk_edge_prediction(q: LimitQuery, beta, N, prec=None, airy=None) -> complex:
    """Leading asymptotic form of K_{b,N} at b = beta N d / 2 (bulk or edge)."""
    if q.regime not in ("bulk", "edge"):
        raise DomainError("regime must be bulk or edge", param="regime")
    m, n, d, x = q.m, q.n, q.d, np.asarray(q.x, dtype=float)
    xm, xn = x[:m].sum(), x[m:].sum()
    with mpmath.workprec(prec or 53):
        if q.regime == "bulk":
            rho = q.rho if q.rho is not None else bulk_rho(d, q.theta)
            l = (m + n) // 2
            cot = 1 / math.tan(q.theta / 2)
            lin = ((1j - d * cot) * xm - (1j + d * cot) * xn) / (2 * rho)
            g = np.exp(log_gamma_mn(0, l, l, beta / 2))
            spec = HyperSeriesSpec((2 * l / beta,), (4 * l / beta,), beta / 2)
            F = hyper_F(spec, 2j * math.pi * x).scalar().value if len(x) else 1.0
            tail = g * np.exp(-1j * math.pi * x.sum()) * F
            logc = log_Psi(d, q.theta, m, n, beta, N, rho)
        else:
            sg = q.edge_sign
            rho = q.rho if q.rho is not None else edge_rho(d, N, sg)
            sd = d / (1 + d)
            k = math.sqrt(1 - sd * sd) / (1 - sd)
            lin = ((1j - sg * k) * xm - (1j + sg * k) * xn) / (2 * rho)
            if airy is None:
                airy = airy_multi(beta / 2, m + n, x).value if m + n else 1.0
            tail = (2 * math.pi) ** (m + n) / gauss_gamma(4 / beta, m + n) * airy
            logc = log_Phi(d, m, n, beta, N, sg)
        return complex(mpmath.exp(logc + lin)) * complex(tail)


# ------------------------------------------------------------------ reports


@dataclass
class ConvergenceRow:
    key: float
    lhs: complex
    rhs: complex
    rel_err: float
    series_degree: int

    @property
    def modulus_err(self):
        return abs(abs(self.lhs) / abs(self.rhs) - 1)

    @property
    def phase_offset(self):
        return float(np.angle(self.lhs / self.rhs))


@dataclass
class ConvergenceReport:
    kind: str
    rows: list = field(default_factory=list)
    meta: dict = field(default_factory=dict)

    @property
    def errors(self):
        return [r.rel_err for r in self.rows]

    def strictly_decreasing(self, attr="rel_err"):
        e = [getattr(r, attr) for r in self.rows]
        return all(b < a for a, b in zip(e, e[1:]))

    def to_csv(self, header: Optional[dict] = None) -> str:
        buf = io.StringIO()
        for k, v in (header or {}).items():
            buf.write(f"# {k}: {v}\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["key", "lhs_re", "lhs_im", "rhs_re", "rhs_im", "rel_err", "series_degree"])
        for r in self.rows:
            w.writerow(
                [f"{r.key:.16e}"]
                + [f"{v:.16e}" for v in (r.lhs.real, r.lhs.imag, r.rhs.real, r.rhs.imag, r.rel_err)]
                + [str(int(r.series_degree))]
            )
        return buf.getvalue()


def _row(key, lhs, rhs, degree):
    lhs, rhs = complex(lhs), complex(rhs)
    return ConvergenceRow(float(key), lhs, rhs, abs(lhs - rhs) / abs(rhs), int(degree))


def singularity_limit_check(params: EnsembleParams, m, n, x, rho=1.0, N_list=(8, 16, 32), prec=None) -> ConvergenceReport:
    """N^{-2(mn + bm + conj(b) n)/beta} K at s_j = e^{i x_j/(rho N)} against
    prod e^{+- i x/(2 rho)} S_b(x / rho)."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if len(x) != m + n:
        raise DomainError(f"need m + n = {m + n} arguments", param="x")
    if rho == 0:
        raise DomainError("rho must be nonzero", param="rho")
    b, beta = complex(params.b), params.beta
    xs = x / rho
    S = S_b(b, beta / 2, m, n, xs, prec=prec)
    rhs = np.exp(0.5j * xs[:m].sum() - 0.5j * xs[m:].sum()) * S.value
    expo = -2 * (m * n + b * m + b.conjugate() * n) / beta
    rep = ConvergenceReport("singularity", meta={"beta": beta, "b": b, "m": m, "n": n, "x": x.tolist(), "rho": rho})
    for N in N_list:
        P = EnsembleParams(beta, b, int(N))
        z = np.exp(1j * x / (rho * N))
        K, deg = moments_K(P, MomentQuery(z[:m], z[m:]), prec=prec, return_degree=True)
        rep.rows.append(_row(N, np.exp(expo * math.log(N)) * K, rhs, deg))
    return rep


def _default_prec(N):
    return 96 + 6 * int(N)


def bulk_edge_check(q: LimitQuery, beta, N_list, prec=None) -> ConvergenceReport:
    """K at s_j = e^{i theta + i x_j/(rho N)} with b = beta N d / 2 against
    the bulk or edge prediction, one row per N (evaluated in mpmath)."""
    m, n, d = q.m, q.n, q.d
    x = np.asarray(q.x, dtype=float)
    airy = None
    if q.regime == "edge" and m + n:
        airy = airy_multi(beta / 2, m + n, x).value
    rep = ConvergenceReport(q.regime, meta={"beta": beta, "d": d, "theta": q.theta, "m": m, "n": n, "x": x.tolist()})
    for N in N_list:
        N = int(N)
        if q.regime == "bulk":
            rho = q.rho if q.rho is not None else bulk_rho(d, q.theta)
        else:
            rho = q.rho if q.rho is not None else edge_rho(d, N, q.edge_sign)
        p = prec or _default_prec(N)
        P = EnsembleParams(beta, beta * N * d / 2, N)
        z = np.exp(1j * q.theta + 1j * x / (rho * N))
        K, deg = moments_K(P, MomentQuery(z[:m], z[m:]), prec=p, return_degree=True)
        pred = bulk_edge_prediction(q, beta, N, prec=p, airy=airy)
        rep.rows.append(_row(N, K, pred, deg))
    return rep


def transition_exponents(alpha, m, n):
    """Exponents in the transition constant: the coefficient of b and the
    constant part of the power of (b/alpha), and the power of 2 (b-free)."""
    M = m + n
    return {
        "b_over_alpha_linear": -M / alpha,
        "b_over_alpha_const": (m * m + n * n - 4 * m * n - m - n) / (6 * alpha) + M / 6,
        "two_const": (n - 2 * m - 1) / (3 * alpha) * M + M / 3,
    }


def log_transition_prefactor(b, alpha, m, n, eta):
    """log of the transition constant times (2 pi)^{m+n} / Gamma_{2/alpha,m+n}.

    The leading (-1)^{m+n} of the printed constant is omitted (see notes).
    """
    M = m + n
    e = transition_exponents(alpha, m, n)
    t = mpmath.mpf(1) / 3
    b = mpmath.mpf(b)
    val = (
        (-b / alpha * M + e["two_const"]) * mpmath.log(2)
        + (m * m - n * n) / alpha * mpmath.log(mpmath.mpc(1, -1))
        + 0.5 * (4 * b / alpha) ** t * mpmath.fsum(eta)
        + (e["b_over_alpha_const"] + e["b_over_alpha_linear"] * b) * mpmath.log(b / alpha)
        + M * mpmath.log(2 * mpmath.pi)
        - mpmath.log(gauss_gamma(2 / alpha, M))
    )
    return val


def transition_check(b_list, alpha, m, n, eta, truncation=None) -> ConvergenceReport:
    """S_b at x_j = 2b/alpha - (4b/alpha)^{1/3} eta_j divided by the
    transition constant, against Ai_{m+n}^{(alpha)}(eta)."""
    eta = np.atleast_1d(np.asarray(eta, dtype=float))
    if m + n not in (1, 2) or len(eta) != m + n:
        raise UnsupportedModeError("transition_check needs m + n in {1, 2} and m + n arguments", param="m")
    ai = airy_multi(alpha, m + n, eta).value
    rep = ConvergenceReport("transition", meta={"alpha": alpha, "m": m, "n": n, "eta": eta.tolist()})
    for b in b_list:
        x = 2 * b / alpha - (4 * b / alpha) ** (1 / 3) * eta
        # S_b itself leaves double range near b = 150; divide before rounding
        closed = m + n == 1 or (alpha == 1 and len(set(np.round(x, 12))) == len(x))
        if closed:
            S, deg = _S_b_closed(complex(b), alpha, m, n, x, "scalar" if m + n == 1 else "determinant"), 0
        else:
            res = S_b(b, alpha, m, n, x, truncation=truncation)
            S, deg = mpmath.mpc(res.value), res.degree_used
        with mpmath.workdps(30):
            lhs = complex(S / mpmath.exp(log_transition_prefactor(b, alpha, m, n, eta)))
        rep.rows.append(_row(b, lhs, ai, deg))
    return rep


# -------------------------------------------------------- correlation limits


def correlation_limit(kind, beta, k, y, b=0.0, rho=1.0, truncation=None, prec=None) -> float:
    """Even-beta k-point correlation in the singularity, bulk or edge limit.

    singularity: the limit at spectrum scale rho near angle 0 for fixed b.
    bulk: the universal bulk form (in units where the density is 1).
    edge: a_k |Delta(y)|^beta Ai_{beta k}(y repeated beta times).
    """
    beta_i = int(beta)
    if beta_i != beta or beta_i % 2:
        raise UnsupportedModeError(f"correlation limits need even beta, got {beta}", param="beta")
    y = np.atleast_1d(np.asarray(y, dtype=float))
    if len(y) != k:
        raise DomainError(f"need k = {k} points", param="y")
    rep = np.repeat(y, beta_i)
    vdm = 1.0
    for i in range(k):
        for j in range(i):
            vdm *= abs(y[i] - y[j]) ** beta
    pol = truncation or TruncationPolicy(max_degree=96, rel_tol=1e-14)
    if prec is None and kind in ("singularity", "bulk"):
        # oscillatory arguments of size |y| cancel like e^{|y|}; widen to compensate
        big = float(np.max(np.abs(rep))) * (2 * math.pi if kind == "bulk" else 1 / abs(rho))
        prec = 64 + int(3 * big) if big > 4 else None
    if kind == "singularity":
        b = complex(b)
        bc = b.conjugate()
        spec = HyperSeriesSpec((2 / beta * b + k,), (2 / beta * (bc + b) + 2 * k,), beta / 2, pol, prec)
        F = hyper_F(spec, -1j * rep / rho).scalar().value
        val = (
            c_k(b, beta, k)
            * (2 * math.pi * rho) ** (-k)
            * np.exp(1j * (b - bc) * k * math.pi / 2)
            * np.prod(np.abs(y / rho) ** (2 * b.real) * np.exp(1j * beta * y / (2 * rho)))
            * vdm / abs(rho) ** (beta * k * (k - 1) / 2)
            * F
        )
    elif kind == "bulk":
        spec = HyperSeriesSpec((float(k),), (2.0 * k,), beta / 2, pol, prec)
        F = hyper_F(spec, 2j * math.pi * rep).scalar().value
        val = c_k(0, beta, k) * vdm * (2 * math.pi) ** (beta * k * (k - 1) / 2) * np.exp(-1j * beta * math.pi * y.sum()) * F
    elif kind == "edge":
        if beta_i * k > 2:
            raise UnsupportedModeError("edge correlations need beta * k <= 2 (Airy availability)", param="k")
        val = a_k(beta, k) * vdm * airy_multi(beta / 2, beta_i * k, rep).value
    else:
        raise DomainError(f"unknown kind {kind!r}", param="kind")
    val = complex(val)
    if abs(val.imag) > 1e-8 * abs(val):
        raise ConsistencyError(f"correlation limit has imaginary residue {val.imag:.3e}")
    return val.real
