"""Circular Jacobi beta-ensemble: normalization, moments of characteristic
polynomials, even-beta correlation functions, the MANOVA density, and two
independent numerical oracles (nested Gauss-Legendre quadrature, Metropolis).

Conventions: phi(z) = prod_j (1 - z e^{i theta_j}); the weight of one angle is
e^{i (conj(b) - b)(theta - pi)/2} |1 - e^{i theta}|^(conj(b) + b); the Jack
parameter of every series here is beta/2.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import mpmath
import numpy as np
from numba import njit
from scipy.special import loggamma, roots_legendre

from .errors import ConsistencyError, DomainError, UnsupportedModeError
from .hyper import HyperSeriesSpec, TruncationPolicy, hyper_F, one_F_zero_two_continued


@dataclass(frozen=True)
class EnsembleParams:
    beta: float
    b: complex
    N: int

    def __post_init__(self):
        if not self.beta > 0:
            raise DomainError(f"beta must be positive, got {self.beta}", param="beta")
        if not complex(self.b).real > -0.5:
            raise DomainError(f"need Re(b) > -1/2, got {self.b}", param="b")
        if int(self.N) != self.N or self.N < 1:
            raise DomainError(f"N must be a positive integer, got {self.N}", param="N")

    @property
    def alpha_jack(self):
        return self.beta / 2

    @property
    def b_conj(self):
        return complex(self.b).conjugate()

    @property
    def real_b(self):
        return complex(self.b).imag == 0


@dataclass(frozen=True)
class MomentQuery:
    s: tuple = ()
    t: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "s", tuple(complex(v) for v in self.s))
        object.__setattr__(self, "t", tuple(complex(v) for v in self.t))

    @property
    def m(self):
        return len(self.s)

    @property
    def n(self):
        return len(self.t)


@dataclass
class AngleSample:
    angles: np.ndarray
    log_weight: float


# ------------------------------------------------------------------ gamma


def _is_pole(z):
    z = complex(z)
    return abs(z.imag) < 1e-13 and z.real <= 0 and abs(z.real - round(z.real)) < 1e-13


def _lgamma(z, prec=None):
    if _is_pole(z):
        raise DomainError(f"gamma pole at {z}", param="gamma")
    if prec is None:
        return complex(loggamma(complex(z)))
    return mpmath.loggamma(mpmath.mpc(z))


def norm_const_M(N, a_prime, b_prime, alpha):
    """(2 pi)^N prod_j Gamma(1+alpha+j alpha) Gamma(1+a'+b'+j alpha) /
    (Gamma(1+alpha) Gamma(1+a'+j alpha) Gamma(1+b'+j alpha))."""
    return np.exp(log_norm_const_M(N, a_prime, b_prime, alpha))


def log_norm_const_M(N, a_prime, b_prime, alpha):
    acc = N * math.log(2 * math.pi)
    for j in range(N):
        try:
            acc += (
                _lgamma(1 + alpha + j * alpha)
                + _lgamma(1 + a_prime + b_prime + j * alpha)
                - _lgamma(1 + alpha)
                - _lgamma(1 + a_prime + j * alpha)
                - _lgamma(1 + b_prime + j * alpha)
            )
        except DomainError as exc:
            raise DomainError(f"{exc} (factor j={j})", param="j") from None
    return acc


def log_C_N(params: EnsembleParams, m: int, n: int, prec=None):
    """log of the gamma-ratio constant in front of the 2F1 representation."""
    g = 2.0 / params.beta
    b, bc, N = complex(params.b), params.b_conj, params.N
    acc = 0
    for j in range(m):
        acc += (
            _lgamma(g * (1 + bc + j), prec)
            + _lgamma(N + g * (1 + bc + b + n + j), prec)
            - _lgamma(g * (1 + bc + b + n + j), prec)
            - _lgamma(N + g * (1 + bc + j), prec)
        )
    for j in range(n):
        acc += (
            _lgamma(g * (1 + b + j), prec)
            + _lgamma(N + g * (1 + bc + b + j), prec)
            - _lgamma(g * (1 + bc + b + j), prec)
            - _lgamma(N + g * (1 + b + j), prec)
        )
    return acc


# ---------------------------------------------------------------- moments


def moment_series_spec(params: EnsembleParams, m: int, n: int, prec=None) -> HyperSeriesSpec:
    g = 2.0 / params.beta
    b, bc = complex(params.b), params.b_conj
    return HyperSeriesSpec(
        (-params.N, g * (b + n)),
        (g * (bc + b + m + n),),
        params.alpha_jack,
        TruncationPolicy(max_degree=max(1, params.N * (m + n))),
        prec,
    )


def moments_K(params: EnsembleParams, q: MomentQuery, prec: Optional[int] = None, return_degree=False):
    """E[prod_j phi(s_j) prod_k conj(phi(t_k))] in closed form.

    The terminating 2F1 (upper parameter -N) is summed exactly over
    partitions with at most N columns.  ``prec`` (bits) evaluates the series
    in mpmath arithmetic, useful when N is large and the arguments are far
    from 1.
    """
    m, n = q.m, q.n
    if any(t == 0 for t in q.t):
        raise DomainError("t_k = 0 is not allowed", param="t")
    if m + n == 0:
        return (1.0 + 0j, 0) if return_degree else 1.0 + 0j
    args = [1 - s for s in q.s] + [1 - 1 / t.conjugate() for t in q.t]
    spec = moment_series_spec(params, m, n, prec)
    if prec is None:
        res = hyper_F(spec, np.array(args))
        logc = log_C_N(params, m, n)
        tpow = np.prod([t.conjugate() ** params.N for t in q.t]) if n else 1.0
        val = complex(np.exp(logc) * tpow * res.value[0])
    else:
        with mpmath.workprec(prec):
            xs = np.array([mpmath.mpc(a) for a in args], dtype=object)
            res = hyper_F(spec, xs[None, :])
            logc = log_C_N(params, m, n, prec)
            tpow = mpmath.mpf(1)
            for t in q.t:
                tpow *= mpmath.mpc(t).conjugate() ** params.N
            val = complex(mpmath.exp(logc) * tpow * mpmath.mpc(res.value[0]))
    return (val, res.degree_used) if return_degree else val


# ------------------------------------------------------------ correlations


def _even_beta(beta):
    if float(beta) != int(beta) or int(beta) % 2:
        raise UnsupportedModeError(f"correlations need even beta, got {beta}", param="beta")
    return int(beta)


def _singularity_weight(b, theta):
    """e^{i (conj b - b)(theta - pi)/2} |1 - e^{i theta}|^(conj b + b)."""
    b = complex(b)
    theta = np.asarray(theta, dtype=float)
    mod = np.abs(2 * np.sin(theta / 2))
    with np.errstate(divide="ignore"):
        pw = np.where(mod > 0, mod ** (2 * b.real), 0.0 if b.real > 0 else 1.0)
    return np.exp(1j * (-b.imag) * (theta - np.pi)) * pw


def _vandermonde_abs(angles, beta):
    z = np.exp(1j * np.asarray(angles, dtype=float))
    out = 1.0
    for i in range(len(z)):
        for j in range(i):
            out *= abs(z[i] - z[j]) ** beta
    return out


def correlation_R(params: EnsembleParams, k: int, r, prec: Optional[int] = None) -> float:
    """k-point correlation of the (k+N)-point ensemble at angles ``r``.

    Even beta only: each angle is duplicated beta/2 times among the s's and
    the average |phi|^beta becomes the moment K(s; s).  ``params.N`` is the
    number of integrated-out angles, so the one-point function of the b = 0,
    beta = 2 ensemble is (N + 1) / (2 pi).
    """
    beta = _even_beta(params.beta)
    r = np.atleast_1d(np.asarray(r, dtype=float))
    if len(r) != k or k < 1:
        raise DomainError(f"need k = {k} angles, got {len(r)}", param="r")
    half = beta // 2
    s = [np.exp(-1j * rj) for rj in r for _ in range(half)]
    K = moments_K(params, MomentQuery(s, s), prec=prec)
    b, bc, N = complex(params.b), params.b_conj, params.N
    alpha = params.alpha_jack
    log_ratio = log_norm_const_M(N, bc, b, alpha) - log_norm_const_M(k + N, bc, b, alpha)
    fact = math.exp(math.lgamma(k + N + 1) - math.lgamma(N + 1))
    val = fact * np.exp(log_ratio) * _vandermonde_abs(r, beta) * np.prod(_singularity_weight(b, r)) * K
    if abs(val.imag) > 1e-8 * abs(val):
        raise ConsistencyError(f"correlation has imaginary residue {val.imag:.3e} at r={r.tolist()}")
    return float(val.real)


# --------------------------------------------------------------- oracles


@dataclass
class OracleResult:
    value: complex
    converged: bool
    nodes: int
    error_estimate: float


def _simplex_rule(N, nodes):
    """Tensor Gauss-Legendre rule on 0 < theta_1 < ... < theta_N < 2 pi.

    Collapsed coordinates theta_N = 2 pi v_N, theta_k = theta_{k+1} v_k keep
    every factor |e^{i theta_i} - e^{i theta_j}| = 2 sin((theta_j - theta_i)/2)
    smooth, so integer exponents give an analytic integrand.
    """
    x, w = roots_legendre(nodes)
    v, wv = (x + 1) / 2, w / 2
    grids = np.meshgrid(*([v] * N), indexing="ij")
    wgrid = np.meshgrid(*([wv] * N), indexing="ij")
    V = np.stack([g.reshape(-1) for g in grids], axis=1)
    W = np.prod(np.stack([g.reshape(-1) for g in wgrid], axis=1), axis=1)
    theta = np.empty_like(V)
    theta[:, N - 1] = 2 * np.pi * V[:, N - 1]
    jac = np.full(len(V), 2 * np.pi)
    for kk in range(N - 2, -1, -1):
        jac *= theta[:, kk + 1]
        theta[:, kk] = theta[:, kk + 1] * V[:, kk]
    return theta, W * jac


def _log_gas_weight(theta, beta, b):
    """Unnormalized density at rows of ``theta`` (real b)."""
    N = theta.shape[1]
    out = np.ones(len(theta))
    for i in range(N):
        out *= np.abs(2 * np.sin(theta[:, i] / 2)) ** (2 * b)
        for j in range(i):
            out *= np.abs(2 * np.sin((theta[:, i] - theta[:, j]) / 2)) ** beta
    return out


def _simplex_integral(N, f, tol, start=16, max_nodes=128, chunk=1 << 18):
    """N! times the ordered-simplex integral of a symmetric ``f``, with node
    doubling until two successive rules agree to ``tol``."""
    prev, nodes = None, start
    fact = math.factorial(N)
    while True:
        theta, w = _simplex_rule(N, nodes)
        acc = 0j
        for c in range(0, len(w), chunk):
            acc += np.sum(w[c : c + chunk] * f(theta[c : c + chunk]))
        val = fact * acc
        if prev is not None:
            err = abs(val - prev)
            if err <= tol * max(abs(val), 1e-300) or nodes >= max_nodes:
                return OracleResult(complex(val), bool(err <= tol * abs(val)), nodes, float(err))
        prev = val
        nodes *= 2


def _check_oracle_params(params):
    if not params.real_b or complex(params.b).real < 0:
        raise DomainError("the quadrature oracle needs real b >= 0", param="b")
    if params.N > 3:
        raise DomainError("the quadrature oracle is limited to N <= 3", param="N")


def oracle_K_quadrature(params: EnsembleParams, q: MomentQuery, tol=1e-8, max_nodes=128) -> OracleResult:
    """Direct quadrature of E[prod phi(s_j) prod conj phi(t_k)] for N <= 3."""
    _check_oracle_params(params)
    beta, b, N = params.beta, complex(params.b).real, params.N

    def f(theta):
        z = np.exp(1j * theta)
        val = _log_gas_weight(theta, beta, b).astype(complex)
        for s in q.s:
            val *= np.prod(1 - s * z, axis=1)
        for t in q.t:
            val *= np.prod(1 - np.conj(t) / z, axis=1)
        return val

    res = _simplex_integral(N, f, tol, max_nodes=max_nodes)
    M = norm_const_M(N, b, b, params.alpha_jack).real
    return OracleResult(res.value / M, res.converged, res.nodes, res.error_estimate / M)


def oracle_norm_quadrature(params: EnsembleParams, tol=1e-10, max_nodes=128) -> OracleResult:
    """Quadrature of the unnormalized density; compare with norm_const_M."""
    _check_oracle_params(params)
    beta, b = params.beta, complex(params.b).real
    return _simplex_integral(params.N, lambda th: _log_gas_weight(th, beta, b), tol, max_nodes=max_nodes)


def oracle_R_quadrature(params: EnsembleParams, k: int, r, tol=1e-8, max_nodes=128) -> OracleResult:
    """The canonical-average definition of the k-point function, integrated
    over the N remaining angles by quadrature."""
    _check_oracle_params(params)
    beta, b, N = params.beta, complex(params.b).real, params.N
    r = np.atleast_1d(np.asarray(r, dtype=float))
    if len(r) != k:
        raise DomainError(f"need k = {k} angles, got {len(r)}", param="r")
    zr = np.exp(1j * r)

    def f(theta):
        z = np.exp(1j * theta)
        val = _log_gas_weight(theta, beta, b)
        for zl in zr:
            val = val * np.prod(np.abs(zl - z) ** beta, axis=1)
        return val

    res = _simplex_integral(N, f, tol, max_nodes=max_nodes)
    pref = (
        math.factorial(k + N) / math.factorial(N)
        / norm_const_M(k + N, b, b, params.alpha_jack).real
        * _vandermonde_abs(r, beta)
        * np.prod(np.abs(2 * np.sin(r / 2)) ** (2 * b))
    )
    return OracleResult(pref * res.value, res.converged, res.nodes, float(pref * res.error_estimate))


# ------------------------------------------------------------------ MCMC


@njit(cache=True)
def _log_site(theta, i, x, beta, twob):
    acc = 0.0
    s = abs(2.0 * math.sin(x / 2.0))
    if s == 0.0:
        return -np.inf if twob > 0 else 0.0
    acc += twob * math.log(s)
    for j in range(theta.shape[0]):
        if j == i:
            continue
        d = abs(2.0 * math.sin((x - theta[j]) / 2.0))
        if d == 0.0:
            return -np.inf
        acc += beta * math.log(d)
    return acc


@njit(cache=True)
def _log_density(theta, beta, twob):
    acc = 0.0
    N = theta.shape[0]
    for i in range(N):
        acc += twob * math.log(abs(2.0 * math.sin(theta[i] / 2.0)))
        for j in range(i):
            acc += beta * math.log(abs(2.0 * math.sin((theta[i] - theta[j]) / 2.0)))
    return acc


@njit(cache=True)
def _sweeps(theta, normals, uniforms, step, beta, twob):
    """Run len(normals) sweeps in place; returns (angles per sweep, accepted)."""
    S, N = normals.shape
    out = np.empty((S, N))
    accepted = 0
    two_pi = 2.0 * math.pi
    for t in range(S):
        for i in range(N):
            x = (theta[i] + step * normals[t, i]) % two_pi
            new = _log_site(theta, i, x, beta, twob)
            if new == -np.inf:
                continue
            old = _log_site(theta, i, theta[i], beta, twob)
            if math.log(uniforms[t, i]) < new - old:
                theta[i] = x
                accepted += 1
        out[t] = theta
    return out, accepted


@dataclass
class MCMCConfig:
    sweeps: int = 100_000
    burn_in: int = 5_000
    seed: int = 0
    step: float = 0.5
    tune_every: int = 100
    accept_window: tuple = (0.2, 0.5)
    chunk: int = 4096


@dataclass
class MCMCChain:
    """Post burn-in chain; indexing yields :class:`AngleSample` objects."""

    params: EnsembleParams
    angles: np.ndarray
    acceptance: float
    step: float
    config: MCMCConfig

    def __len__(self):
        return len(self.angles)

    def __getitem__(self, i):
        th = self.angles[i]
        return AngleSample(th, float(_log_density(th, float(self.params.beta), 2 * complex(self.params.b).real)))


def mcmc_sample(params: EnsembleParams, sweeps=None, burn_in=None, seed=None, config: Optional[MCMCConfig] = None) -> MCMCChain:
    """Random-walk Metropolis on the angles, one proposal per angle per sweep.

    Proposals are Gaussian, wrapped to [0, 2 pi).  During burn-in the step is
    rescaled every ``tune_every`` sweeps until the acceptance rate falls in
    ``accept_window``; it is frozen afterwards.  All randomness comes from a
    PCG64 stream seeded by ``seed``.
    """
    cfg = config or MCMCConfig()
    cfg = MCMCConfig(**{**cfg.__dict__, **{k: v for k, v in
                        (("sweeps", sweeps), ("burn_in", burn_in), ("seed", seed)) if v is not None}})
    if not params.real_b or complex(params.b).real < 0:
        raise DomainError("the sampler needs real b >= 0", param="b")
    beta, twob, N = float(params.beta), 2 * complex(params.b).real, params.N
    rng = np.random.Generator(np.random.PCG64(cfg.seed))
    theta = (np.arange(N) + 0.5) * (2 * np.pi / N)
    step = float(cfg.step)
    lo, hi = cfg.accept_window
    done = 0
    while done < cfg.burn_in:
        S = min(cfg.tune_every, cfg.burn_in - done)
        _, acc = _sweeps(theta, rng.standard_normal((S, N)), rng.random((S, N)), step, beta, twob)
        rate = acc / (S * N)
        if rate < lo:
            step *= 0.7
        elif rate > hi:
            step = min(step * 1.3, np.pi)
        done += S
    out = np.empty((cfg.sweeps, N))
    total = 0
    for c in range(0, cfg.sweeps, cfg.chunk):
        S = min(cfg.chunk, cfg.sweeps - c)
        block, acc = _sweeps(theta, rng.standard_normal((S, N)), rng.random((S, N)), step, beta, twob)
        out[c : c + S] = block
        total += acc
    rate = total / max(cfg.sweeps * N, 1)
    return MCMCChain(params, out, rate, step, cfg)


def write_samples(path, chain: MCMCChain):
    """One line per sweep, comma-separated angles, '#' header with params."""
    p, cfg = chain.params, chain.config
    with open(path, "w", newline="\n") as fh:
        fh.write(f"# beta={p.beta!r} b={complex(p.b)!r} N={p.N}\n")
        fh.write(f"# seed={cfg.seed} sweeps={cfg.sweeps} burn_in={cfg.burn_in} step={chain.step!r}\n")
        for row in chain.angles:
            fh.write(",".join(f"{v:.16e}" for v in row) + "\n")


# ----------------------------------------------------------------- MANOVA


def _log_K(m, n, beta):
    acc = beta * m * n / 2 * math.log(2) - n * math.lgamma(beta / 2)
    for i in range(1, n + 1):
        acc += math.lgamma(beta * i / 2) + math.lgamma(beta * (m - n + i) / 2)
    return acc


def manova_density(lam, sigma, p, m_dim, beta, include_sigma_factor=False, truncation=None) -> float:
    """Joint density of the beta-MANOVA generalized eigenvalues.

    Jacobi-type weight times 1F0^{(2/beta)}((p+m) beta/2; lambda; 1 - sigma),
    The two-set factor is symmetric in its argument sets and is evaluated
    as 1F0(a; 1 - sigma; lambda), which lies in the continuation region for
    every sigma > 0.

    The printed constant leaves out prod sigma_j^(p beta/2); with
    ``include_sigma_factor`` it is restored.  The density is then normalized
    for ordered eigenvalues: its integral over (0, 1)^n is n!.
    """
    lam = np.atleast_1d(np.asarray(lam, dtype=float))
    sigma = np.atleast_1d(np.asarray(sigma, dtype=float))
    n = len(lam)
    if len(sigma) != n:
        raise DomainError("lambda and sigma need equal length", param="sigma")
    if not (p > n - 1 and m_dim > n - 1):
        raise DomainError(f"need p, m > n - 1 = {n - 1}", param="p")
    if np.any(lam <= 0) or np.any(lam >= 1):
        raise DomainError("eigenvalues must lie in (0, 1)", param="lambda")
    if np.any(sigma <= 0):
        raise DomainError("sigma must be positive", param="sigma")
    for i in range(n):
        for j in range(i):
            if abs(lam[i] - lam[j]) < 1e-14:
                raise DomainError(f"eigenvalues {j} and {i} coincide", param="lambda")
    a = (p + m_dim) * beta / 2
    alpha = 2.0 / beta
    log_c = _log_K(p + m_dim, n, beta) - _log_K(p, n, beta) - _log_K(m_dim, n, beta)
    log_w = np.sum(((p - n + 1) * beta / 2 - 1) * np.log(lam) + ((m_dim - n + 1) * beta / 2 - 1) * np.log1p(-lam))
    vdm = 1.0
    for i in range(n):
        for j in range(i):
            vdm *= abs(lam[i] - lam[j]) ** beta
    if np.all(sigma == 1):
        factor = 1.0
    else:
        # symmetric in its two argument sets; y = lambda >= 0 keeps every
        # (1 - sigma_i) lambda_j < 1 inside the continuation region
        factor = one_F_zero_two_continued(a, 1 - sigma, lam, alpha, truncation).value[0].real
    val = math.exp(log_c + log_w) * vdm * factor
    if include_sigma_factor:
        val *= float(np.prod(sigma ** (p * beta / 2)))
    return float(val)
