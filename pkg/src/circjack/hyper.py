"""Hypergeometric series of Jack type.

One-set series ``pFq(a; b; x)`` and two-set series ``pFq(a; b; x; y)`` are
summed over partitions with at most ``n`` rows, grouped by degree.  Every
evaluation is batched: ``x`` may hold many points (shape ``(npts, n)``) and
each parameter may be a scalar or an array of length ``npts``.

Degree blocks are accumulated with Neumaier compensation.  The degree budget
starts at ``TruncationPolicy.start_degree`` and doubles until every point has
converged or ``max_degree`` is reached.  Passing ``prec`` (bits) switches to
mpmath arithmetic for arguments where double precision cancels badly.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import mpmath
import numpy as np

from .errors import ConsistencyError, DomainError
from .jack import jack_basis

_INT_TOL = 1e-12


@dataclass(frozen=True)
class TruncationPolicy:
    max_degree: int = 96
    rel_tol: float = 1e-14
    consecutive_small: int = 3
    start_degree: int = 16

    def __post_init__(self):
        if self.max_degree < 1:
            raise DomainError("max_degree must be >= 1", param="max_degree")
        if not self.rel_tol > 0:
            raise DomainError("rel_tol must be positive", param="rel_tol")
        if self.consecutive_small < 1:
            raise DomainError("consecutive_small must be >= 1", param="consecutive_small")


@dataclass
class HyperSeriesSpec:
    """Parameters of one series: upper ``a``'s, lower ``b``'s and the Jack
    parameter.  ``prec`` (in bits) selects the mpmath path."""

    upper: Sequence = ()
    lower: Sequence = ()
    alpha: float = 1.0
    truncation: TruncationPolicy = field(default_factory=TruncationPolicy)
    prec: Optional[int] = None

    def __post_init__(self):
        if not self.alpha > 0:
            raise DomainError(f"Jack parameter must be positive, got {self.alpha}", param="alpha")
        self.upper = tuple(self.upper)
        self.lower = tuple(self.lower)

    @property
    def p(self):
        return len(self.upper)

    @property
    def q(self):
        return len(self.lower)


@dataclass
class SeriesResult:
    value: object
    degree_used: int
    converged: object
    tail_estimate: object

    def scalar(self):
        """Collapse a single-point batch to Python scalars."""
        v = np.asarray(self.value)
        if v.size != 1:
            raise DomainError("result holds more than one point", param="value")
        return SeriesResult(
            v.reshape(-1)[0],
            self.degree_used,
            bool(np.asarray(self.converged).reshape(-1)[0]),
            np.asarray(self.tail_estimate).reshape(-1)[0],
        )


# ------------------------------------------------------------------ helpers


def _points(x, n=None):
    x = np.asarray(x)
    if x.dtype != object:
        x = x.astype(complex)
    if x.ndim == 1:
        x = x[None, :]
    if x.ndim != 2:
        raise DomainError("points must have shape (n,) or (npts, n)", param="x")
    if n is not None and x.shape[1] != n:
        raise DomainError(f"expected {n} variables, got {x.shape[1]}", param="y")
    return x


def _param_array(v, npts, mp):
    arr = np.asarray(v, dtype=object if mp else complex)
    if arr.ndim == 0:
        arr = np.full(npts, arr.item(), dtype=arr.dtype)
    if arr.shape != (npts,):
        raise DomainError(f"parameter shape {arr.shape} does not match {npts} points", param="upper")
    return arr


def _nonpos_int(v):
    """-N for a scalar nonpositive integer parameter, else None."""
    vals = np.unique(np.asarray(v, dtype=complex).reshape(-1))
    if len(vals) != 1:
        return None
    z = vals[0]
    if abs(z.imag) > _INT_TOL or z.real > _INT_TOL:
        return None
    r = round(z.real)
    return int(-r) if abs(z.real - r) < _INT_TOL else None


def check_admissible(lower, alpha, n):
    """Raise unless (i-1)/alpha - b_j avoids {0,1,2,...} for rows i <= n."""
    for j, b in enumerate(lower, start=1):
        for bv in np.unique(np.asarray(b, dtype=complex).reshape(-1)):
            for i in range(1, n + 1):
                t = (i - 1) / alpha - bv
                if abs(t.imag) < _INT_TOL and t.real > -_INT_TOL and abs(t.real - round(t.real)) < _INT_TOL:
                    raise DomainError(
                        f"lower parameter b_{j}={bv} inadmissible at row i={i}", param=f"lower[{j - 1}]"
                    )


def _coefficients(basis, upper, lower, alpha, mp):
    """[a]_k.../([b]_k... h_k) for every partition of the basis, shape (K, npts).

    Built cell by cell: each partition extends its parent by one cell whose
    content is j - i/alpha.
    """
    npts = len(upper[0]) if upper else (len(lower[0]) if lower else 1)
    K = len(basis)
    content = basis.cell_col - basis.cell_row / alpha if not mp else [
        int(j) - int(i) / alpha for i, j in zip(basis.cell_row, basis.cell_col)
    ]
    hooks = basis.hooks if mp else None
    if mp:
        ratio = np.empty((K, npts), dtype=object)
        ratio[:] = mpmath.mpf(1)
    else:
        ratio = np.ones((K, npts), dtype=complex)
    c = np.asarray(content, dtype=object if mp else float)[:, None]
    for a in upper:
        ratio = ratio * (a[None, :] + c)
    for b in lower:
        ratio = ratio / (b[None, :] + c)
    if mp:
        hr = hooks[basis.parent] / hooks
    else:
        lh = basis.log_hooks
        hr = np.exp(lh[basis.parent] - lh)
    ratio = ratio * hr[:, None]
    out = np.empty_like(ratio)
    out[0] = ratio[0] if mp else 1.0
    if mp:
        out[0] = mpmath.mpf(1)
    parent = basis.parent
    for k in range(1, K):
        out[k] = out[parent[k]] * ratio[k]
    return out


def _block_sums(terms, degrees, D):
    """Sum terms (K, npts) into degree blocks (D+1, npts)."""
    starts = np.searchsorted(degrees, np.arange(D + 1))
    return np.add.reduceat(terms, starts, axis=0) if terms.dtype != object else np.array(
        [terms[s:e].sum(axis=0) for s, e in zip(starts, list(starts[1:]) + [len(terms)])]
    )


def _neumaier(blocks):
    s = np.zeros(blocks.shape[1], dtype=blocks.dtype)
    comp = np.zeros_like(s)
    for blk in blocks:
        t = s + blk
        big = np.abs(s) >= np.abs(blk)
        comp = comp + np.where(big, (s - t) + blk, (blk - t) + s)
        s = t
    return s + comp


def _convergence(blocks, total, policy, exhausted):
    """Per-point convergence flag and tail estimate from the degree blocks."""
    mags = np.abs(blocks).astype(float)
    cs = min(policy.consecutive_small, mags.shape[0])
    last = mags[-cs:]
    scale = np.abs(total).astype(float)
    small = np.all(last < policy.rel_tol * scale, axis=0)
    zero = np.all(last == 0, axis=0)
    rising = np.all(np.diff(last, axis=0) >= 0, axis=0) if cs > 1 else np.zeros_like(small)
    conv = exhausted | zero | (small & ~rising)
    tail = np.where(exhausted | zero, 0.0, last.max(axis=0))
    return conv, tail


def _sum_series(spec: HyperSeriesSpec, x, y=None) -> SeriesResult:
    mp = spec.prec is not None
    X = _points(x)
    npts, n = X.shape
    Y = None if y is None else _points(y, n)
    if Y is not None and Y.shape[0] != npts:
        Y = np.broadcast_to(Y, X.shape)
    alpha = spec.alpha
    check_admissible(spec.lower, alpha, n)

    stop = [N for N in (_nonpos_int(a) for a in spec.upper) if N is not None]
    max_part = min(stop) if stop else None
    pol = spec.truncation
    if spec.p == spec.q + 1 and max_part is None:
        prod = np.abs(X.astype(complex)) if Y is None else np.abs(
            X.astype(complex)[:, :, None] * Y.astype(complex)[:, None, :]
        )
        if prod.size and prod.max() >= 1:
            raise DomainError(
                "argument outside the radius guard max|x_i y_j| < 1; use the continued form",
                param="x",
            )

    if mp:
        with mpmath.workprec(spec.prec):
            return _sum_mp(spec, X, Y, max_part, npts, n)

    upper = [_param_array(a, npts, False) for a in spec.upper]
    lower = [_param_array(b, npts, False) for b in spec.lower]
    D = n * max_part if max_part is not None else min(pol.start_degree, pol.max_degree)
    while True:
        basis = jack_basis(float(alpha), n, D, max_part)
        coef = _coefficients(basis, upper, lower, float(alpha), False)
        terms = coef * basis.evaluate(X)
        if Y is not None:
            terms = terms * basis.evaluate(Y) / basis.ones[:, None]
        blocks = _block_sums(terms, basis.degrees, D)
        total = _neumaier(blocks)
        exhausted = max_part is not None
        conv, tail = _convergence(blocks, total, pol, np.full(npts, exhausted))
        if exhausted or conv.all() or D >= pol.max_degree:
            return SeriesResult(total, D, conv, tail)
        D = min(2 * D, pol.max_degree)


def _sum_mp(spec, X, Y, max_part, npts, n):
    pol = spec.truncation
    alpha = mpmath.mpf(spec.alpha)
    conv_x = np.vectorize(lambda v: mpmath.mpc(v), otypes=[object])
    Xm = X if X.dtype == object else conv_x(X)
    Ym = None if Y is None else (Y if Y.dtype == object else conv_x(Y))
    upper = [_param_array(_mp_param(a), npts, True) for a in spec.upper]
    lower = [_param_array(_mp_param(b), npts, True) for b in spec.lower]
    D = n * max_part if max_part is not None else min(pol.start_degree, pol.max_degree)
    while True:
        basis = jack_basis(alpha, n, D, max_part)
        coef = _coefficients(basis, upper, lower, alpha, True)
        terms = coef * basis.evaluate(Xm)
        if Ym is not None:
            terms = terms * basis.evaluate(Ym) / basis.ones[:, None]
        blocks = _block_sums(terms, basis.degrees, D)
        total = blocks.sum(axis=0)
        exhausted = max_part is not None
        conv, tail = _convergence(
            np.vectorize(abs, otypes=[float])(blocks),
            np.vectorize(abs, otypes=[float])(total),
            pol,
            np.full(npts, exhausted),
        )
        if exhausted or conv.all() or D >= pol.max_degree:
            value = np.array([complex(v) for v in total])
            return SeriesResult(value, D, conv, tail)
        D = min(2 * D, pol.max_degree)


def _mp_param(a):
    arr = np.asarray(a)
    if arr.ndim == 0:
        v = arr.item()
        return v if isinstance(v, (mpmath.mpf, mpmath.mpc)) else mpmath.mpc(v)
    return np.array([v if isinstance(v, (mpmath.mpf, mpmath.mpc)) else mpmath.mpc(v) for v in arr], dtype=object)


# ------------------------------------------------------------------ public


def hyper_F(spec: HyperSeriesSpec, x) -> SeriesResult:
    """One-set series pFq(a; b; x).  ``x`` has shape (n,) or (npts, n)."""
    return _sum_series(spec, x)


def hyper_F2(spec: HyperSeriesSpec, x, y) -> SeriesResult:
    """Two-set series pFq(a; b; x; y) with P(x) P(y) / P(1^n) weights."""
    return _sum_series(spec, x, y)


def _as_vector(v, name):
    v = np.atleast_1d(np.asarray(v, dtype=complex))
    if v.ndim != 1:
        raise DomainError(f"{name} must be one point", param=name)
    return v


# ------------------------------------------------------------ closed forms


def one_f_zero_closed(a, x):
    """prod_i (1 - x_i)^(-a) on Re x_i < 1, principal branch per factor."""
    x = np.asarray(x, dtype=complex)
    if np.any(x.real >= 1):
        raise DomainError("closed form needs Re(x_i) < 1", param="x")
    a = np.asarray(a, dtype=complex)
    if x.ndim == 2 and a.ndim == 1:
        a = a[:, None]
    return np.prod((1 - x) ** (-a), axis=-1)


def continuation_shift(x, y):
    """Shift b used to continue the two-set 1F0 series beyond |x_i y_j| < 1.

    Returns ``(b, ratio)`` per point: ``b`` minimizes the contraction
    max |(b + x_i) y_j / (1 + b y_j)| over a grid, subject to b > b_0 where
    b_0 = max (|x_i y_j|^2 - 1) / (2 y_j (1 - Re x_i y_j)).
    """
    X = _points(x).astype(complex)
    Y = _points(y, X.shape[1]).real.astype(float)
    Y = np.broadcast_to(Y, X.shape)
    xy = X[:, :, None] * Y[:, None, :]
    yy = np.broadcast_to(Y[:, None, :], xy.shape)
    with np.errstate(divide="ignore", invalid="ignore"):
        b0 = np.where(yy > 0, (np.abs(xy) ** 2 - 1) / (2 * yy * (1 - xy.real)), -np.inf)
    b0 = b0.reshape(len(X), -1).max(axis=1)
    needs = np.abs(xy).reshape(len(X), -1).max(axis=1) >= 1
    lo = np.where(needs, np.maximum(b0, 0.0), 0.0)
    # candidate shifts: lo, then lo plus a geometric ladder
    ladder = np.concatenate([[0.0], np.geomspace(1e-3, 1e4, 560)])
    grid = lo[:, None] + ladder[None, :]
    if np.any(needs):
        grid[needs, 0] = lo[needs] + 1e-9 * (1 + lo[needs])
    b_out = np.empty(len(X))
    r_out = np.empty(len(X))
    for s in range(0, len(X), 256):
        g, Xc, Yc = grid[s : s + 256], X[s : s + 256], Y[s : s + 256]
        num = np.abs(g[:, :, None, None] + Xc[:, None, :, None]) * Yc[:, None, None, :]
        ratio = (num / (1 + g[:, :, None, None] * Yc[:, None, None, :])).max(axis=(2, 3))
        best = ratio.argmin(axis=1)
        idx = np.arange(len(g))
        b_out[s : s + 256] = g[idx, best]
        r_out[s : s + 256] = ratio[idx, best]
    return b_out, r_out


def one_F_zero_two_continued(a, x, y, alpha, truncation=None, prec=None) -> SeriesResult:
    """Two-set 1F0(a; x; y) on the region Re(x_i y_j) < 1, y_j >= 0.

    Uses the shifted representation
    prod (1 + b y_j)^(-a) 1F0(a; b + x; y / (1 + b y)), with ``b`` from
    :func:`continuation_shift`; ``b = 0`` is the plain series.
    """
    X = _points(x).astype(complex)
    npts, n = X.shape
    Yc = _points(y, n)
    Yc = np.broadcast_to(Yc, X.shape).astype(complex)
    if np.any(np.abs(Yc.imag) > 0) or np.any(Yc.real < 0):
        raise DomainError("continuation needs real y_j >= 0", param="y")
    Y = Yc.real
    if np.any((X[:, :, None] * Y[:, None, :]).real >= 1):
        raise DomainError("outside the region Re(x_i y_j) < 1", param="x")
    b, ratio = continuation_shift(X, Y)
    if np.any(ratio >= 1):
        raise DomainError("no admissible shift found", param="x")
    Xs = X + b[:, None]
    Ys = Y / (1 + b[:, None] * Y)
    spec = HyperSeriesSpec((a,), (), alpha, truncation or TruncationPolicy(), prec)
    res = hyper_F2(spec, Xs, Ys)
    a_arr = np.asarray(a, dtype=complex)
    a_col = a_arr[:, None] if a_arr.ndim == 1 else a_arr
    pref = np.prod((1 + b[:, None] * Y) ** (-a_col), axis=1)
    return SeriesResult(pref * res.value, res.degree_used, res.converged, np.abs(pref) * res.tail_estimate)


# ------------------------------------------------------------------ alpha = 1


def _scalar_kernel(upper, lower, z, deriv=0):
    """d^r/dz^r of sum_k (a)_k / (b)_k z^k / k!, via mpmath.hyper."""
    c = mpmath.mpf(1)
    for a in upper:
        c *= mpmath.rf(a, deriv)
    for b in lower:
        c /= mpmath.rf(b, deriv)
    return c * mpmath.hyper([a + deriv for a in upper], [b + deriv for b in lower], z)


def _distinct(v, name):
    v = list(v)
    scale = max([1.0] + [abs(t) for t in v])
    for i in range(len(v)):
        for j in range(i):
            if abs(v[i] - v[j]) < 1e-8 * scale:
                raise DomainError(
                    f"coincident {name} entries {i} and {j}; use the series path instead", param=name
                )


def alpha1_determinant(spec: HyperSeriesSpec, x, y=None, dps=40):
    """Determinant form of the alpha = 1 series (Schur case).

    ``spec.upper`` / ``spec.lower`` are the parameters of the series itself,
    already including the shift by n - 1; the scalar kernel uses them minus
    n - 1.  With ``y`` the two-set series is returned, otherwise the one-set
    series through the confluent determinant.
    """
    if spec.alpha != 1:
        raise DomainError("determinant form needs alpha = 1", param="alpha")
    x = _as_vector(x, "x")
    n = len(x)
    _distinct(x, "x")
    if y is not None:
        y = _as_vector(y, "y")
        if len(y) != n:
            raise DomainError("x and y need equal length", param="y")
        _distinct(y, "y")
    with mpmath.workdps(dps):
        up = [mpmath.mpc(a) - (n - 1) for a in spec.upper]
        lo = [mpmath.mpc(b) - (n - 1) for b in spec.lower]
        pref = mpmath.mpf(1)
        fact = mpmath.mpf(1)
        for i in range(n):
            fact *= mpmath.factorial(i)
            num = mpmath.mpf(1)
            for b in lo:
                num *= mpmath.rf(b, i)
            den = mpmath.mpf(1)
            for a in up:
                den *= mpmath.rf(a, i)
            if den == 0:
                raise DomainError(f"vanishing prefactor (a)_{i}", param="upper")
            pref *= num / den
        xs = [mpmath.mpc(v) for v in x]
        vx = mpmath.matrix(n, n)
        for j in range(n):
            for k in range(n):
                vx[j, k] = xs[j] ** k
        if y is not None:
            ys = [mpmath.mpc(v) for v in y]
            vy = mpmath.matrix(n, n)
            F = mpmath.matrix(n, n)
            for j in range(n):
                for k in range(n):
                    vy[j, k] = ys[j] ** k
                    F[j, k] = _scalar_kernel(up, lo, xs[j] * ys[k])
            val = fact * pref * mpmath.det(F) / (mpmath.det(vx) * mpmath.det(vy))
        else:
            F = mpmath.matrix(n, n)
            for j in range(n):
                for k in range(n):
                    F[j, k] = xs[j] ** k * _scalar_kernel(up, lo, xs[j], deriv=k)
            val = pref * mpmath.det(F) / mpmath.det(vx)
        return complex(val)


# ---------------------------------------------------------------- identities


@dataclass
class IdentityCheck:
    name: str
    max_residual: float
    worst_point: dict
    tolerance: float
    npoints: int

    @property
    def passed(self):
        return self.max_residual < self.tolerance


@dataclass
class IdentityReport:
    checks: list

    @property
    def passed(self):
        return all(c.passed for c in self.checks)

    def text(self) -> str:
        lines = []
        for c in self.checks:
            status = "ok" if c.passed else "FAIL"
            lines.append(f"{c.name:8s} {status:4s} max_rel_residual={c.max_residual:.3e} points={c.npoints}")
            if not c.passed:
                lines.append(f"         worst point: {c.worst_point}")
        return "\n".join(lines) + "\n"


def _disk(rng, shape, radius):
    r = radius * np.sqrt(rng.uniform(size=shape))
    return r * np.exp(2j * np.pi * rng.uniform(size=shape))


def _rel(lhs, rhs):
    return np.abs(lhs - rhs) / np.maximum(np.abs(lhs), np.abs(rhs))


_GROUPS = [(n, al) for n in (1, 2, 3) for al in (0.5, 1.0, 2.0)]


def _split(npoints):
    sizes = [npoints // len(_GROUPS)] * len(_GROUPS)
    for i in range(npoints - sum(sizes)):
        sizes[i] += 1
    return sizes


def _run_identity(name, npoints, seed, tol, policy, sides):
    """Evaluate ``sides(rng, n, alpha, m) -> (lhs, rhs, params)`` over the groups."""
    rng = np.random.default_rng(seed)
    worst, worst_pt = -1.0, {}
    for (n, al), m in zip(_GROUPS, _split(npoints)):
        if m == 0:
            continue
        lhs, rhs, params = sides(rng, n, al, m, policy)
        res = _rel(lhs, rhs)
        i = int(np.argmax(res))
        if res[i] > worst:
            worst = float(res[i])
            worst_pt = {"n": n, "alpha": al, **{k: np.asarray(v)[i].tolist() for k, v in params.items()}}
    return IdentityCheck(name, worst, worst_pt, tol, npoints)


def _vip0(rng, n, al, m, pol):
    a = _disk(rng, m, 2.0)
    b = _disk(rng, m, 0.4)
    x = _disk(rng, (m, n), 0.4)
    y = _disk(rng, (m, n), 0.4)
    lhs = hyper_F2(HyperSeriesSpec((a,), (), al, pol), x + b[:, None], y).value
    z = y / (1 - b[:, None] * y)
    rhs = np.prod((1 - b[:, None] * y) ** (-a[:, None]), axis=1) * hyper_F2(HyperSeriesSpec((a,), (), al, pol), x, z).value
    return lhs, rhs, {"a": a, "b": b, "x": x, "y": y}


def _vip1(rng, n, al, m, pol):
    a, b = _disk(rng, m, 0.6), _disk(rng, m, 0.6)
    x, y = _disk(rng, (m, n), 0.6), _disk(rng, (m, n), 0.6)
    spec = HyperSeriesSpec((), (), al, pol)
    lhs = hyper_F2(spec, x + a[:, None], y + b[:, None]).value
    rhs = np.exp(n * a * b + a * y.sum(1) + b * x.sum(1)) * hyper_F2(spec, x, y).value
    return lhs, rhs, {"a": a, "b": b, "x": x, "y": y}


def _two_level(rng, n, m):
    k = rng.integers(1, n, size=m) if n > 1 else rng.integers(0, 2, size=m)
    a, b = _disk(rng, m, 0.8), _disk(rng, m, 0.8)
    y = np.where(np.arange(n)[None, :] < k[:, None], a[:, None], b[:, None])
    return k, a, b, y


def _vip2(rng, n, al, m, pol):
    k, a, b, y = _two_level(rng, n, m)
    x = _disk(rng, (m, n), 0.8)
    lhs = hyper_F2(HyperSeriesSpec((), (), al, pol), x, y).value
    spec = HyperSeriesSpec((k / al,), (n / al,), al, pol)
    rhs = np.exp(b * x.sum(1)) * hyper_F(spec, (a - b)[:, None] * x).value
    return lhs, rhs, {"k": k, "a": a, "b": b, "x": x}


def _vip3(rng, n, al, m, pol):
    k, a, b, y = _two_level(rng, n, m)
    x = _disk(rng, (m, n), 0.8)
    lhs = hyper_F2(HyperSeriesSpec((), (), al, pol), x, y).value
    spec = HyperSeriesSpec((k / al,), (n / al,), al, pol)
    shifted = (a - b)[:, None] * (x - x[:, :1])
    rhs = np.exp((a - b) * k * x[:, 0] + b * x.sum(1)) * hyper_F(spec, shifted).value
    return lhs, rhs, {"k": k, "a": a, "b": b, "x": x}


def _kummer(rng, n, al, m, pol):
    a = _disk(rng, m, 2.0)
    c = (n - 1) / al + rng.uniform(0.5, 2.5, size=m) + 1j * rng.uniform(-1, 1, size=m)
    x = _disk(rng, (m, n), 1.5)
    lhs = np.exp(x.sum(1)) * hyper_F(HyperSeriesSpec((c - a,), (c,), al, pol), -x).value
    rhs = hyper_F(HyperSeriesSpec((a,), (c,), al, pol), x).value
    return lhs, rhs, {"a": a, "c": c, "x": x}


IDENTITIES = {"vip0": _vip0, "vip1": _vip1, "vip2": _vip2, "vip3": _vip3, "kummer": _kummer}


def identity_suite(npoints=100, seed=0, tol=1e-10, names=None, truncation=None) -> IdentityReport:
    """Randomized check of the translation identities and the Kummer relation.

    Points are split over n in {1,2,3} and alpha in {1/2,1,2}; arguments are
    drawn from small complex disks so both sides converge absolutely.
    """
    pol = truncation or TruncationPolicy(max_degree=96, rel_tol=1e-15)
    names = list(IDENTITIES) if names is None else list(names)
    checks = []
    for off, name in enumerate(names):
        if name not in IDENTITIES:
            raise DomainError(f"unknown identity {name!r}", param="names")
        checks.append(_run_identity(name, npoints, seed + 7919 * off, tol, pol, IDENTITIES[name]))
    return IdentityReport(checks)


# ---------------------------------------------------------------- positivity


@dataclass
class PositivityCheck:
    name: str
    npoints: int
    nonpositive: int
    unconverged: int
    min_value: float
    worst_point: dict

    @property
    def passed(self):
        return self.nonpositive == 0 and self.unconverged == 0


def _positivity_0f0(rng, n, al, m, pol):
    x = rng.uniform(-2.0, 2.0, size=(m, n))
    y = rng.uniform(-2.0, 2.0, size=(m, n))
    res = hyper_F2(HyperSeriesSpec((), (), al, pol), x, y)
    return res, {"x": x, "y": y}


def _positivity_1f0(rng, n, al, m, pol):
    # region y_j >= 0, x_i y_j < 1; half the points beyond the unit radius
    a = (n - 1) / al + rng.uniform(0.0, 3.0, size=m)
    far = rng.uniform(size=m) < 0.5
    x = np.where(far[:, None], rng.uniform(-3.0, -1.0, size=(m, n)), rng.uniform(-1.0, 0.5, size=(m, n)))
    y = np.where(far[:, None], rng.uniform(0.5, 1.0, size=(m, n)), rng.uniform(0.0, 1.0, size=(m, n)))
    res = one_F_zero_two_continued(a, x, y, al, truncation=pol)
    return res, {"a": a, "x": x, "y": y}


POSITIVITY = {"0F0": _positivity_0f0, "1F0": _positivity_1f0}


def positivity_check(name, npoints=10_000, seed=0, truncation=None, chunk=250) -> PositivityCheck:
    """Count non-positive values of a real two-set series at random points.

    ``name`` is ``"0F0"`` (x, y real in [-2, 2]^n) or ``"1F0"`` (a >= (n-1)/alpha,
    with (x, y) drawn from [-1, 0.5)^n x [0, 1]^n or from [-3, -1]^n x [0.5, 1]^n,
    the second box lying outside the plain series radius).  Groups as in
    :func:`identity_suite`.
    """
    if name not in POSITIVITY:
        raise DomainError(f"unknown positivity family {name!r}", param="name")
    pol = truncation or TruncationPolicy(max_degree=96, rel_tol=1e-14)
    rng = np.random.default_rng(seed)
    bad = unconv = 0
    lo, lo_pt = np.inf, {}
    for (n, al), m in zip(_GROUPS, _split(npoints)):
        for start in range(0, m, chunk):
            res, params = POSITIVITY[name](rng, n, al, min(chunk, m - start), pol)
            bad, unconv, lo, lo_pt = _tally(name, n, al, res, params, bad, unconv, lo, lo_pt)
    return PositivityCheck(name, npoints, bad, unconv, lo, lo_pt)


def _tally(name, n, al, res, params, bad, unconv, lo, lo_pt):
    val = np.asarray(res.value)
    if np.max(np.abs(val.imag)) > 1e-10 * np.max(np.abs(val)):
        raise ConsistencyError(f"{name}: real arguments produced a complex value")
    v = val.real
    bad += int(np.sum(v <= 0))
    unconv += int(np.sum(~np.asarray(res.converged)))
    i = int(np.argmin(v))
    if v[i] < lo:
        lo = float(v[i])
        lo_pt = {"n": n, "alpha": al, **{k: np.asarray(p)[i].tolist() for k, p in params.items()}}
    return bad, unconv, lo, lo_pt
