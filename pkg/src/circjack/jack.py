"""Jack polynomials P_kappa^(alpha) in the monomial basis.

Coefficients come from the eigen-relation of the Calogero-Sutherland operator
``D = D_2 - (2/alpha)(n-1) E_1``.  Acting on monomial symmetric functions,

    D m_mu = eps_mu m_mu + (2/alpha) sum_{i<j} sum_{t=1}^{mu_j} (mu_i - mu_j + 2t) m_{R_ij^t mu}^*

where the starred term means: ``m_mu`` appears in ``D m_nu`` with that weight
whenever ``nu = sort(mu + t e_i - t e_j)``.  The diagonal term is

    eps_mu = sum_i mu_i (mu_i - 1 - (2/alpha)(i - 1)),

independent of the number of variables.  Matching coefficients of ``m_mu`` in
``D P_kappa = eps_kappa P_kappa`` with ``c_kappa,kappa = 1`` gives

    c_kappa,mu = (2/alpha) / (eps_kappa - eps_mu) * sum (mu_i - mu_j + 2t) c_kappa,nu

solved in decreasing dominance order.  Raising moves never increase the
length, so the coefficients for ``l(mu) <= n`` close on themselves.

For batched evaluation of many polynomials at once (the hypergeometric series)
:class:`JackBasis` uses the branching rule

    P_kappa(x_1..x_j) = sum_mu psi_{kappa/mu} P_mu(x_1..x_{j-1}) x_j^{|kappa|-|mu|}

over horizontal strips ``kappa/mu``, with
``psi = prod_{s in R - C} b_mu(s) / b_kappa(s)`` and
``b(s) = (alpha a(s) + l(s) + 1) / (alpha a(s) + l(s) + alpha)``.
"""
from __future__ import annotations

import itertools
import threading
from collections import OrderedDict
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import mpmath
import numpy as np

from ._kernels import build_level, eval_level, hook_products, key_fits, log_hook_products, ones_values, padded
from .errors import ConsistencyError, DomainError
from .partitions import Partition, _enum, conjugate, hook_product, jack_at_ones, partitions_up_to


def _alpha_key(alpha):
    if isinstance(alpha, mpmath.mpf):
        return ("mpf", repr(alpha), mpmath.mp.prec)
    if isinstance(alpha, Fraction):
        return ("frac", alpha.numerator, alpha.denominator)
    return ("float", float(alpha).hex())


def _check_alpha(alpha):
    if not alpha > 0:
        raise DomainError(f"Jack parameter must be positive, got {alpha}", param="alpha")


def eigenvalue(kappa, alpha):
    """eps_kappa for the operator D_2 - (2/alpha)(n-1)E_1."""
    return sum(k * (k - 1 - 2 * i / alpha) for i, k in enumerate(kappa))


def _dominated(mu, kappa):
    sm = sk = 0
    for i in range(len(mu)):
        sm += mu[i]
        sk += kappa[i] if i < len(kappa) else 0
        if sm > sk:
            return False
    return True


def _raise(mu, i, j, t):
    nu = list(mu)
    nu[i] += t
    nu[j] -= t
    nu.sort(reverse=True)
    while nu and nu[-1] == 0:
        nu.pop()
    return tuple(nu)


@dataclass
class JackExpansion:
    kappa: Partition
    alpha: object
    coefficients: dict = field(default_factory=dict)

    def __getitem__(self, mu):
        return self.coefficients.get(Partition(mu), 0)

    def dump(self) -> list:
        """One ``kappa; mu; coefficient`` line per stored term."""
        return [
            f"{tuple(self.kappa)}; {tuple(mu)}; {c}" for mu, c in self.coefficients.items()
        ]


class _LRU:
    """Small thread-safe LRU map for coefficient tables."""

    def __init__(self, maxsize):
        self.maxsize = maxsize
        self._data = OrderedDict()
        self._lock = threading.Lock()

    def get(self, key):
        with self._lock:
            if key in self._data:
                self._data.move_to_end(key)
                return self._data[key]
        return None

    def put(self, key, value):
        with self._lock:
            self._data[key] = value
            self._data.move_to_end(key)
            while len(self._data) > self.maxsize:
                self._data.popitem(last=False)

    def clear(self):
        with self._lock:
            self._data.clear()

    def __len__(self):
        return len(self._data)


JACK_CACHE = _LRU(1 << 16)

_QUAD = mpmath.MPContext()
_QUAD.prec = 113


def jack_coefficients(kappa, alpha, max_length=None) -> JackExpansion:
    """Monomial coefficients of P_kappa.  With ``max_length`` only the terms
    with at most that many rows are computed (enough for that many variables).

    The arithmetic follows the type of ``alpha``: pass a ``Fraction`` for the
    exact rational backend.
    """
    _check_alpha(alpha)
    kappa = Partition(kappa)
    w = kappa.weight
    L = w if max_length is None else min(max_length, w)
    if kappa.length > L:
        return JackExpansion(kappa, alpha, {})
    key = (tuple(kappa), L, _alpha_key(alpha))
    hit = JACK_CACHE.get(key)
    if hit is not None:
        return hit
    if isinstance(alpha, (float, np.floating)):
        # extended binary precision, rounded once: correctly rounded doubles
        wide = _solve_coefficients(tuple(kappa), _QUAD.mpf(float(alpha)), L)
        coeffs = {mu: float(c) for mu, c in wide.items()}
    else:
        coeffs = _solve_coefficients(tuple(kappa), alpha, L)
    out = JackExpansion(kappa, alpha, {Partition(mu): c for mu, c in coeffs.items()})
    JACK_CACHE.put(key, out)
    return out


def _solve_coefficients(kappa, alpha, L):
    w = sum(kappa)
    mus = [mu for mu in _enum(w, L, kappa[0] if kappa else 0) if mu <= kappa and _dominated(mu, kappa)]
    eps_k = eigenvalue(kappa, alpha)
    two_over_alpha = 2 / alpha
    c = {}
    for mu in mus:
        if mu == kappa:
            c[mu] = alpha * 0 + 1
            continue
        acc = 0
        for i in range(len(mu)):
            for j in range(i + 1, len(mu)):
                for t in range(1, mu[j] + 1):
                    nu = _raise(mu, i, j, t)
                    cnu = c.get(nu)
                    if cnu is not None:
                        acc = acc + (mu[i] - mu[j] + 2 * t) * cnu
        gap = eps_k - eigenvalue(mu, alpha)
        if gap == 0:
            raise ConsistencyError(f"degenerate eigenvalues for kappa={kappa}, mu={mu}")
        c[mu] = two_over_alpha * acc / gap
    return c


def distinct_permutations(seq):
    """Distinct permutations of a multiset, in lexicographic order of positions."""
    counts = {}
    for v in seq:
        counts[v] = counts.get(v, 0) + 1
    values = sorted(counts, reverse=True)
    n = len(seq)
    out = []

    def rec(prefix):
        if len(prefix) == n:
            out.append(tuple(prefix))
            return
        for v in values:
            if counts[v]:
                counts[v] -= 1
                prefix.append(v)
                rec(prefix)
                prefix.pop()
                counts[v] += 1

    rec([])
    return out


def monomial(mu, x):
    """m_mu(x) for a point (or a batch, last axis = variables)."""
    mu = tuple(mu)
    x = _as_points(x)
    n = x.shape[-1]
    if len(mu) > n:
        return np.zeros(x.shape[:-1], dtype=x.dtype)[()]
    padded = mu + (0,) * (n - len(mu))
    total = 0
    for perm in distinct_permutations(padded):
        term = 1
        for k, e in enumerate(perm):
            if e:
                term = term * x[..., k] ** e
        total = total + term
    if np.isscalar(total) or isinstance(total, int):
        total = np.ones(x.shape[:-1], dtype=x.dtype) * total
    return total[()] if isinstance(total, np.ndarray) else total


def _as_points(x):
    x = np.asarray(x)
    if x.dtype.kind in "iub":
        x = x.astype(float)
    return x


def jack_eval(kappa, alpha, x):
    """P_kappa(x) by expansion in monomial symmetric functions."""
    kappa = Partition(kappa)
    x = _as_points(x)
    n = x.shape[-1]
    if kappa.length > n:
        return np.zeros(x.shape[:-1], dtype=x.dtype)[()]
    exp = jack_coefficients(kappa, alpha, max_length=n)
    total = 0
    for mu, c in exp.coefficients.items():
        total = total + c * monomial(mu, x)
    return total


# ---------------------------------------------------------------- branching


def branching_psi(kappa, mu, alpha):
    """psi_{kappa/mu} for a horizontal strip kappa/mu (P normalization)."""
    kc = conjugate(tuple(kappa))
    mc = conjugate(tuple(mu))
    out = alpha * 0 + 1
    for r, mr in enumerate(mu):
        kr = kappa[r]
        if kr == mr:
            continue
        for j in range(1, mr + 1):
            if kc[j - 1] != mc[j - 1]:
                continue
            leg = mc[j - 1] - (r + 1)
            am = mr - j
            ak = kr - j
            b_mu = (alpha * am + leg + 1) / (alpha * am + leg + alpha)
            b_k = (alpha * ak + leg + 1) / (alpha * ak + leg + alpha)
            out = out * b_mu / b_k
    return out


def _strips(kappa, j):
    """All mu with at most j-1 rows such that kappa/mu is a horizontal strip."""
    ranges = [range(kappa[r + 1] if r + 1 < len(kappa) else 0, kappa[r] + 1) for r in range(min(j - 1, len(kappa)))]
    for mu in itertools.product(*ranges):
        mu = list(mu)
        while mu and mu[-1] == 0:
            mu.pop()
        yield tuple(mu)


class JackBasis:
    """All P_kappa with l(kappa) <= n, |kappa| <= max_degree and
    kappa_1 <= max_part, evaluated together by the branching rule."""

    def __init__(self, alpha, n, max_degree, max_part=None):
        _check_alpha(alpha)
        self.alpha = alpha
        self.n = n
        self.max_degree = max_degree
        self.max_part = max_part
        self.partitions = [tuple(p) for p in partitions_up_to(max_degree, n, max_part)]
        self.index = {p: k for k, p in enumerate(self.partitions)}
        self.degrees = np.array([sum(p) for p in self.partitions], dtype=int)
        # each partition extends its parent by the last cell of its last row
        self.parent = np.zeros(len(self.partitions), dtype=np.int64)
        self.cell_row = np.zeros(len(self.partitions), dtype=np.int64)
        self.cell_col = np.zeros(len(self.partitions), dtype=np.int64)
        for k, p in enumerate(self.partitions[1:], start=1):
            par = p[:-1] + ((p[-1] - 1,) if p[-1] > 1 else ())
            self.parent[k] = self.index[par]
            self.cell_row[k] = len(p) - 1
            self.cell_col[k] = p[-1] - 1
        self._hooks = None
        self._ones = None
        # level j >= 2: list of (kappa_idx, mu_idx, power, psi)
        self.levels = []
        if isinstance(alpha, (float, np.floating)) and key_fits(max(self.degrees.max(), 1), n):
            for j in range(2, n + 1):
                self.levels.append(build_level(self.partitions, n, j, alpha))
            self._arrays = None
            return
        for j in range(2, n + 1):
            rows, cols, pows, vals = [], [], [], []
            for k, kappa in enumerate(self.partitions):
                if len(kappa) > j:
                    continue
                for mu in _strips(kappa, j):
                    rows.append(k)
                    cols.append(self.index[mu])
                    pows.append(sum(kappa) - sum(mu))
                    vals.append(branching_psi(kappa, mu, alpha))
            self.levels.append((rows, cols, pows, vals))
        self._arrays = None

    def __len__(self):
        return len(self.partitions)

    def _float_alpha(self):
        return isinstance(self.alpha, (float, np.floating))

    @property
    def hooks(self):
        """Hook products h_kappa, aligned with ``partitions``."""
        if self._hooks is None:
            if self._float_alpha():
                self._hooks = hook_products(padded(self.partitions, self.n), float(self.alpha))
            else:
                self._hooks = np.array([hook_product(p, self.alpha) for p in self.partitions], dtype=object)
        return self._hooks

    @property
    def log_hooks(self):
        """log h_kappa (float alpha only)."""
        if getattr(self, "_log_hooks", None) is None:
            self._log_hooks = log_hook_products(padded(self.partitions, self.n), float(self.alpha))
        return self._log_hooks

    @property
    def ones(self):
        """P_kappa(1^n), aligned with ``partitions``."""
        if self._ones is None:
            if self._float_alpha():
                self._ones = ones_values(padded(self.partitions, self.n), self.n, float(self.alpha))
            else:
                self._ones = np.array([jack_at_ones(p, self.n, self.alpha) for p in self.partitions], dtype=object)
        return self._ones

    def _array_levels(self):
        if self._arrays is None:
            K = len(self.partitions)
            out = []
            for rows, cols, pows, vals in self.levels:
                rows, cols, pows = (np.asarray(v, dtype=np.int64) for v in (rows, cols, pows))
                vals = np.asarray([float(v) for v in vals]) if not isinstance(vals, np.ndarray) else vals
                order = np.argsort(rows, kind="stable")
                rowptr = np.searchsorted(rows[order], np.arange(K + 1)).astype(np.int64)
                out.append((rowptr, cols[order], pows[order], vals[order]))
            self._arrays = out
        return self._arrays

    def evaluate(self, x):
        """Values of every basis polynomial, shape (len(self), npts).

        ``x`` has shape (npts, n) or (n,).  Object arrays (mpmath entries)
        take a slow exact-arithmetic path.
        """
        x = _as_points(x)
        if x.ndim == 1:
            x = x[None, :]
        if x.shape[1] != self.n:
            raise DomainError(f"expected {self.n} variables, got {x.shape[1]}", param="x")
        if x.dtype == object:
            return self._evaluate_object(x)
        x = np.ascontiguousarray(x, dtype=np.result_type(x.dtype, float))
        K, npts = len(self.partitions), x.shape[0]
        P = np.zeros((K, npts), dtype=x.dtype)
        top = self.max_degree if self.max_part is None else min(self.max_degree, self.max_part)
        for k in range(top + 1):
            P[self.index[(k,) if k else ()]] = x[:, 0] ** k
        powers = np.arange(self.max_degree + 1)[:, None]
        for j, (rowptr, cols, pows, vals) in enumerate(self._array_levels(), start=2):
            xpow = np.ascontiguousarray(x[:, j - 1][None, :] ** powers)
            nxt = np.empty_like(P)
            eval_level(rowptr, cols, pows, vals.astype(x.dtype) if x.dtype.kind == "c" else vals, P, xpow, nxt)
            P = nxt
        return P

    def _evaluate_object(self, x):
        K, npts = len(self.partitions), x.shape[0]
        P = np.empty((K, npts), dtype=object)
        P[:] = 0
        top = self.max_degree if self.max_part is None else min(self.max_degree, self.max_part)
        for k in range(top + 1):
            idx = self.index[(k,) if k else ()]
            for q in range(npts):
                P[idx, q] = x[q, 0] ** k
        for j, (rows, cols, pows, vals) in enumerate(self.levels, start=2):
            nxt = np.empty((K, npts), dtype=object)
            nxt[:] = 0
            for q in range(npts):
                xj = x[q, j - 1]
                powers = [xj ** e for e in range(self.max_degree + 1)]
                for r, c, e, v in zip(rows, cols, pows, vals):
                    nxt[r, q] = nxt[r, q] + v * P[c, q] * powers[e]
            P = nxt
        return P


@lru_cache(maxsize=64)
def _basis_cached(alpha_key, alpha, n, max_degree, max_part):
    return JackBasis(alpha, n, max_degree, max_part)


def jack_basis(alpha, n, max_degree, max_part=None) -> JackBasis:
    """Cached :class:`JackBasis` (keyed on the exact value and type of alpha)."""
    return _basis_cached(_alpha_key(alpha), alpha, n, max_degree, max_part)
