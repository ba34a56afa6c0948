"""Compiled inner loops (numba) for the branching-rule tables."""
from __future__ import annotations

import numpy as np
from numba import config, njit, prange

# OpenMP first: safe under concurrent callers, and avoids probing an old TBB.
config.THREADING_LAYER_PRIORITY = ["omp", "workqueue", "tbb"]


@njit(cache=True)
def _encode(row, base):
    key = 0
    mult = 1
    for v in row:
        key += v * mult
        mult *= base
    return key


@njit(cache=True)
def _psi(kappa, mu, kc, mc, alpha):
    out = 1.0
    for r in range(mu.shape[0]):
        mr = mu[r]
        kr = kappa[r]
        if kr == mr:
            continue
        for c in range(mr):
            if kc[c] != mc[c]:
                continue
            leg = mc[c] - (r + 1)
            am = mr - (c + 1)
            ak = kr - (c + 1)
            b_mu = (alpha * am + leg + 1.0) / (alpha * am + leg + alpha)
            b_k = (alpha * ak + leg + 1.0) / (alpha * ak + leg + alpha)
            out *= b_mu / b_k
    return out


@njit(cache=True)
def _conj(row, width, out):
    for c in range(width):
        cnt = 0
        for v in row:
            if v > c:
                cnt += 1
        out[c] = cnt


@njit(cache=True)
def _level(P, keys, order, j, alpha, base, fill, rows, cols, pows, vals):
    """Enumerate horizontal strips kappa/mu with l(mu) <= j-1 for every kappa.

    With ``fill`` false only counts; otherwise writes the (kappa, mu, power,
    psi) tables.  ``P`` holds partitions padded with zeros, ``keys`` the
    sorted encodings and ``order`` the matching row indices of ``P``.
    """
    K, n = P.shape
    width = 1
    for k in range(K):
        if P[k, 0] > width:
            width = P[k, 0]
    kc = np.zeros(width + 1, np.int64)
    mc = np.zeros(width + 1, np.int64)
    mu = np.zeros(n, np.int64)
    lo = np.zeros(n, np.int64)
    hi = np.zeros(n, np.int64)
    count = 0
    m = j - 1
    for k in range(K):
        kap = P[k]
        length = 0
        for v in kap:
            if v > 0:
                length += 1
        if length > j:
            continue
        wk = 0
        for v in kap:
            wk += v
        if fill:
            _conj(kap, width, kc)
        for r in range(m):
            hi[r] = kap[r]
            lo[r] = kap[r + 1] if r + 1 < n else 0
            mu[r] = lo[r]
        for r in range(m, n):
            mu[r] = 0
        while True:
            if fill:
                wm = 0
                for v in mu:
                    wm += v
                key = _encode(mu, base)
                pos = np.searchsorted(keys, key)
                _conj(mu, width, mc)
                rows[count] = k
                cols[count] = order[pos]
                pows[count] = wk - wm
                vals[count] = _psi(kap, mu, kc, mc, alpha)
            count += 1
            # odometer over mu_r in [lo_r, hi_r]
            r = 0
            while r < m:
                if mu[r] < hi[r]:
                    mu[r] += 1
                    break
                mu[r] = lo[r]
                r += 1
            if r == m:
                break
    return count


def build_level(partitions, n, j, alpha):
    """Branching table of level j for float alpha, as numpy arrays."""
    K = len(partitions)
    P = np.zeros((K, n), np.int64)
    for k, p in enumerate(partitions):
        P[k, : len(p)] = p
    base = int(P.max()) + 1 if K else 1
    raw = P @ (base ** np.arange(n, dtype=np.int64))
    order = np.argsort(raw, kind="stable").astype(np.int64)
    keys = raw[order]
    empty_i = np.zeros(0, np.int64)
    empty_f = np.zeros(0, np.float64)
    total = _level(P, keys, order, j, float(alpha), base, False, empty_i, empty_i, empty_i, empty_f)
    rows = np.empty(total, np.int64)
    cols = np.empty(total, np.int64)
    pows = np.empty(total, np.int64)
    vals = np.empty(total, np.float64)
    _level(P, keys, order, j, float(alpha), base, True, rows, cols, pows, vals)
    return rows, cols, pows, vals


def key_fits(max_part, n):
    return (max_part + 1) ** n < 2**62


@njit(cache=True)
def hook_products(P, alpha):
    """h_kappa = prod over cells of (1 + arm + leg/alpha) for every row of P."""
    K, n = P.shape
    out = np.ones(K)
    for k in range(K):
        for i in range(n):
            for j in range(P[k, i]):
                leg = 0
                for r in range(i + 1, n):
                    if P[k, r] > j:
                        leg += 1
                out[k] *= 1.0 + (P[k, i] - j - 1) + leg / alpha
    return out


@njit(cache=True)
def log_hook_products(P, alpha):
    """log h_kappa; the products themselves overflow past degree ~170."""
    K, n = P.shape
    out = np.zeros(K)
    for k in range(K):
        for i in range(n):
            for j in range(P[k, i]):
                leg = 0
                for r in range(i + 1, n):
                    if P[k, r] > j:
                        leg += 1
                out[k] += np.log(1.0 + (P[k, i] - j - 1) + leg / alpha)
    return out


@njit(cache=True)
def ones_values(P, n_vars, alpha):
    """P_kappa(1^n) for every row of P."""
    K, n = P.shape
    out = np.ones(K)
    for k in range(K):
        for i in range(n):
            for j in range(P[k, i]):
                leg = 0
                for r in range(i + 1, n):
                    if P[k, r] > j:
                        leg += 1
                arm = P[k, i] - j - 1
                out[k] *= (n_vars + alpha * j - i) / (1.0 + alpha * arm + leg)
    return out


def padded(partitions, n):
    P = np.zeros((len(partitions), n), np.int64)
    for k, p in enumerate(partitions):
        P[k, : len(p)] = p
    return P


@njit(cache=True, parallel=True)
def eval_level(rowptr, cols, pows, vals, P, xpow, out):
    """out[k] = sum over strips of psi * P[mu] * x_j^(|kappa|-|mu|), row-parallel."""
    K = rowptr.shape[0] - 1
    npts = P.shape[1]
    for k in prange(K):
        for t in range(npts):
            out[k, t] = 0
        for e in range(rowptr[k], rowptr[k + 1]):
            c = cols[e]
            w = pows[e]
            v = vals[e]
            for t in range(npts):
                out[k, t] += v * P[c, t] * xpow[w, t]
