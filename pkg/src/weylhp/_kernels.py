"""Array kernels for the hot loops of the BEG pipeline.

Polynomials travel through here as a pair ``(exps, coeffs)``: ``exps`` is an
``int32`` array of shape ``(T, 4n)`` laid out as ``x1..xn y1..yn z1..zn t1..tn``
and ``coeffs`` is either ``int64`` or an ``object`` array of Python ints.

Two interchangeable backends exist: numba ``@njit`` loops and plain numpy.
``WEYLHP_BACKEND=numpy`` forces the numpy path; by default numba is used when it
imports.  Object-dtype coefficients (arbitrary precision) always take the numpy
path.  Both backends return identical arrays: the final ordering is fixed by a
lexicographic sort outside the backend.
"""

from __future__ import annotations

import math
import os
from itertools import permutations

import numpy as np

try:  # pragma: no cover - exercised implicitly
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    HAVE_NUMBA = False

EXP_DTYPE = np.int32
INT64_SAFE = 2**62


def default_backend() -> str:
    requested = os.environ.get("WEYLHP_BACKEND", "").strip().lower()
    if requested in ("numpy", "python", "off", "0"):
        return "numpy"
    if requested == "numba" and not HAVE_NUMBA:
        raise RuntimeError("WEYLHP_BACKEND=numba but numba is not importable")
    return "numba" if HAVE_NUMBA else "numpy"


_backend = default_backend()


def get_backend() -> str:
    return _backend


def set_backend(name: str) -> str:
    """Switch backend at runtime; returns the previous one."""
    global _backend
    if name not in ("numba", "numpy"):
        raise ValueError(f"unknown backend {name!r}")
    if name == "numba" and not HAVE_NUMBA:
        raise RuntimeError("numba is not available")
    previous, _backend = _backend, name
    return previous


def _use_numba(coeffs: np.ndarray) -> bool:
    return _backend == "numba" and coeffs.dtype == np.int64


def abs_sum(coeffs: np.ndarray) -> int:
    if coeffs.dtype == object:
        return sum(abs(int(c)) for c in coeffs)
    return int(np.abs(coeffs).sum(dtype=np.float64))


def widen(coeffs: np.ndarray) -> np.ndarray:
    """Promote to arbitrary-precision object dtype."""
    if coeffs.dtype == object:
        return coeffs
    return np.array([int(c) for c in coeffs], dtype=object)


def _guard(coeffs: np.ndarray, growth: int) -> np.ndarray:
    # growth bounds the factor by which sum(|c|) can increase in the next step
    if coeffs.dtype == object:
        return coeffs
    if abs_sum(coeffs) * growth >= INT64_SAFE:
        return widen(coeffs)
    return coeffs


# ---------------------------------------------------------------------------
# numba kernels
# ---------------------------------------------------------------------------

if HAVE_NUMBA:

    @njit(cache=True, nogil=True)
    def _nb_shift_expand(exps, coeffs, n, binom):
        T, V = exps.shape
        total = 0
        for r in range(T):
            cnt = 1
            for v in range(2 * n):
                cnt *= exps[r, v] + 1
            total += cnt
        out = np.zeros((total, V), dtype=exps.dtype)
        oc = np.zeros(total, dtype=np.int64)
        split = np.zeros(2 * n, dtype=np.int64)
        pos = 0
        for r in range(T):
            for v in range(2 * n):
                split[v] = 0
            while True:
                c = coeffs[r]
                for v in range(V):
                    out[pos, v] = exps[r, v]
                for v in range(2 * n):
                    k = split[v]
                    out[pos, v] -= k
                    out[pos, v + 2 * n] += k
                    c *= binom[exps[r, v], k]
                oc[pos] = c
                pos += 1
                # odometer over the per-variable splits
                v = 0
                while v < 2 * n:
                    if split[v] < exps[r, v]:
                        split[v] += 1
                        break
                    split[v] = 0
                    v += 1
                if v == 2 * n:
                    break
        return out, oc

    @njit(cache=True, nogil=True)
    def _nb_times_linear_form(exps, coeffs, n):
        T, V = exps.shape
        out = np.zeros((2 * n * T, V), dtype=exps.dtype)
        oc = np.zeros(2 * n * T, dtype=np.int64)
        pos = 0
        for r in range(T):
            for i in range(n):
                for v in range(V):
                    out[pos, v] = exps[r, v]
                out[pos, 2 * n + i] += 1  # z_i
                out[pos, n + i] += 1  # y_i
                oc[pos] = coeffs[r]
                pos += 1
                for v in range(V):
                    out[pos, v] = exps[r, v]
                out[pos, 3 * n + i] += 1  # t_i
                out[pos, i] += 1  # x_i
                oc[pos] = -coeffs[r]
                pos += 1
        return out, oc

    @njit(cache=True, nogil=True)
    def _nb_killed(row, n, off, family_d):
        odd = 0
        for i in range(n):
            odd += (row[off + i] + row[off + n + i]) & 1
        if family_d:
            return odd != 0 and odd != n
        return odd != 0

    @njit(cache=True, nogil=True)
    def _nb_sort_pairs(row, n, off):
        # insertion sort of (row[off+i], row[off+n+i]) pairs, descending
        for i in range(1, n):
            a = row[off + i]
            b = row[off + n + i]
            j = i - 1
            while j >= 0 and (row[off + j] < a or (row[off + j] == a and row[off + n + j] < b)):
                row[off + j + 1] = row[off + j]
                row[off + n + j + 1] = row[off + n + j]
                j -= 1
            row[off + j + 1] = a
            row[off + n + j + 1] = b

    @njit(cache=True, nogil=True)
    def _nb_canonicalize(exps, coeffs, n, family_d, both):
        T, V = exps.shape
        keep = np.zeros(T, dtype=np.bool_)
        out = exps.copy()
        for r in range(T):
            if _nb_killed(out[r], n, 0, family_d):
                continue
            if both and _nb_killed(out[r], n, 2 * n, family_d):
                continue
            keep[r] = True
            _nb_sort_pairs(out[r], n, 0)
            if both:
                _nb_sort_pairs(out[r], n, 2 * n)
        return out[keep], coeffs[keep]

    @njit(cache=True, nogil=True)
    def _nb_row_hash(row):
        h = np.uint64(1469598103934665603)
        for v in range(row.shape[0]):
            h ^= np.uint64(row[v] + 1)
            h *= np.uint64(1099511628211)
        return h

    @njit(cache=True, nogil=True)
    def _nb_merge(exps, coeffs):
        T, V = exps.shape
        hashes = np.empty(T, dtype=np.uint64)
        for r in range(T):
            hashes[r] = _nb_row_hash(exps[r])
        order = np.argsort(hashes)
        out = np.empty((T, V), dtype=exps.dtype)
        oc = np.zeros(T, dtype=np.int64)
        m = 0
        start = 0
        while start < T:
            stop = start
            h = hashes[order[start]]
            while stop < T and hashes[order[stop]] == h:
                stop += 1
            first = m
            for q in range(start, stop):
                r = order[q]
                found = -1
                for s in range(first, m):
                    same = True
                    for v in range(V):
                        if out[s, v] != exps[r, v]:
                            same = False
                            break
                    if same:
                        found = s
                        break
                if found < 0:
                    for v in range(V):
                        out[m, v] = exps[r, v]
                    oc[m] = coeffs[r]
                    m += 1
                else:
                    oc[found] += coeffs[r]
            start = stop
        nz = oc[:m] != 0
        return out[:m][nz], oc[:m][nz]


# ---------------------------------------------------------------------------
# numpy kernels
# ---------------------------------------------------------------------------


def _np_shift_expand(exps, coeffs, n, binom):
    rows, cs = exps, coeffs
    obj = coeffs.dtype == object
    table = binom.astype(object) if obj else binom
    for v in range(2 * n):
        a = rows[:, v].astype(np.int64)
        reps = a + 1
        total = int(reps.sum())
        starts = np.repeat(np.cumsum(reps) - reps, reps)
        k = np.arange(total) - starts
        a_rep = np.repeat(a, reps)
        rows = np.repeat(rows, reps, axis=0)
        rows[:, v] -= k.astype(rows.dtype)
        rows[:, v + 2 * n] += k.astype(rows.dtype)
        cs = np.repeat(cs, reps) * table[a_rep, k]
    return rows, cs


def _np_times_linear_form(exps, coeffs, n):
    T, V = exps.shape
    blocks = []
    signs = []
    for i in range(n):
        zy = exps.copy()
        zy[:, 2 * n + i] += 1
        zy[:, n + i] += 1
        tx = exps.copy()
        tx[:, 3 * n + i] += 1
        tx[:, i] += 1
        blocks += [zy, tx]
        signs += [1, -1]
    out = np.stack(blocks, axis=1).reshape(2 * n * T, V)
    sign = np.tile(np.array(signs, dtype=np.int64), T)
    oc = np.repeat(coeffs, 2 * n) * (sign.astype(object) if coeffs.dtype == object else sign)
    return out, oc


def _np_killed(exps, n, off, family_d):
    odd = ((exps[:, off : off + n] + exps[:, off + n : off + 2 * n]) & 1).sum(axis=1)
    if family_d:
        return (odd != 0) & (odd != n)
    return odd != 0


def _np_sort_pairs(exps, n, off):
    base = int(exps[:, off + n : off + 2 * n].max(initial=0)) + 1
    code = exps[:, off : off + n].astype(np.int64) * base + exps[:, off + n : off + 2 * n]
    code = -np.sort(-code, axis=1)
    exps[:, off : off + n] = code // base
    exps[:, off + n : off + 2 * n] = code % base


def _np_canonicalize(exps, coeffs, n, family_d, both):
    killed = _np_killed(exps, n, 0, family_d)
    if both:
        killed |= _np_killed(exps, n, 2 * n, family_d)
    out = exps[~killed].copy()
    oc = coeffs[~killed]
    if len(out):
        _np_sort_pairs(out, n, 0)
        if both:
            _np_sort_pairs(out, n, 2 * n)
    return out, oc


def _np_merge(exps, coeffs):
    if len(exps) == 0:
        return exps, coeffs
    uniq, inverse = np.unique(exps, axis=0, return_inverse=True)
    inverse = inverse.reshape(-1)
    if coeffs.dtype == object:
        acc = np.zeros(len(uniq), dtype=object)
        for idx, c in zip(inverse.tolist(), coeffs.tolist()):
            acc[idx] += c
    else:
        acc = np.zeros(len(uniq), dtype=np.int64)
        np.add.at(acc, inverse, coeffs)
    nz = acc != 0
    return uniq[nz], acc[nz]


# ---------------------------------------------------------------------------
# public entry points
# ---------------------------------------------------------------------------


def binomial_table(size: int) -> np.ndarray:
    table = np.zeros((size + 1, size + 1), dtype=np.int64)
    for a in range(size + 1):
        for k in range(a + 1):
            table[a, k] = math.comb(a, k)
    return table


def empty_terms(n: int, dtype=np.int64):
    return np.zeros((0, 4 * n), dtype=EXP_DTYPE), np.zeros(0, dtype=dtype)


def lex_sort(exps: np.ndarray, coeffs: np.ndarray):
    if len(exps) <= 1:
        return exps, coeffs
    order = np.lexsort(exps.T[::-1])
    return exps[order], coeffs[order]


def shift_expand(exps: np.ndarray, coeffs: np.ndarray, n: int):
    """Expand ``P(x + z, y + t)`` for rows carrying only x/y exponents."""
    if len(exps) == 0:
        return exps.copy(), coeffs.copy()
    deg = int(exps[:, : 2 * n].sum(axis=1).max())
    coeffs = _guard(coeffs, 2**deg)
    binom = binomial_table(int(exps[:, : 2 * n].max(initial=0)))
    if _use_numba(coeffs):
        return _nb_shift_expand(np.ascontiguousarray(exps), coeffs, n, binom)
    return _np_shift_expand(exps, coeffs, n, binom)


def times_linear_form(exps: np.ndarray, coeffs: np.ndarray, n: int):
    """Multiply by ``sum_i z_i y_i - t_i x_i`` (no merging)."""
    if len(exps) == 0:
        return exps.copy(), coeffs.copy()
    coeffs = _guard(coeffs, 2 * n)
    if _use_numba(coeffs):
        return _nb_times_linear_form(np.ascontiguousarray(exps), coeffs, n)
    return _np_times_linear_form(exps, coeffs, n)


def merge(exps: np.ndarray, coeffs: np.ndarray):
    """Sum coefficients of equal rows, drop zeros, sort rows lexicographically."""
    if len(exps) == 0:
        return exps, coeffs
    if _use_numba(coeffs):
        out, oc = _nb_merge(np.ascontiguousarray(exps), coeffs)
    else:
        out, oc = _np_merge(exps, coeffs)
    return lex_sort(out, oc)


def orbit_reduce(exps: np.ndarray, coeffs: np.ndarray, n: int, family_d: bool, both: bool = False):
    """Reynolds image in orbit coordinates.

    Rows killed by a sign change are dropped; survivors are replaced by the
    representative of their S_n-orbit (index pairs sorted in descending order)
    and merged.  With ``both`` the z/t block is reduced independently as well,
    which is the Reynolds operator of W x W acting on (x, y) and (z, t).
    """
    if len(exps) == 0:
        return exps.copy(), coeffs.copy()
    if _use_numba(coeffs):
        out, oc = _nb_canonicalize(np.ascontiguousarray(exps), coeffs, n, family_d, both)
    else:
        out, oc = _np_canonicalize(exps, coeffs, n, family_d, both)
    return merge(out, oc)


def _pair_perm_columns(n: int, off: int, V: int):
    cols = []
    for perm in permutations(range(n)):
        idx = np.arange(V)
        for i, p in enumerate(perm):
            idx[off + i] = off + p
            idx[off + n + i] = off + n + p
        cols.append(idx)
    return cols


def symmetrize(exps: np.ndarray, coeffs: np.ndarray, n: int, both: bool = False):
    """Sum of all index permutations of every row (unnormalized).

    The caller divides by ``n!`` (or ``n!**2`` with ``both``).
    """
    if len(exps) == 0:
        return exps.copy(), coeffs.copy()
    V = exps.shape[1]
    cols = _pair_perm_columns(n, 0, V)
    if both:
        zt = _pair_perm_columns(n, 2 * n, V)
        cols = [c[z] for c in cols for z in zt]
    stacked = np.concatenate([exps[:, c] for c in cols], axis=0)
    cs = np.tile(coeffs, len(cols))
    return merge(stacked, cs)
