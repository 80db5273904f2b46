"""The functional equation E_n(P) = 0 and its exact solution by degree.

For an invariant P the operator

    E_n(P) = R((z.y - t.x) P(x + z, y + t))

is again invariant in (z, t), and equals the Reynolds operator of W x W
(first factor on x/y, second on z/t) applied to (z.y - t.x) M(x + z, y + t),
where M is any polynomial with R(M) = P.  Because the Reynolds image of a
surviving monomial is determined by its orbit representative (index pairs
sorted in each block), E_n(P) is stored as an integer vector on such
representatives ("reduced form").  Distinct representatives have disjoint
supports in E_n(P), so E_n(P) = 0 iff the reduced vector is zero.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import _kernels as K
from .linalg import combine, nullspace, rref
from .poly import Polynomial, RankError
from .sl2 import Hw0Basis, invariant_hw0_basis
from .weyl import WeylGroup, hh0_dimension

CHUNK_ROWS = 1_500_000


class InconsistencyError(RuntimeError):
    """An internal cross-check failed; results must not be trusted."""


def _expand_reduce(exps, coeffs, n, family_d):
    """Reduced E_n of the x/y rows (no denominators involved)."""
    if len(exps) == 0:
        return K.empty_terms(n)
    # rough size of the shifted expansion per input row
    spread = np.prod(exps[:, : 2 * n].astype(np.float64) + 1, axis=1) * 2 * n
    acc_e, acc_c = K.empty_terms(n)
    start = 0
    while start < len(exps):
        stop = start + 1
        total = spread[start]
        while stop < len(exps) and total + spread[stop] <= CHUNK_ROWS:
            total += spread[stop]
            stop += 1
        e, c = K.shift_expand(exps[start:stop], coeffs[start:stop], n)
        e, c = K.times_linear_form(e, c, n)
        e, c = K.orbit_reduce(e, c, n, family_d, both=True)
        if start == 0 and stop == len(exps):
            return e, c
        if acc_c.dtype != c.dtype:
            acc_c, c = K.widen(acc_c), K.widen(c)
        acc_e, acc_c = K.merge(np.concatenate([acc_e, e]), np.concatenate([acc_c, c]))
        start = stop
    return acc_e, acc_c


def _check_input(w, p):
    if p.n != w.rank:
        raise RankError(f"rank mismatch: {w.rank} vs {p.n}")
    if not p.is_xy_only():
        raise ValueError("the operator expects a polynomial in x, y only")


def beg_reduced(w: WeylGroup, p: Polynomial):
    """Reduced form ``(exps, coeffs, denom)`` of E_n(p) for invariant p."""
    _check_input(w, p)
    exps, coeffs, denom = p.to_arrays()
    exps, coeffs = K.orbit_reduce(exps, coeffs, w.rank, w.is_d)
    e, c = _expand_reduce(exps, coeffs, w.rank, w.is_d)
    return e, c, denom


def beg_reduced_orbit(w: WeylGroup, exps, coeffs):
    """Reduced E_n of R(sum) given orbit-coordinate arrays."""
    return _expand_reduce(exps, coeffs, w.rank, w.is_d)


def expand_reduced(n, exps, coeffs, denom=1):
    """Polynomial from a reduced W x W vector."""
    e, c = K.symmetrize(exps, coeffs, n, both=True)
    return Polynomial.from_arrays(n, e, c, denom * math.factorial(n) ** 2)


def beg_apply(w: WeylGroup, p: Polynomial, method: str = "reduced") -> Polynomial:
    """E_n(p) = R((z.y - t.x) p(x + z, y + t)).

    ``method="direct"`` follows the definition literally and is valid for any
    p; ``"reduced"`` (the default) goes through the W x W form and assumes p is
    invariant.
    """
    _check_input(w, p)
    n = w.rank
    if method == "direct":
        exps, coeffs, denom = p.to_arrays()
        e, c = K.shift_expand(exps, coeffs, n)
        e, c = K.times_linear_form(e, c, n)
        e, c = K.orbit_reduce(e, c, n, w.is_d)
        e, c = K.symmetrize(e, c, n)
        return Polynomial.from_arrays(n, e, c, denom * math.factorial(n))
    if method != "reduced":
        raise ValueError(f"unknown method {method!r}")
    e, c, denom = beg_reduced(w, p)
    return expand_reduced(n, e, c, denom)


def beg_is_zero(w: WeylGroup, p: Polynomial) -> bool:
    e, c, _ = beg_reduced(w, p)
    return len(c) == 0


def _count_nonzero(block):
    return (block != 0).sum(axis=1)


def prime_mask(exps, n):
    """Reduced rows that survive x = y_2..y_n = t_2..t_n = 0."""
    x = exps[:, :n]
    y = exps[:, n : 2 * n]
    t = exps[:, 3 * n :]
    return (_count_nonzero(x) == 0) & (_count_nonzero(y) <= 1) & (_count_nonzero(t) <= 1)


def int_mask(exps, n):
    """Reduced rows that survive x = t_2..t_n = 0."""
    return (_count_nonzero(exps[:, :n]) == 0) & (_count_nonzero(exps[:, 3 * n :]) <= 1)


def _substituted(w, p, mask_fn, zero_positions):
    _check_input(w, p)
    n = w.rank
    e, c, denom = beg_reduced(w, p)
    keep = mask_fn(e, n)
    full = expand_reduced(n, e[keep], c[keep], denom)
    return full.substitute_zero(zero_positions(n))


def beg_int(w: WeylGroup, p: Polynomial) -> Polynomial:
    """E_n(p) with x = 0 and t_2 = ... = t_n = 0."""
    return _substituted(
        w, p, int_mask, lambda n: list(range(n)) + list(range(3 * n + 1, 4 * n))
    )


def beg_prime(w: WeylGroup, p: Polynomial) -> Polynomial:
    """E_n(p) with x = 0, y_2 = ... = y_n = 0 and t_2 = ... = t_n = 0."""
    return _substituted(
        w,
        p,
        prime_mask,
        lambda n: list(range(n)) + list(range(n + 1, 2 * n)) + list(range(3 * n + 1, 4 * n)),
    )


def sl2_coefficients(w: WeylGroup, p: Polynomial):
    """Coefficients of z1*t1, t1^2 and z1^2 in E_n(p) (as x/y polynomials)."""
    n = w.rank
    E = beg_apply(w, p)
    z1t1 = [0] * (2 * n)
    z1t1[0] = z1t1[n] = 1
    t1sq = [0] * (2 * n)
    t1sq[n] = 2
    z1sq = [0] * (2 * n)
    z1sq[0] = 2
    return tuple(E.coefficient_of(tuple(m)) for m in (z1t1, t1sq, z1sq))


# -- solving ---------------------------------------------------------------


@dataclass
class DegreeSolution:
    group: WeylGroup
    degree: int
    basis: Hw0Basis
    prime_dimension: int
    solutions: list  # RREF rows of Fractions over basis.words
    seconds: float = 0.0

    @property
    def candidates(self):
        return len(self.basis)

    @property
    def dimension(self):
        return len(self.solutions)

    def solution_polynomials(self):
        vecs = self.basis.vectors
        out = []
        for row in self.solutions:
            acc = Polynomial.zero(self.group.rank)
            for c, v in zip(row, vecs):
                if c:
                    acc = acc + v * c
            out.append(acc)
        return out

    def solution_strings(self):
        return [format_combination(row, self.basis.words) for row in self.solutions]


def format_combination(row, words):
    parts = []
    for c, word in zip(row, words):
        if not c:
            continue
        c = Fraction(c)
        a = abs(c)
        body = str(word) if a == 1 else f"{a} * {word}"
        if not parts:
            parts.append(body if c > 0 else f"-{body}")
        else:
            parts.append(("+ " if c > 0 else "- ") + body)
    return " ".join(parts) if parts else "0"


def _column(exps, coeffs, index):
    rows = [index.setdefault(r, len(index)) for r in map(tuple, exps.tolist())]
    return dict(zip(rows, (int(c) for c in coeffs.tolist())))


def assemble(w: WeylGroup, basis: Hw0Basis, threads: int = 1):
    """Reduced E_n arrays for every basis vector (data-parallel over columns)."""
    work = [lambda r=r: beg_reduced_orbit(w, *r) for r in basis.reduced]
    if threads > 1 and len(work) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(lambda f: f(), work))
    return [f() for f in work]


def solve_degree(w: WeylGroup, d: int, threads: int = 1, prefilter: bool = True) -> DegreeSolution:
    """Solutions of E_n(P) = 0 among invariant highest-weight-0 P of degree d."""
    start = time.perf_counter()
    n = w.rank
    basis = invariant_hw0_basis(w, d)
    arrays = assemble(w, basis, threads)
    index = {}
    full = [_column(e, c, index) for e, c in arrays]
    m = len(full)
    if prefilter:
        prime = []
        for e, c in arrays:
            keep = prime_mask(e, n) if len(e) else np.zeros(0, dtype=bool)
            prime.append(_column(e[keep], c[keep], index))
        candidates = nullspace(prime, m)
        prime_dim = len(candidates)
        residues = [combine(v, full) for v in candidates]
        if all(not r for r in residues):
            solutions = candidates
        else:
            rel = nullspace(residues, len(candidates))
            solutions = [
                [sum(r[k] * candidates[k][j] for k in range(len(candidates))) for j in range(m)]
                for r in rel
            ]
            solutions = rref(solutions, m)
    else:
        solutions = nullspace(full, m)
        prime_dim = None
    # mandatory verification against every row of the full system
    for v in solutions:
        if combine(v, full):
            raise InconsistencyError(f"{w} degree {d}: reported solution fails E_n = 0")
    return DegreeSolution(w, d, basis, prime_dim, solutions, time.perf_counter() - start)


def default_max_degree(n: int) -> int:
    return 4 * (n - 1) + 4


@dataclass
class SolutionReport:
    group: WeylGroup
    max_degree: int
    degrees: list = field(default_factory=list)
    timing: dict = field(default_factory=dict)

    @property
    def hp0(self):
        return sum(s.dimension for s in self.degrees)

    @property
    def hh0(self):
        return hh0_dimension(self.group)

    def solution_degrees(self):
        return [s.degree for s in self.degrees if s.dimension]

    def to_dict(self, timing=True):
        out = {
            "group": str(self.group),
            "degrees": [
                {
                    "degree": s.degree,
                    "candidates": s.candidates,
                    "prefilter_dimension": s.prime_dimension,
                    "solutions": s.dimension,
                    "basis": s.solution_strings(),
                }
                for s in self.degrees
            ],
            "hp0": self.hp0,
            "hh0": self.hh0,
            "max_degree": self.max_degree,
            "degrees_searched": [s.degree for s in self.degrees],
        }
        if timing:
            out["timing"] = dict(self.timing)
        return out


def hp0_report(w: WeylGroup, max_degree: int | None = None, threads: int = 1) -> SolutionReport:
    if max_degree is None:
        max_degree = default_max_degree(w.rank)
    if max_degree < 0 or max_degree % 2:
        raise ValueError("max_degree must be even and nonnegative")
    report = SolutionReport(w, max_degree)
    t0 = time.perf_counter()
    for d in range(0, max_degree + 1, 2):
        sol = solve_degree(w, d, threads)
        report.degrees.append(sol)
        report.timing[str(d)] = round(sol.seconds, 6)
    report.timing["total"] = round(time.perf_counter() - t0, 6)
    zero = report.degrees[0]
    if zero.dimension != 1:
        raise InconsistencyError("constants must solve the equation exactly once")
    return report
