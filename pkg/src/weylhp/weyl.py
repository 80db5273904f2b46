"""Weyl groups of type B_n and D_n as signed permutations."""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import permutations, product

from . import _kernels as K
from .poly import Polynomial, RankError


@dataclass(frozen=True)
class SignedPermutation:
    """Matrix with entry ``signs[i]`` at ``(i, perm[i])`` (0-based).

    It acts on polynomials by ``(g.P)(x, y) = P(gx, gy)``, i.e. ``x_i`` is
    replaced by ``signs[i] * x_{perm[i]}``; z and t are fixed.
    """

    perm: tuple
    signs: tuple

    def __post_init__(self):
        if sorted(self.perm) != list(range(len(self.perm))):
            raise ValueError("perm is not a permutation")
        if len(self.signs) != len(self.perm) or any(s not in (1, -1) for s in self.signs):
            raise ValueError("signs must be +-1 of matching length")

    @property
    def n(self):
        return len(self.perm)

    @classmethod
    def identity(cls, n):
        return cls(tuple(range(n)), (1,) * n)

    @classmethod
    def sign_change(cls, n, *indices):
        """Flip the listed 1-based indices."""
        return cls(tuple(range(n)), tuple(-1 if i + 1 in indices else 1 for i in range(n)))

    @classmethod
    def transposition(cls, n, i, j):
        p = list(range(n))
        p[i - 1], p[j - 1] = p[j - 1], p[i - 1]
        return cls(tuple(p), (1,) * n)

    def __mul__(self, other):
        """Matrix product ``self @ other``; then ``h.(g.P) = (g*h).P``."""
        if other.n != self.n:
            raise RankError("rank mismatch")
        perm = tuple(other.perm[p] for p in self.perm)
        signs = tuple(s * other.signs[p] for s, p in zip(self.signs, self.perm))
        return SignedPermutation(perm, signs)

    def inverse(self):
        perm = [0] * self.n
        signs = [0] * self.n
        for i, (p, s) in enumerate(zip(self.perm, self.signs)):
            perm[p] = i
            signs[p] = s
        return SignedPermutation(tuple(perm), tuple(signs))

    def matrix(self):
        m = [[0] * self.n for _ in range(self.n)]
        for i, (p, s) in enumerate(zip(self.perm, self.signs)):
            m[i][p] = s
        return m

    def is_even(self):
        return math.prod(self.signs) == 1

    def act_exponents(self, e):
        """Image of the monomial with exponents ``e``: returns ``(sign, exps)``."""
        n = self.n
        out = list(e)
        sign = 1
        for i, (p, s) in enumerate(zip(self.perm, self.signs)):
            a, b = e[i], e[n + i]
            out[p] = a
            out[n + p] = b
            if s < 0 and (a + b) & 1:
                sign = -sign
        return sign, tuple(out)


class WeylGroup:
    def __init__(self, family: str, rank: int):
        family = family.upper()
        if family not in ("B", "D"):
            raise ValueError(f"unsupported family {family!r}")
        if rank < 2:
            raise ValueError(f"rank must be at least 2, got {rank}")
        self.family = family
        self.rank = rank

    @classmethod
    def parse(cls, text: str):
        m = re.fullmatch(r"\s*([BbDd])\s*(\d+)\s*", text or "")
        if not m:
            raise ValueError(f"bad group designator {text!r}")
        return cls(m.group(1), int(m.group(2)))

    @property
    def n(self):
        return self.rank

    @property
    def is_d(self):
        return self.family == "D"

    def __repr__(self):
        return f"WeylGroup({self.family}{self.rank})"

    def __str__(self):
        return f"{self.family}{self.rank}"

    def __eq__(self, other):
        return isinstance(other, WeylGroup) and (self.family, self.rank) == (other.family, other.rank)

    def __hash__(self):
        return hash((self.family, self.rank))

    def order(self):
        k = self.rank if self.family == "B" else self.rank - 1
        return 2**k * math.factorial(self.rank)

    def __contains__(self, g: SignedPermutation):
        return g.n == self.rank and (self.family == "B" or g.is_even())

    def sign_changes(self):
        for signs in product((1, -1), repeat=self.rank):
            if self.family == "D" and math.prod(signs) != 1:
                continue
            yield SignedPermutation(tuple(range(self.rank)), signs)

    def elements(self):
        """Lazily enumerate every element exactly once."""
        for perm in permutations(range(self.rank)):
            for signs in product((1, -1), repeat=self.rank):
                if self.family == "D" and math.prod(signs) != 1:
                    continue
                yield SignedPermutation(perm, signs)

    def __iter__(self):
        return self.elements()


def act(g: SignedPermutation, p: Polynomial) -> Polynomial:
    if g.n != p.n:
        raise RankError(f"rank mismatch: {g.n} vs {p.n}")
    out = {}
    for e, c in p.terms.items():
        s, f = g.act_exponents(e)
        out[f] = out.get(f, 0) + s * c
    return Polynomial(p.n, out)


def parity_vector(e, n):
    return tuple((e[i] + e[n + i]) & 1 for i in range(n))


def sign_kill_test(m, w: WeylGroup) -> bool:
    """True iff a sign change of ``w`` sends the monomial ``m`` to ``-m``.

    ``m`` is a single-term Polynomial or an exponent tuple.  Only the x/y part
    matters.  For D_n the available sign changes flip an even number of
    indices, so the monomial is killed iff the parity vector of the pair
    degrees ``deg x_i + deg y_i`` is neither zero nor all ones.
    """
    if isinstance(m, Polynomial):
        if len(m) != 1:
            raise ValueError("expected a monomial")
        (m,) = m.terms
    odd = sum(parity_vector(m, w.rank))
    if w.family == "B":
        return odd != 0
    return odd != 0 and odd != w.rank


def sign_kill_bruteforce(m, w: WeylGroup) -> bool:
    if isinstance(m, Polynomial):
        (m,) = m.terms
    return any(g.act_exponents(m)[0] == -1 for g in w.sign_changes())


def reynolds(w: WeylGroup, p: Polynomial) -> Polynomial:
    """R(P) = |W|^-1 sum_g g.P, linear over C[z, t].

    Monomials killed by a sign change drop out; the survivors are averaged
    over index permutations only.
    """
    if p.n != w.rank:
        raise RankError(f"rank mismatch: {w.rank} vs {p.n}")
    if not p:
        return p
    exps, coeffs, denom = p.to_arrays()
    out, oc = K.orbit_reduce(exps, coeffs, p.n, w.is_d)
    out, oc = K.symmetrize(out, oc, p.n)
    return Polynomial.from_arrays(p.n, out, oc, denom * math.factorial(p.n))


def reynolds_bruteforce(w: WeylGroup, p: Polynomial) -> Polynomial:
    acc = {}
    for g in w.elements():
        for e, c in p.terms.items():
            s, f = g.act_exponents(e)
            acc[f] = acc.get(f, 0) + s * c
    order = Fraction(w.order())
    return Polynomial(p.n, {e: c / order for e, c in acc.items()})


def is_invariant(w: WeylGroup, p: Polynomial) -> bool:
    return reynolds(w, p) == p


# -- partitions -----------------------------------------------------------


def partitions(n: int, largest: int | None = None):
    """Integer partitions of ``n`` as non-increasing tuples."""
    if largest is None:
        largest = n
    if n == 0:
        yield ()
        return
    for k in range(min(n, largest), 0, -1):
        for rest in partitions(n - k, k):
            yield (k,) + rest


@lru_cache(maxsize=None)
def _count(n, k, parity):
    # partitions of n into parts <= k, with number of parts == parity mod 2
    if n == 0:
        return 1 if parity == 0 else 0
    if k == 0:
        return 0
    total = _count(n, k - 1, parity)
    if k <= n:
        total += _count(n - k, k, parity ^ 1)
    return total


def partition_count(n: int) -> int:
    return _count(n, n, 0) + _count(n, n, 1)


def even_part_count(n: int) -> int:
    """Partitions of n with an even number of parts."""
    return _count(n, n, 0)


def hh0_dimension(w: WeylGroup) -> int:
    return partition_count(w.rank) if w.family == "B" else even_part_count(w.rank)
