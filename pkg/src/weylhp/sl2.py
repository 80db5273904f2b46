"""The diagonal sl2 triple, highest-weight-0 vectors and pfaffian words."""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import permutations

import numpy as np

from . import _kernels as K
from .linalg import IncrementalEchelon
from .poly import Polynomial, RankError, ParseError, poisson_bracket
from .weyl import WeylGroup


@dataclass(frozen=True)
class Sl2Triple:
    n: int
    E: Polynomial
    F: Polynomial
    H: Polynomial


def sl2_generators(n: int) -> Sl2Triple:
    """E = x.x / 2, F = -y.y / 2, H = -x.y."""
    if n < 2:
        raise RankError("rank must be at least 2")
    half = Fraction(1, 2)
    E, F, H = {}, {}, {}
    for i in range(n):
        e = [0] * (4 * n)
        e[i] = 2
        E[tuple(e)] = half
        e = [0] * (4 * n)
        e[n + i] = 2
        F[tuple(e)] = -half
        e = [0] * (4 * n)
        e[i] = e[n + i] = 1
        H[tuple(e)] = -1
    return Sl2Triple(n, Polynomial(n, E), Polynomial(n, F), Polynomial(n, H))


def weight_of(p: Polynomial):
    """deg_x - deg_y shared by all terms, or ``"mixed"``."""
    n = p.n
    weights = {sum(e[:n]) - sum(e[n : 2 * n]) for e in p.terms}
    if len(weights) > 1:
        return "mixed"
    return weights.pop() if weights else 0


def is_hw0(p: Polynomial, t: Sl2Triple | None = None) -> bool:
    t = t or sl2_generators(p.n)
    return not any(poisson_bracket(g, p) for g in (t.E, t.F, t.H))


def hw0_dim_formula(n: int, d: int) -> int:
    if d < 0 or d % 2:
        return 0
    l = d // 2
    c = math.comb
    return c(l + n - 1, n - 1) ** 2 - c(l + n, n - 1) * c(l + n - 2, n - 1)


# -- pfaffian words --------------------------------------------------------


@lru_cache(maxsize=None)
def pairs(n: int):
    return tuple((i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1))


@dataclass(frozen=True, order=True)
class PfaffianWord:
    """prod X_{i,j}^{b_ij}; ``exps`` follows ``pairs(n)`` order."""

    n: int
    exps: tuple = field(default=())

    def __post_init__(self):
        if not self.exps:
            object.__setattr__(self, "exps", (0,) * len(pairs(self.n)))
        if len(self.exps) != len(pairs(self.n)) or any(b < 0 for b in self.exps):
            raise ValueError("bad pfaffian exponent vector")

    @classmethod
    def from_dict(cls, n, mapping):
        idx = {p: k for k, p in enumerate(pairs(n))}
        e = [0] * len(idx)
        for (i, j), b in mapping.items():
            if i > j:
                i, j = j, i
            if (i, j) not in idx:
                raise RankError(f"X[{i},{j}] invalid for rank {n}")
            e[idx[(i, j)]] += b
        return cls(n, tuple(e))

    @classmethod
    def parse(cls, text: str, n: int | None = None):
        text = text.strip()
        found = re.findall(r"X\[\s*(\d+)\s*,\s*(\d+)\s*\](?:\s*\^\s*(\d+))?", text)
        rest = re.sub(r"X\[\s*\d+\s*,\s*\d+\s*\](?:\s*\^\s*\d+)?", "", text)
        if text == "1":
            found, rest = [], ""
        if rest.replace("*", "").strip():
            raise ParseError(f"not a pfaffian word: {text!r}")
        if n is None:
            n = max([int(v) for f in found for v in f[:2]] + [2])
        mapping = {}
        for i, j, b in found:
            key = (int(i), int(j))
            if key[0] == key[1]:
                raise ParseError("X[i,i] is zero")
            if key[0] > key[1]:
                raise ParseError("pfaffian pairs must be written with i < j")
            mapping[key] = mapping.get(key, 0) + (int(b) if b else 1)
        return cls.from_dict(n, mapping)

    def as_dict(self):
        return {p: b for p, b in zip(pairs(self.n), self.exps) if b}

    @property
    def degree(self):
        return 2 * sum(self.exps)

    def vertex_degrees(self):
        deg = [0] * self.n
        for (i, j), b in zip(pairs(self.n), self.exps):
            deg[i - 1] += b
            deg[j - 1] += b
        return tuple(deg)

    def vertices(self):
        return sorted({v for (i, j), b in zip(pairs(self.n), self.exps) if b for v in (i, j)})

    def relabel(self, sigma):
        """Word obtained by sending index i to sigma[i-1]+1 (sign dropped)."""
        mapping = {}
        for (i, j), b in zip(pairs(self.n), self.exps):
            if b:
                a, c = sigma[i - 1] + 1, sigma[j - 1] + 1
                mapping[(min(a, c), max(a, c))] = b
        return PfaffianWord.from_dict(self.n, mapping)

    def relabel_sign(self, sigma):
        s = 1
        for (i, j), b in zip(pairs(self.n), self.exps):
            if b % 2 and sigma[i - 1] > sigma[j - 1]:
                s = -s
        return s

    def canonical(self):
        """Orbit representative under index permutations (lexicographic max)."""
        return max((self.relabel(s) for s in permutations(range(self.n))), key=lambda w: w.exps)

    def with_rank(self, n):
        if n < self.n and any(v > n for v in self.vertices()):
            raise RankError("word does not fit the rank")
        return PfaffianWord.from_dict(n, self.as_dict())

    def __str__(self):
        parts = []
        for (i, j), b in zip(pairs(self.n), self.exps):
            if b == 1:
                parts.append(f"X[{i},{j}]")
            elif b:
                parts.append(f"X[{i},{j}]^{b}")
        return " * ".join(parts) if parts else "1"

    def expand(self) -> Polynomial:
        return pfaffian_expand(self)


def _poly_mul(a, b):
    out = {}
    for e1, c1 in a.items():
        for e2, c2 in b.items():
            e = tuple(u + v for u, v in zip(e1, e2))
            c = out.get(e, 0) + c1 * c2
            if c:
                out[e] = c
            else:
                del out[e]
    return out


@lru_cache(maxsize=4096)
def _x_power(n, i, j, b):
    # (x_i y_j - y_i x_j)^b on 2n-length x/y exponent tuples
    out = {}
    for k in range(b + 1):
        e = [0] * (2 * n)
        e[i - 1] += b - k
        e[n + j - 1] += b - k
        e[n + i - 1] += k
        e[j - 1] += k
        out[tuple(e)] = math.comb(b, k) * (-1) ** k
    return out


def expand_xy(word: PfaffianWord):
    """Integer x/y expansion of a word as a dict on 2n-tuples."""
    acc = {(0,) * (2 * word.n): 1}
    for (i, j), b in zip(pairs(word.n), word.exps):
        if b:
            acc = _poly_mul(acc, _x_power(word.n, i, j, b))
    return acc


def word_arrays(word: PfaffianWord):
    """Expansion as kernel arrays (z/t columns zero)."""
    xy = expand_xy(word)
    n = word.n
    if not xy:
        return K.empty_terms(n)
    exps = np.zeros((len(xy), 4 * n), dtype=K.EXP_DTYPE)
    exps[:, : 2 * n] = np.array(list(xy.keys()), dtype=K.EXP_DTYPE)
    vals = list(xy.values())
    dtype = np.int64 if max(abs(v) for v in vals) < K.INT64_SAFE else object
    return exps, np.array(vals, dtype=dtype)


def pfaffian_expand(word: PfaffianWord) -> Polynomial:
    n = word.n
    pad = (0,) * (2 * n)
    return Polynomial(n, {e + pad: c for e, c in expand_xy(word).items()})


def words_of_degree(n: int, d: int):
    """All pfaffian words of x/y-degree d, descending lexicographic order."""
    if d % 2 or d < 0:
        return
    l = d // 2
    m = len(pairs(n))

    def rec(k, left):
        if k == m - 1:
            yield (left,)
            return
        for b in range(left, -1, -1):
            for rest in rec(k + 1, left - b):
                yield (b,) + rest

    for e in rec(0, l):
        yield PfaffianWord(n, e)


def orbit_representatives(n: int, d: int):
    reps = {w.canonical() for w in words_of_degree(n, d)}
    return sorted(reps, key=lambda w: w.exps, reverse=True)


def word_survives(word: PfaffianWord, w: WeylGroup) -> bool:
    """False when every monomial of the word is killed by a sign change."""
    odd = sum(v & 1 for v in word.vertex_degrees())
    if w.family == "B":
        return odd == 0
    return odd == 0 or odd == w.rank


# -- bases -----------------------------------------------------------------


class Hw0Basis:
    """A list of pfaffian words whose (Reynolds images of) expansions are a basis.

    ``group`` is None for the plain highest-weight-0 space; otherwise vectors
    are Reynolds images and ``reduced`` holds their orbit-coordinate arrays.
    """

    def __init__(self, n, degree, words, group=None, reduced=None):
        self.n = n
        self.degree = degree
        self.words = list(words)
        self.group = group
        self.reduced = reduced
        self._vectors = None

    def __len__(self):
        return len(self.words)

    @property
    def coordinates(self):
        return self.words

    @property
    def vectors(self):
        if self._vectors is None:
            if self.group is None:
                self._vectors = [pfaffian_expand(w) for w in self.words]
            else:
                self._vectors = [orbit_vector_polynomial(self.n, *r) for r in self.reduced]
        return self._vectors


def hw0_basis(n: int, d: int) -> Hw0Basis:
    """Greedy basis of the highest-weight-0 space of degree d from pfaffian words."""
    ech = IncrementalEchelon()
    chosen = []
    if d % 2 == 0 and d >= 0:
        for word in words_of_degree(n, d):
            if ech.add(expand_xy(word)):
                chosen.append(word)
    return Hw0Basis(n, d, chosen)


def orbit_vector(word: PfaffianWord, w: WeylGroup):
    """R(word) in orbit coordinates: arrays of sorted-pair representatives."""
    exps, coeffs = word_arrays(word)
    return K.orbit_reduce(exps, coeffs, word.n, w.is_d)


def orbit_vector_polynomial(n, exps, coeffs, denom=1):
    out, oc = K.symmetrize(exps, coeffs, n)
    return Polynomial.from_arrays(n, out, oc, denom * math.factorial(n))


def invariant_hw0_basis(w: WeylGroup, d: int) -> Hw0Basis:
    """Basis of the invariant highest-weight-0 space of degree d.

    One word per index-permutation orbit is tried (R is constant on orbits up
    to sign), words killed by the vertex parity test are skipped, and the rest
    are kept greedily by exact rank of their orbit-coordinate vectors.
    """
    n = w.rank
    ech = IncrementalEchelon()
    words, reduced = [], []
    if d % 2 == 0 and d >= 0:
        for word in orbit_representatives(n, d):
            if not word_survives(word, w):
                continue
            exps, coeffs = orbit_vector(word, w)
            if len(exps) == 0:
                continue
            vec = {tuple(e): int(c) for e, c in zip(exps.tolist(), coeffs.tolist())}
            if ech.add(vec):
                words.append(word)
                reduced.append((exps, coeffs))
    return Hw0Basis(n, d, words, group=w, reduced=reduced)
