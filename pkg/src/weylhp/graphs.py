"""Graph calculus for pfaffian words: encoding, partitions, composition, catalogs."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations

from .beg import beg_reduced_orbit, format_combination
from .linalg import IncrementalEchelon, combine, nullspace
from .poly import Polynomial, RankError
from .sl2 import PfaffianWord, orbit_vector, words_of_degree, word_survives
from .weyl import WeylGroup, partitions, reynolds


@dataclass(frozen=True)
class GraphSpec:
    """Multigraph on vertices 1..k; ``edges`` holds sorted (i, j, exponent) triples."""

    edges: tuple = ()

    def __post_init__(self):
        merged = {}
        for i, j, b in self.edges:
            if i == j:
                raise ValueError("loops are not allowed")
            if b <= 0:
                raise ValueError("edge exponents must be positive")
            key = (min(i, j), max(i, j))
            merged[key] = merged.get(key, 0) + b
        object.__setattr__(self, "edges", tuple(sorted((i, j, b) for (i, j), b in merged.items())))

    @property
    def vertices(self):
        return sorted({v for i, j, _ in self.edges for v in (i, j)})

    @property
    def vertex_count(self):
        return len(self.vertices)

    @property
    def degree(self):
        return 2 * sum(b for _, _, b in self.edges)

    def is_even(self):
        return all(b % 2 == 0 for _, _, b in self.edges)

    def rendered(self):
        """Edge labels in the usual drawing: b/2 for even b, b marked odd otherwise."""
        return [(i, j, b // 2 if b % 2 == 0 else f"{b}*") for i, j, b in self.edges]

    def word(self, n: int | None = None) -> PfaffianWord:
        n = n or max(self.vertices, default=2)
        if self.vertices and max(self.vertices) > n:
            raise RankError(f"graph needs {max(self.vertices)} indices, rank is {n}")
        return PfaffianWord.from_dict(max(n, 2), {(i, j): b for i, j, b in self.edges})

    def relabeled(self, mapping):
        return GraphSpec(tuple((mapping[i], mapping[j], b) for i, j, b in self.edges))

    def compact(self):
        """Relabel vertices to 1..k preserving order."""
        mapping = {v: k + 1 for k, v in enumerate(self.vertices)}
        return self.relabeled(mapping)

    def canonical(self):
        """Isomorphism-invariant form: exhaustive relabeling, degree sequence first."""
        verts = self.vertices
        if not verts:
            return self
        k = len(verts)
        best = None
        for perm in permutations(range(1, k + 1)):
            g = self.relabeled(dict(zip(verts, perm)))
            deg = [0] * k
            for i, j, b in g.edges:
                deg[i - 1] += b
                deg[j - 1] += b
            key = (tuple(deg), tuple(sorted(g.edges)))
            if best is None or key > best[0]:
                best = (key, g)
        return best[1]

    def isomorphic(self, other):
        return self.canonical() == other.canonical()

    def to_dict(self):
        return {"edges": [{"i": i, "j": j, "exp": b} for i, j, b in self.edges]}

    @classmethod
    def from_dict(cls, data):
        return cls(tuple((e["i"], e["j"], e["exp"]) for e in data["edges"]))

    def __str__(self):
        return str(self.word()) if self.edges else "1"


def graph_of(word: PfaffianWord) -> GraphSpec:
    return GraphSpec(tuple((i, j, b) for (i, j), b in word.as_dict().items()))


def polynomial_of(g: GraphSpec, w: WeylGroup) -> Polynomial:
    """R_n of the word of any labeling of ``g``."""
    if g.vertex_count > w.rank:
        raise RankError(f"graph has {g.vertex_count} vertices, rank is {w.rank}")
    word = g.compact().word(w.rank)
    return reynolds(w, word.expand())


@dataclass(frozen=True)
class GraphCombination:
    """sum_k c_k R_n(word(graph_k))."""

    terms: tuple  # ((GraphSpec, Fraction), ...)

    @classmethod
    def single(cls, g, c=1):
        return cls(((g, Fraction(c)),))

    @property
    def graphs(self):
        return [g for g, _ in self.terms]

    @property
    def vertex_count(self):
        return max((g.vertex_count for g, _ in self.terms), default=0)

    @property
    def degree(self):
        return max((g.degree for g, _ in self.terms), default=0)

    def polynomial(self, w: WeylGroup) -> Polynomial:
        acc = Polynomial.zero(w.rank)
        for g, c in self.terms:
            acc = acc + polynomial_of(g, w) * c
        return acc

    def orbit_arrays(self, w: WeylGroup):
        """Orbit-coordinate arrays of R_n(combination), with integer coefficients."""
        import numpy as np

        from . import _kernels as K

        den = 1
        for _, c in self.terms:
            den = math.lcm(den, Fraction(c).denominator)
        acc_e, acc_c = K.empty_terms(w.rank)
        for g, c in self.terms:
            e, v = orbit_vector(g.compact().word(w.rank), w)
            scale = int(Fraction(c) * den)
            v = K.widen(v) * scale if abs(scale) > 2**20 else v * scale
            if acc_c.dtype != v.dtype:
                acc_c, v = K.widen(acc_c), K.widen(v)
            acc_e, acc_c = K.merge(np.concatenate([acc_e, e]), np.concatenate([acc_c, v]))
        return acc_e, acc_c

    def solves(self, w: WeylGroup) -> bool:
        e, c = self.orbit_arrays(w)
        return len(c) > 0 and len(beg_reduced_orbit(w, e, c)[1]) == 0

    def to_dict(self):
        return {
            "graphs": [
                dict(g.to_dict(), coeff=_fmt_fraction(c)) for g, c in self.terms
            ]
        }

    def __str__(self):
        return format_combination([c for _, c in self.terms], [g.compact().word() for g, _ in self.terms])


def _fmt_fraction(c):
    c = Fraction(c)
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


# -- partitions and linear graphs ------------------------------------------


def path_graph(k: int, offset: int = 0, label: int = 2) -> GraphSpec:
    return GraphSpec(tuple((offset + v, offset + v + 1, label) for v in range(1, k)))


def disjoint_union(a: GraphSpec, b: GraphSpec) -> GraphSpec:
    shift = a.vertex_count
    bb = b.compact().relabeled({v: v + shift for v in range(1, b.vertex_count + 1)})
    return GraphSpec(a.compact().edges + bb.edges)


def linear_graph(partition) -> GraphSpec:
    """Parts of size j >= 2 become paths on j vertices; parts of size 1 add nothing."""
    g = GraphSpec()
    for part in partition:
        if part >= 2:
            g = disjoint_union(g, path_graph(part))
    return g


def partition_graphs(n: int):
    if n < 1:
        raise ValueError("n must be positive")
    return [GraphCombination.single(linear_graph(p)) for p in partitions(n)]


# -- composition -----------------------------------------------------------


def _indices(p: Polynomial):
    n = p.n
    used = set()
    for e in p.terms:
        for i in range(n):
            if e[i] or e[n + i] or e[2 * n + i] or e[3 * n + i]:
                used.add(i + 1)
    return used


def compose(a: Polynomial, b: Polynomial, w: WeylGroup) -> Polynomial:
    """R_n(a * b) for polynomials on disjoint index sets, embedded at rank n."""
    ia, ib = _indices(a), _indices(b)
    if ia & ib:
        raise ValueError(f"index sets overlap: {sorted(ia & ib)}")
    if max(ia | ib, default=0) > w.rank:
        raise RankError("indices exceed the group rank")
    return reynolds(w, a.with_rank(w.rank) * b.with_rank(w.rank))


def compose_graphs(a: GraphCombination, b: GraphCombination) -> GraphCombination:
    terms = {}
    for ga, ca in a.terms:
        for gb, cb in b.terms:
            g = disjoint_union(ga, gb)
            terms[g] = terms.get(g, 0) + Fraction(ca) * Fraction(cb)
    return GraphCombination(tuple((g, c) for g, c in terms.items() if c))


# -- searches --------------------------------------------------------------


@dataclass
class SimpleGraphResult:
    group: WeylGroup
    degree: int
    candidates: list  # GraphSpec per column
    solutions: list  # RREF rows

    @property
    def dimension(self):
        return len(self.solutions)

    @property
    def status(self):
        return {0: "none", 1: "unique"}.get(self.dimension, "non-unique")

    def combination(self) -> GraphCombination | None:
        if self.dimension != 1:
            return None
        row = self.solutions[0]
        return GraphCombination(tuple((g, c) for g, c in zip(self.candidates, row) if c))

    def combinations(self):
        return [
            GraphCombination(tuple((g, c) for g, c in zip(self.candidates, row) if c))
            for row in self.solutions
        ]


def simple_graph_search(w: WeylGroup, degree: int | None = None) -> SimpleGraphResult:
    """Solve the equation on the span of graphs of x/y-degree 4(n-1).

    Candidate graphs use at most n vertices; for type B only even-exponent
    words are tried.  The nullspace is returned in the coordinates of a
    greedily chosen independent set of graph images.
    """
    n = w.rank
    d = 4 * (n - 1) if degree is None else degree
    seen = set()
    cand_graphs, cols, arrays = [], [], []
    ech = IncrementalEchelon()
    for word in words_of_degree(n, d):
        if w.family == "B" and any(b % 2 for b in word.exps):
            continue
        rep = word.canonical()
        if rep in seen:
            continue
        seen.add(rep)
        if not word_survives(rep, w):
            continue
        e, c = orbit_vector(rep, w)
        if len(e) == 0:
            continue
        if ech.add({tuple(r): int(v) for r, v in zip(e.tolist(), c.tolist())}):
            cand_graphs.append(graph_of(rep))
            arrays.append((e, c))
    index = {}
    for e, c in arrays:
        re, rc = beg_reduced_orbit(w, e, c)
        cols.append({index.setdefault(r, len(index)): int(v) for r, v in zip(map(tuple, re.tolist()), rc.tolist())})
    sols = nullspace(cols, len(cols))
    for v in sols:
        if combine(v, cols):
            raise RuntimeError("nullspace verification failed")
    return SimpleGraphResult(w, d, cand_graphs, sols)


@dataclass
class CatalogEntry:
    partition: tuple
    combination: GraphCombination
    degree: int
    verified: bool

    def to_dict(self):
        return {
            "partition": list(self.partition),
            "degree": self.degree,
            "verified": self.verified,
            **self.combination.to_dict(),
        }


def catalog(w: WeylGroup, simple=None):
    """Candidate solutions built from simple graphs of the parts of each partition.

    ``simple`` maps a part size k >= 2 to its simple-graph combination; missing
    sizes are searched with ``simple_graph_search`` at rank k.
    """
    if w.family != "B":
        raise ValueError("the catalog construction is defined for type B")
    simple = dict(simple or {})
    entries = []
    for part in partitions(w.rank):
        combo = GraphCombination.single(GraphSpec())
        ok = True
        for k in part:
            if k < 2:
                continue
            if k not in simple:
                res = simple_graph_search(WeylGroup("B", k))
                simple[k] = res.combination()
            if simple[k] is None:
                ok = False
                break
            combo = compose_graphs(combo, simple[k])
        if not ok:
            entries.append(CatalogEntry(part, GraphCombination(()), -1, False))
            continue
        verified = combo.solves(w)
        entries.append(CatalogEntry(part, combo, combo.degree, verified))
    return entries


def catalog_independent(entries, w: WeylGroup) -> int:
    """Rank of the catalog entries as elements of the invariant ring."""
    ech = IncrementalEchelon()
    for ent in entries:
        if not ent.combination.terms:
            continue
        e, c = ent.combination.orbit_arrays(w)
        ech.add({(ent.degree,) + tuple(r): int(v) for r, v in zip(e.tolist(), c.tolist())})
    return ech.rank


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True)
