"""Exact linear algebra on sparse integer / rational vectors.

Vectors are dicts ``key -> int`` (or Fraction).  Keys must be mutually
comparable; the largest key of a vector is its pivot.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Hashable, Mapping


def _content(vec):
    g = 0
    for v in vec.values():
        g = math.gcd(g, v)
        if g == 1:
            break
    return g


def _to_integer(vec: Mapping):
    """Clear denominators; returns the integer vector and the scale used."""
    den = 1
    for v in vec.values():
        if isinstance(v, Fraction):
            den = math.lcm(den, v.denominator)
    out = {k: int(v * den) for k, v in vec.items() if v}
    return out, den


def _axpy(a, u, b, v):
    """a*u - b*v as a new sparse dict (zeros dropped)."""
    out = {k: a * x for k, x in u.items()}
    for k, y in v.items():
        z = out.get(k, 0) - b * y
        if z:
            out[k] = z
        else:
            out.pop(k, None)
    return out


def _primitive(vec, combo):
    g = math.gcd(_content(vec), _content(combo)) if combo else _content(vec)
    if g > 1:
        vec = {k: x // g for k, x in vec.items()}
        combo = {k: x // g for k, x in combo.items()}
    return vec, combo


class IncrementalEchelon:
    """Fraction-free echelon form built one vector at a time.

    ``add`` returns True when the vector is independent of everything added
    before.  Dependent vectors produce a null combination (a relation among
    the tags of the added vectors), kept in ``relations``.
    """

    def __init__(self):
        self.pivots = {}  # pivot key -> (vec, combo)
        self.relations = []
        self.tags = []

    @property
    def rank(self):
        return len(self.pivots)

    def reduce(self, vec, combo=None):
        vec, den = _to_integer(vec)
        # the combination must describe den * original vector
        combo = {k: v * den for k, v in (combo or {}).items()}
        while vec:
            k = max(vec)
            hit = self.pivots.get(k)
            if hit is None:
                break
            pv, pc = hit
            a, b = pv[k], vec[k]
            g = math.gcd(a, b)
            a, b = a // g, b // g
            vec = _axpy(a, vec, b, pv)
            combo = _axpy(a, combo, b, pc)
            vec, combo = _primitive(vec, combo)
        return vec, combo

    def add(self, vec, tag: Hashable = None) -> bool:
        if tag is None:
            tag = len(self.tags)
        self.tags.append(tag)
        red, combo = self.reduce(vec, {tag: 1})
        if not red:
            self.relations.append(combo)
            return False
        self.pivots[max(red)] = (red, combo)
        return True

    def contains(self, vec) -> bool:
        red, _ = self.reduce(vec)
        return not red


def rank_of(vectors) -> int:
    ech = IncrementalEchelon()
    for v in vectors:
        ech.add(v)
    return ech.rank


def rref(rows, ncols: int):
    """Reduced row echelon form of dense rational rows; zero rows dropped.

    Pivots are the leftmost nonzero entries and are normalized to 1.
    """
    m = [[Fraction(x) for x in r] for r in rows]
    out = []
    col = 0
    r = 0
    while r < len(m) and col < ncols:
        piv = next((i for i in range(r, len(m)) if m[i][col] != 0), None)
        if piv is None:
            col += 1
            continue
        m[r], m[piv] = m[piv], m[r]
        p = m[r][col]
        m[r] = [x / p for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][col] != 0:
                f = m[i][col]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        r += 1
        col += 1
    out = [row for row in m[:r] if any(row)]
    return out


def null_combinations(columns):
    """Relations ``c`` with ``sum_j c_j * columns[j] = 0`` (not normalized)."""
    ech = IncrementalEchelon()
    for j, col in enumerate(columns):
        ech.add(col, j)
    return ech.relations


def nullspace(columns, ncols: int | None = None):
    """Normalized (RREF) basis of the kernel of the matrix with given columns.

    ``columns`` is a sequence of sparse dicts ``row_key -> value``.  Returns a
    list of dense Fraction vectors of length ``len(columns)``.
    """
    ncols = len(columns) if ncols is None else ncols
    rels = null_combinations(columns)
    dense = [[combo.get(j, 0) for j in range(ncols)] for combo in rels]
    return rref(dense, ncols)


def nullspace_dense(matrix):
    """Kernel of a dense row-major matrix (list of rows)."""
    if not matrix:
        return []
    ncols = len(matrix[0])
    cols = [{i: Fraction(row[j]) for i, row in enumerate(matrix) if row[j]} for j in range(ncols)]
    return nullspace(cols, ncols)


def combine(coeffs, columns):
    """sum_j coeffs[j] * columns[j] for sparse dict columns."""
    out = {}
    for c, col in zip(coeffs, columns):
        if not c:
            continue
        for k, v in col.items():
            z = out.get(k, 0) + c * v
            if z:
                out[k] = z
            else:
                out.pop(k, None)
    return out
