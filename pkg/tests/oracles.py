"""Independent reference implementations used only by the tests."""

from fractions import Fraction

import sympy

from weylhp.poly import BLOCKS, Polynomial


def symbols(n):
    return [sympy.Symbol(f"{b}{i}") for b in BLOCKS for i in range(1, n + 1)]


def to_sympy(p: Polynomial):
    syms = symbols(p.n)
    expr = sympy.Integer(0)
    for e, c in p.terms.items():
        term = sympy.Rational(c.numerator, c.denominator)
        for s, k in zip(syms, e):
            term *= s**k
        expr += term
    return expr


def from_sympy(expr, n):
    syms = symbols(n)
    poly = sympy.Poly(sympy.expand(expr), *syms)
    return Polynomial(
        n, {tuple(m): Fraction(int(c.p), int(c.q)) for m, c in zip(poly.monoms(), poly.coeffs())}
    )


def sympy_shift(p: Polynomial):
    n = p.n
    syms = symbols(n)
    x, y, z, t = (syms[k * n : (k + 1) * n] for k in range(4))
    sub = {x[i]: x[i] + z[i] for i in range(n)}
    sub.update({y[i]: y[i] + t[i] for i in range(n)})
    return from_sympy(to_sympy(p).xreplace(sub), n)


def sympy_bracket(p, q):
    n = p.n
    syms = symbols(n)
    P, Q = to_sympy(p), to_sympy(q)
    expr = sum(
        sympy.diff(P, syms[i]) * sympy.diff(Q, syms[n + i]) - sympy.diff(P, syms[n + i]) * sympy.diff(Q, syms[i])
        for i in range(n)
    )
    return from_sympy(expr, n)


def monomials_of_degree(nvars, d):
    if nvars == 1:
        yield (d,)
        return
    for k in range(d, -1, -1):
        for rest in monomials_of_degree(nvars - 1, d - k):
            yield (k,) + rest


def partitions_bruteforce(n):
    """Partitions from compositions (bitmask cut points), deduplicated by sorting."""
    seen = set()
    for mask in range(2 ** (n - 1)):
        parts, cur = [], 1
        for b in range(n - 1):
            if mask >> b & 1:
                parts.append(cur)
                cur = 1
            else:
                cur += 1
        parts.append(cur)
        seen.add(tuple(sorted(parts, reverse=True)))
    return seen


def matrix_rank_sympy(columns, keys):
    m = sympy.Matrix([[col.get(k, 0) for col in columns] for k in keys])
    return m.rank()
