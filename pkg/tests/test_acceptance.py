"""Acceptance criteria, one test per criterion.

A PASS/FAIL line per criterion is printed in the terminal summary (see
conftest).  Run directly with ``python -m pytest tests/test_acceptance.py``.
"""

import random
import time
from fractions import Fraction

import pytest

from weylhp.beg import beg_apply, beg_is_zero, beg_prime, hp0_report, sl2_coefficients, solve_degree
from weylhp.graphs import catalog, catalog_independent, compose, simple_graph_search
from weylhp.linalg import IncrementalEchelon
from weylhp.poly import Polynomial, parse, pfaffian_x, poisson_bracket
from weylhp.sl2 import (
    PfaffianWord,
    hw0_basis,
    hw0_dim_formula,
    invariant_hw0_basis,
    sl2_generators,
    words_of_degree,
)
from weylhp.weyl import SignedPermutation, WeylGroup, act, hh0_dimension, reynolds

from .oracles import monomials_of_degree, partitions_bruteforce

B2, D2, B3, D3, B4, D4 = (WeylGroup.parse(g) for g in ("B2", "D2", "B3", "D3", "B4", "D4"))


def R(w, text):
    return reynolds(w, PfaffianWord.parse(text, w.rank).expand())


def timed_report(w, max_degree):
    t0 = time.perf_counter()
    rep = hp0_report(w, max_degree)
    return rep, time.perf_counter() - t0


def same_span(polys, targets):
    """Exact check that two finite lists of polynomials span the same space."""
    def rank(ps):
        ech = IncrementalEchelon()
        for p in ps:
            ech.add(dict(p.terms))
        return ech.rank

    a, b = rank(polys), rank(targets)
    return a == b == rank(list(polys) + list(targets))


@pytest.mark.criterion(1, "HP0(B2) = 2, degrees {0,4}, degree-4 solution R2(X^2), < 5 s")
def test_criterion_01_b2():
    rep, secs = timed_report(B2, 12)
    print(f"B2: hp0={rep.hp0} degrees={rep.solution_degrees()} {secs:.2f}s")
    assert rep.hp0 == 2
    assert rep.solution_degrees() == [0, 4]
    (deg4,) = [s for s in rep.degrees if s.degree == 4]
    assert same_span(deg4.solution_polynomials(), [R(B2, "X[1,2]^2")])
    assert secs < 5


@pytest.mark.criterion(2, "HP0(D2) = 1, degree {0} only, < 5 s")
def test_criterion_02_d2():
    rep, secs = timed_report(D2, 12)
    print(f"D2: hp0={rep.hp0} degrees={rep.solution_degrees()} {secs:.2f}s")
    assert rep.hp0 == 1
    assert rep.solution_degrees() == [0]
    assert secs < 5


@pytest.mark.criterion(3, "HP0(B3) = 3, degrees {0,4,8}, solutions {1, R3(X^2), R3(X^2Y^2)}, < 2 min")
def test_criterion_03_b3():
    rep, secs = timed_report(B3, 12)
    print(f"B3: hp0={rep.hp0} degrees={rep.solution_degrees()} {secs:.2f}s")
    assert rep.hp0 == 3
    assert rep.solution_degrees() == [0, 4, 8]
    by_degree = {s.degree: s.solution_polynomials() for s in rep.degrees if s.dimension}
    assert same_span(by_degree[0], [Polynomial.constant(3)])
    assert same_span(by_degree[4], [R(B3, "X[1,2]^2")])
    assert same_span(by_degree[8], [R(B3, "X[1,2]^2 * X[2,3]^2")])
    assert secs < 120


@pytest.mark.criterion(4, "HP0(D3) = 1, degree {0}; R3(X^2), R3(X^2Y^2) fail for D3, < 2 min")
def test_criterion_04_d3():
    rep, secs = timed_report(D3, 12)
    print(f"D3: hp0={rep.hp0} degrees={rep.solution_degrees()} {secs:.2f}s")
    assert rep.hp0 == 1
    assert rep.solution_degrees() == [0]
    assert not beg_apply(D3, R(D3, "X[1,2]^2")).is_zero()
    assert not beg_apply(D3, R(D3, "X[1,2]^2 * X[2,3]^2")).is_zero()
    assert secs < 120


@pytest.mark.criterion(5, "hh0 = hp0 for B2, D2, B3, D3; hh0 = partition counts for n <= 8")
def test_criterion_05_hh0():
    for w in (B2, D2, B3, D3):
        rep = hp0_report(w, 12)
        assert hh0_dimension(w) == rep.hp0 == rep.hh0, str(w)
    for n in range(2, 9):
        parts = partitions_bruteforce(n)
        assert hh0_dimension(WeylGroup("B", n)) == len(parts)
        assert hh0_dimension(WeylGroup("D", n)) == sum(1 for p in parts if len(p) % 2 == 0)


def bruteforce_hw0_dim(n, d):
    t = sl2_generators(n)
    ech = IncrementalEchelon()
    count = 0
    for m in monomials_of_degree(2 * n, d):
        p = Polynomial(n, {m + (0,) * (2 * n): 1})
        col = {}
        for tag, g in enumerate((t.E, t.F, t.H)):
            for e, c in poisson_bracket(g, p).terms.items():
                col[(tag,) + e] = c
        ech.add(col)
        count += 1
    return count - ech.rank


@pytest.mark.criterion(6, "Poincare oracle: brute-force sl2 kernel = formula = |hw0_basis|, n <= 3, d <= 8")
def test_criterion_06_poincare():
    for n in (2, 3):
        for d in range(0, 9):
            brute = bruteforce_hw0_dim(n, d)
            assert brute == hw0_dim_formula(n, d) == len(hw0_basis(n, d)), (n, d)


@pytest.mark.criterion(7, "Pfaffian relation expands to 0 and |hw0_basis(4,4)| = 20")
def test_criterion_07_pfaffian():
    X = lambda i, j: pfaffian_x(4, i, j)
    rel = X(1, 2) * X(3, 4) - X(1, 3) * X(2, 4) + X(2, 3) * X(1, 4)
    assert rel.is_zero()
    assert len(hw0_basis(4, 4)) == 20


def random_invariants(count, seed=20240601):
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        n = 2 if len(out) < count // 2 else 3
        w = rng.choice([WeylGroup("B", n), WeylGroup("D", n)])
        d = rng.choice([2, 4, 6])
        terms = {}
        for _ in range(rng.randint(1, 4)):
            e = [0] * (4 * n)
            for _ in range(d):
                e[rng.randrange(2 * n)] += 1
            terms[tuple(e)] = Fraction(rng.randint(-4, 4), rng.randint(1, 3))
        p = reynolds(w, Polynomial(n, terms))
        if p:
            out.append((w, p))
    return out


def coupled_pattern_holds(w, p, s):
    n = w.rank
    t = sl2_generators(n)
    a, b, c = sl2_coefficients(w, p)
    k = Fraction(s, n)
    br = poisson_bracket
    return a == br(t.H, p) * k and b == br(t.E, p) * -k and c == br(t.F, p) * k


def ratio(a, b):
    """Scalar c with a = c * b, or None when no such scalar exists."""
    if not b:
        return Fraction(0) if not a else None
    key = next(iter(b.terms))
    c = a.terms.get(key, 0) / b.terms[key]
    return c if a == b * c else None


@pytest.mark.criterion(8, "z1t1 / t1^2 / z1^2 coefficients = (+-1/n){H,P}, (-+1/n){E,P}, (+-1/n){F,P}")
def test_criterion_08_sl2_coefficients():
    samples = random_invariants(20)
    # fix the sign at n = 2 by brute force over both choices
    rank2 = [(w, p) for w, p in samples if w.rank == 2]
    signs = [s for s in (1, -1) if all(coupled_pattern_holds(w, p, s) for w, p in rank2)]
    if not signs:
        w, p = rank2[0]
        t = sl2_generators(w.rank)
        observed = [ratio(coeff, poisson_bracket(g, p)) * w.rank
                    for coeff, g in zip(sl2_coefficients(w, p), (t.H, t.E, t.F))]
        pytest.fail(f"no global sign s fits the coupled pattern at n = 2; "
                    f"observed n * coefficient / bracket for H, E, F: {[str(o) for o in observed]}")
    s = signs[0]
    print(f"sign pattern s = {s:+d}")
    for w, p in samples:
        assert coupled_pattern_holds(w, p, s), (str(w), str(p))


@pytest.mark.criterion(9, "Witness coefficients in E'_3: (2/9)j for X^2j and the X^2j Y^2l table")
def test_criterion_09_witnesses():
    for j in (2, 3):
        m = parse(f"z1*t1*y1^{2 * j}*z3^{2 * j}", 3)
        assert beg_prime(B3, R(B3, f"X[1,2]^{2 * j}")).coefficient(m) == Fraction(2, 9) * j
    table = {(2, 1): Fraction(2, 9), (2, 2): Fraction(8, 9), (3, 1): Fraction(3, 9)}
    for (j, l), expected in table.items():
        # j != l, l != 1: (j+l)/9; l = 1: j/9; j = l: 4j/9
        if j == l:
            assert expected == Fraction(4 * j, 9)
        elif l == 1:
            assert expected == Fraction(j, 9)
        m = parse(f"z1*t1*y1^{2 * j + 2 * l}*z3^{2 * j}*z2^{2 * l}", 3)
        got = beg_prime(B3, R(B3, f"X[1,2]^{2 * j} * X[2,3]^{2 * l}")).coefficient(m)
        assert got == expected, (j, l, got)


@pytest.mark.criterion(10, "Structural suite: Reynolds idempotence, bracket laws, B/D comparisons, persistence, composition, bracket formula")
def test_criterion_10_structural():
    rng = random.Random(7)
    failures = []

    def check(name, ok):
        if not ok:
            failures.append(name)

    def rand_poly(n, deg, terms=3):
        out = {}
        for _ in range(terms):
            e = [0] * (4 * n)
            for _ in range(deg):
                e[rng.randrange(2 * n)] += 1
            out[tuple(e)] = rng.randint(-3, 3)
        return Polynomial(n, out)

    br = poisson_bracket
    for _ in range(10):
        for w in (B2, D2, B3, D3):
            p = rand_poly(w.rank, rng.choice([2, 3, 4]))
            r = reynolds(w, p)
            check("reynolds idempotence", reynolds(w, r) == r)
        p, q, s = (rand_poly(2, rng.randint(1, 4)) for _ in range(3))
        check("antisymmetry", (br(p, q) + br(q, p)).is_zero())
        check("jacobi", (br(p, br(q, s)) + br(q, br(s, p)) + br(s, br(p, q))).is_zero())
        check("leibniz", br(p, q * s) == br(p, q) * s + q * br(p, s))

    # B3 and D3 invariants agree in even degree <= 8; B4/D4 degree-6 hw0 counterexample
    for d in range(0, 9, 2):
        for m in monomials_of_degree(6, d):
            mono = Polynomial(3, {m + (0,) * 6: 1})
            if reynolds(B3, mono) != reynolds(D3, mono):
                failures.append(f"b3/d3 invariants degree {d}")
                break
    check("B4/D4 degree 6", (len(invariant_hw0_basis(B4, 6)), len(invariant_hw0_basis(D4, 6))) == (0, 1))

    # D3 solutions are B3 solutions
    for d in range(0, 13, 2):
        sd, sb = solve_degree(D3, d), solve_degree(B3, d)
        check(f"d3 <= b3 dims degree {d}", sd.dimension <= sb.dimension)
        for p in sd.solution_polynomials():
            if reynolds(B3, p) == p:
                check(f"d3 solution solves b3, degree {d}", beg_is_zero(B3, p))

    # nonvanishing persists from rank 2 to rank 3
    for d in range(0, 9, 2):
        for word in words_of_degree(2, d):
            if reynolds(B2, word.expand()):
                check(f"persistence {word}", not reynolds(B3, word.with_rank(3).expand()).is_zero())

    # R2(X^2) stays a solution at rank 3
    check("rank-2 solution at rank 3", beg_is_zero(B3, R(B3, "X[1,2]^2")))

    # composition at rank 4
    a = R(B2, "X[1,2]^2").with_rank(4)
    b = act(SignedPermutation((2, 3, 0, 1), (1,) * 4), a)
    check("composition", beg_is_zero(B4, compose(a, b, B4)))

    # bracket of two R3(X^2p) is a multiple of R3(X^(2p-1) Y^(2q-1) Z)
    X, Y, Z = pfaffian_x(3, 1, 2), pfaffian_x(3, 2, 3), pfaffian_x(3, 3, 1)
    for p, q in ((1, 1), (1, 2), (2, 2)):
        lhs = br(R(B3, f"X[1,2]^{2 * p}"), R(B3, f"X[1,2]^{2 * q}"))
        rhs = reynolds(B3, X ** (2 * p - 1) * Y ** (2 * q - 1) * Z) * Fraction(8, 3) * p * q
        check(f"bracket formula at {(p, q)}", lhs == rhs)

    assert not failures, failures


@pytest.mark.criterion(11, "B4 desk-scale evidence: simple graph search and 5 verified catalog entries, <= 1 h")
def test_criterion_11_b4_catalog():
    t0 = time.perf_counter()
    res = simple_graph_search(B4)
    # the dimension is reported, not asserted
    print(f"B4 simple graph search: dimension {res.dimension} ({res.status})")
    for combo in res.combinations():
        print(f"  {combo}")
    entries = catalog(B4)
    verified = [e for e in entries if e.verified]
    print(f"B4 catalog: {len(entries)} entries, {len(verified)} verified")
    assert len(entries) == 5 and len(verified) == 5
    assert catalog_independent(verified, B4) == 5
    assert time.perf_counter() - t0 < 3600


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-v"]))
