"""Exact sparse polynomials over Q in the variable blocks x, y, z, t."""

from __future__ import annotations

import math
import re
from fractions import Fraction
from typing import Iterable, Mapping

import numpy as np

from . import _kernels as K

BLOCKS = "xyzt"


class RankError(ValueError):
    pass


class ParseError(ValueError):
    pass


def var_position(n: int, block: str, index: int) -> int:
    b = BLOCKS.index(block)
    if not 1 <= index <= n:
        raise RankError(f"{block}{index} out of range for rank {n}")
    return b * n + index - 1


def _as_fraction(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, (int, np.integer)):
        return Fraction(int(c))
    if isinstance(c, str):
        return Fraction(c)
    raise TypeError(f"unsupported coefficient {c!r}")


def _fmt_coeff(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


class Polynomial:
    """Immutable sparse polynomial in ``4n`` variables.

    ``terms`` maps exponent tuples of length ``4n`` (order x1..xn, y1..yn,
    z1..zn, t1..tn) to nonzero Fractions.
    """

    __slots__ = ("n", "terms", "_hash")

    def __init__(self, n: int, terms: Mapping | Iterable = ()):
        if n < 1:
            raise RankError("rank must be positive")
        self.n = n
        clean = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        width = 4 * n
        for e, c in items:
            e = tuple(int(v) for v in e)
            if len(e) != width:
                raise RankError(f"exponent vector of length {len(e)} for rank {n}")
            c = _as_fraction(c)
            if c:
                clean[e] = clean.get(e, 0) + c
        self.terms = {e: c for e, c in clean.items() if c}
        self._hash = None

    # -- construction --------------------------------------------------
    @classmethod
    def zero(cls, n):
        return cls(n)

    @classmethod
    def constant(cls, n, c=1):
        return cls(n, {(0,) * (4 * n): c})

    @classmethod
    def var(cls, n, name: str):
        m = re.fullmatch(r"([xyzt])(\d+)", name)
        if not m:
            raise ParseError(f"bad variable name {name!r}")
        e = [0] * (4 * n)
        e[var_position(n, m.group(1), int(m.group(2)))] = 1
        return cls(n, {tuple(e): 1})

    @classmethod
    def monomial(cls, n, exps, coeff=1):
        return cls(n, {tuple(exps): coeff})

    @classmethod
    def _raw(cls, n, terms):
        # trusted constructor: terms already canonical
        p = object.__new__(cls)
        p.n = n
        p.terms = terms
        p._hash = None
        return p

    # -- basic protocol ------------------------------------------------
    def __bool__(self):
        return bool(self.terms)

    def is_zero(self):
        return not self.terms

    def __len__(self):
        return len(self.terms)

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.n == other.n and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == Polynomial.constant(self.n, other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.n, frozenset(self.terms.items())))
        return self._hash

    def __repr__(self):
        return f"Polynomial({self.n}, {str(self)!r})"

    def _check(self, other):
        if other.n != self.n:
            raise RankError(f"rank mismatch: {self.n} vs {other.n}")

    def _coerce(self, other):
        if isinstance(other, Polynomial):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction, np.integer)):
            return Polynomial.constant(self.n, other)
        return None

    # -- arithmetic ----------------------------------------------------
    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = out.get(e, 0) + c
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return Polynomial._raw(self.n, out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._raw(self.n, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c):
        c = _as_fraction(c)
        if not c:
            return Polynomial.zero(self.n)
        return Polynomial._raw(self.n, {e: v * c for e, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, np.integer)):
            return self.scale(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        self._check(other)
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                v = out.get(e, 0) + c1 * c2
                if v:
                    out[e] = v
                else:
                    del out[e]
        return Polynomial._raw(self.n, out)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction, np.integer)):
            return self.scale(other)
        return NotImplemented

    def __truediv__(self, c):
        return self.scale(1 / _as_fraction(c))

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        result = Polynomial.constant(self.n)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    # -- grading -------------------------------------------------------
    def degree(self):
        return max((sum(e) for e in self.terms), default=-1)

    def degrees(self):
        return {sum(e) for e in self.terms}

    def is_homogeneous(self):
        return len(self.degrees()) <= 1

    def xy_degree(self, e):
        return sum(e[: 2 * self.n])

    def is_xy_only(self):
        n2 = 2 * self.n
        return all(not any(e[n2:]) for e in self.terms)

    def homogeneous_part(self, d):
        return Polynomial._raw(self.n, {e: c for e, c in self.terms.items() if sum(e) == d})

    # -- calculus ------------------------------------------------------
    def derivative(self, pos: int):
        out = {}
        for e, c in self.terms.items():
            k = e[pos]
            if k:
                f = list(e)
                f[pos] = k - 1
                out[tuple(f)] = c * k
        return Polynomial._raw(self.n, out)

    def substitute_zero(self, positions: Iterable[int]):
        """Set the listed variables to zero."""
        pos = list(positions)
        return Polynomial._raw(
            self.n, {e: c for e, c in self.terms.items() if not any(e[p] for p in pos)}
        )

    def coefficient_of(self, m):
        """x/y coefficient of the z/t monomial ``m`` (Polynomial, string or exponent tuple)."""
        target = _zt_exponents(self.n, m)
        n2 = 2 * self.n
        out = {}
        for e, c in self.terms.items():
            if e[n2:] == target:
                out[e[:n2] + (0,) * n2] = c
        return Polynomial._raw(self.n, out)

    def coefficient(self, exps) -> Fraction:
        if isinstance(exps, Polynomial):
            if len(exps) != 1:
                raise ValueError("expected a single monomial")
            (exps,) = exps.terms
        return self.terms.get(tuple(exps), Fraction(0))

    def with_rank(self, n: int):
        """Embed into a larger rank (indices keep their meaning)."""
        if n < self.n:
            raise RankError("cannot shrink rank")
        out = {}
        for e, c in self.terms.items():
            f = [0] * (4 * n)
            for b in range(4):
                f[b * n : b * n + self.n] = e[b * self.n : (b + 1) * self.n]
            out[tuple(f)] = c
        return Polynomial._raw(n, out)

    # -- arrays --------------------------------------------------------
    def to_arrays(self):
        """Return ``(exps, coeffs, denom)`` with integer coefficients ``c * denom``."""
        if not self.terms:
            e, c = K.empty_terms(self.n)
            return e, c, 1
        denom = 1
        for c in self.terms.values():
            denom = math.lcm(denom, c.denominator)
        exps = np.array(list(self.terms.keys()), dtype=K.EXP_DTYPE)
        ints = [int(c * denom) for c in self.terms.values()]
        if max(abs(v) for v in ints) < K.INT64_SAFE:
            coeffs = np.array(ints, dtype=np.int64)
        else:
            coeffs = np.array(ints, dtype=object)
        return exps, coeffs, denom

    @classmethod
    def from_arrays(cls, n, exps, coeffs, denom=1):
        denom = Fraction(denom)
        terms = {}
        for e, c in zip(exps.tolist(), coeffs.tolist()):
            if c:
                terms[tuple(e)] = Fraction(int(c)) / denom
        return cls._raw(n, terms)

    # -- printing ------------------------------------------------------
    def sorted_terms(self):
        """Terms in descending graded-lex order (block order x < y < z < t)."""
        # variable rank: t_n is the largest, so compare reversed exponent vectors
        return sorted(self.terms.items(), key=lambda it: (sum(it[0]), it[0][::-1]), reverse=True)

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            mono = _fmt_monomial(self.n, e)
            a = abs(c)
            if not mono:
                body = _fmt_coeff(a)
            elif a == 1:
                body = mono
            else:
                body = f"{_fmt_coeff(a)}*{mono}"
            if not parts:
                parts.append(body if c > 0 else f"-{body}")
            else:
                parts.append(("+ " if c > 0 else "- ") + body)
        return " ".join(parts)

    @classmethod
    def parse(cls, text: str, n: int | None = None):
        return parse(text, n)


def _fmt_monomial(n, e):
    out = []
    for b, name in enumerate(BLOCKS):
        for i in range(n):
            k = e[b * n + i]
            if k == 1:
                out.append(f"{name}{i + 1}")
            elif k:
                out.append(f"{name}{i + 1}^{k}")
    return "*".join(out)


def _zt_exponents(n, m):
    if isinstance(m, str):
        m = parse(m, n)
    if isinstance(m, Polynomial):
        if len(m) != 1:
            raise ValueError("expected a single monomial")
        (e,) = m.terms
    else:
        e = tuple(m)
        if len(e) == 2 * n:
            return e
    if any(e[: 2 * n]):
        raise ValueError("monomial must only involve z/t variables")
    return tuple(e[2 * n :])


# -- Poisson structure ---------------------------------------------------


def poisson_bracket(p: Polynomial, q: Polynomial) -> Polynomial:
    """{p, q} = sum_i d_xi p * d_yi q - d_yi p * d_xi q (z, t are constants)."""
    p._check(q)
    n = p.n
    acc = {}
    for i in range(n):
        for a, b, sign in ((i, n + i, 1), (n + i, i, -1)):
            dp = p.derivative(a)
            if not dp:
                continue
            dq = q.derivative(b)
            if not dq:
                continue
            for e1, c1 in dp.terms.items():
                for e2, c2 in dq.terms.items():
                    e = tuple(u + v for u, v in zip(e1, e2))
                    acc[e] = acc.get(e, 0) + sign * c1 * c2
    return Polynomial._raw(n, {e: c for e, c in acc.items() if c})


def shift_substitute(p: Polynomial) -> Polynomial:
    """P(x + z, y + t), fully expanded."""
    if not p.is_xy_only():
        raise ValueError("shift_substitute expects a polynomial in x, y only")
    exps, coeffs, denom = p.to_arrays()
    out, oc = K.shift_expand(exps, coeffs, p.n)
    out, oc = K.merge(out, oc)
    return Polynomial.from_arrays(p.n, out, oc, denom)


def coefficient_of(p: Polynomial, m) -> Polynomial:
    return p.coefficient_of(m)


def degree(p: Polynomial) -> int:
    return p.degree()


# -- parsing -------------------------------------------------------------

_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+)|(?P<var>[xyzt]\d+)|(?P<pf>X\[\s*\d+\s*,\s*\d+\s*\])|(?P<op>[-+*/^()]))"
)


def _tokenize(text):
    pos = 0
    toks = []
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected input at {text[pos:pos + 10]!r}")
        pos = m.end()
        kind = m.lastgroup
        toks.append((kind, m.group(kind).replace(" ", "")))
        while pos < len(text) and text[pos].isspace():
            pos += 1
    return toks


def infer_rank(text: str) -> int:
    idx = [int(v) for v in re.findall(r"[xyzt](\d+)", text)]
    for a, b in re.findall(r"X\[\s*(\d+)\s*,\s*(\d+)\s*\]", text):
        idx += [int(a), int(b)]
    return max(idx, default=1)


class _Parser:
    def __init__(self, toks, n):
        self.toks = toks
        self.i = 0
        self.n = n

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None)

    def take(self, value=None):
        tok = self.peek()
        if tok[0] is None or (value is not None and tok[1] != value):
            raise ParseError(f"expected {value or 'token'}, got {tok[1]!r}")
        self.i += 1
        return tok

    def expr(self):
        sign = 1
        if self.peek()[1] in ("+", "-"):
            sign = -1 if self.take()[1] == "-" else 1
        acc = self.term() * sign
        while self.peek()[1] in ("+", "-"):
            op = self.take()[1]
            t = self.term()
            acc = acc + t if op == "+" else acc - t
        return acc

    def term(self):
        acc = self.power()
        while self.peek()[1] in ("*", "/"):
            op = self.take()[1]
            rhs = self.power()
            if op == "*":
                acc = acc * rhs
            else:
                c = _constant_value(rhs)
                if c is None or c == 0:
                    raise ParseError("division only by nonzero constants")
                acc = acc / c
        return acc

    def power(self):
        base = self.atom()
        if self.peek()[1] == "^":
            self.take()
            kind, val = self.take()
            if kind != "num":
                raise ParseError("exponent must be a nonnegative integer")
            base = base ** int(val)
        return base

    def atom(self):
        kind, val = self.peek()
        if kind == "num":
            self.take()
            return Polynomial.constant(self.n, int(val))
        if kind == "var":
            self.take()
            return Polynomial.var(self.n, val)
        if kind == "pf":
            self.take()
            i, j = (int(v) for v in re.findall(r"\d+", val))
            return pfaffian_x(self.n, i, j)
        if val == "(":
            self.take()
            inner = self.expr()
            self.take(")")
            return inner
        if val == "-":
            self.take()
            return -self.power()
        raise ParseError(f"unexpected token {val!r}")


def _constant_value(p):
    if not p.terms:
        return Fraction(0)
    if len(p.terms) == 1:
        (e, c), = p.terms.items()
        if not any(e):
            return c
    return None


def parse(text: str, n: int | None = None) -> Polynomial:
    """Parse ``c * v1^e1 * ...`` sums; also accepts ``X[i,j]`` and parentheses."""
    if n is None:
        n = infer_rank(text)
    toks = _tokenize(text)
    if not toks:
        raise ParseError("empty input")
    p = _Parser(toks, n)
    try:
        out = p.expr()
    except RankError as exc:
        raise ParseError(str(exc)) from exc
    if p.i != len(toks):
        raise ParseError(f"trailing input {p.peek()[1]!r}")
    return out


def pfaffian_x(n: int, i: int, j: int) -> Polynomial:
    """X_{i,j} = x_i y_j - y_i x_j."""
    if not (1 <= i <= n and 1 <= j <= n) or i == j:
        raise RankError(f"X[{i},{j}] invalid for rank {n}")
    a = [0] * (4 * n)
    b = [0] * (4 * n)
    a[i - 1] = 1
    a[n + j - 1] = 1
    b[n + i - 1] = 1
    b[j - 1] = 1
    return Polynomial(n, {tuple(a): 1, tuple(b): -1})
