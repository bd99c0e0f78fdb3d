"""Sparse multivariate polynomials with integer coefficients.

A ``Poly`` is stored canonically: a sorted tuple of ``(monomial, coefficient)``
pairs, where a monomial is a tuple of ``(variable index, exponent)`` pairs sorted
by index. Zero coefficients and zero exponents are never stored, so structural
equality coincides with equality of polynomials.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Mapping, Union

from ._lex import ParseError, TokenStream, tokenize, var_index

Monomial = tuple  # tuple[tuple[int, int], ...]


def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    exps = dict(a)
    for var, e in b:
        exps[var] = exps.get(var, 0) + e
    return tuple(sorted(exps.items()))


def _degree(m: Monomial) -> int:
    return sum(e for _, e in m)


class Poly:
    __slots__ = ("terms", "_hash")

    def __init__(self, coeffs: Mapping[Monomial, int] | None = None):
        items = [(m, c) for m, c in (coeffs or {}).items() if c != 0]
        nvars = max((v for m, _ in items for v, _ in m), default=0)

        def order(item):
            # graded lexicographic, x1 > x2 > ..., highest monomial first
            exps = dict(item[0])
            return (-_degree(item[0]), tuple(-exps.get(v, 0) for v in range(1, nvars + 1)))

        self.terms = tuple(sorted(items, key=order))
        self._hash = hash(self.terms)

    # construction helpers

    @classmethod
    def const(cls, c: int) -> "Poly":
        return cls({(): c})

    @classmethod
    def var(cls, index: int) -> "Poly":
        if index < 1:
            raise ValueError("variable indices start at 1")
        return cls({((index, 1),): 1})

    # arithmetic

    def __add__(self, other: "PolyLike") -> "Poly":
        other = _coerce(other)
        acc = dict(self.terms)
        for m, c in other.terms:
            acc[m] = acc.get(m, 0) + c
        return Poly(acc)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly({m: -c for m, c in self.terms})

    def __sub__(self, other: "PolyLike") -> "Poly":
        return self + (-_coerce(other))

    def __rsub__(self, other: "PolyLike") -> "Poly":
        return _coerce(other) - self

    def __mul__(self, other: "PolyLike") -> "Poly":
        other = _coerce(other)
        acc: dict = {}
        for (m1, c1), (m2, c2) in itertools.product(self.terms, other.terms):
            m = _mono_mul(m1, m2)
            acc[m] = acc.get(m, 0) + c1 * c2
        return Poly(acc)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Poly":
        if not isinstance(n, int) or n < 0:
            raise ValueError("polynomial exponents must be non-negative integers")
        result = Poly.const(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other) -> bool:
        return isinstance(other, Poly) and self.terms == other.terms

    def __hash__(self) -> int:
        return self._hash

    # inspection

    def is_zero(self) -> bool:
        return not self.terms

    def variables(self) -> frozenset:
        return frozenset(v for m, _ in self.terms for v, _ in m)

    def total_degree(self) -> int:
        return max((_degree(m) for m, _ in self.terms), default=0)

    def coefficients(self) -> list:
        return [c for _, c in self.terms]

    def __call__(self, point: Mapping[int, int]) -> int:
        return poly_eval(self, point)

    def __str__(self) -> str:
        return render_poly(self)

    def __repr__(self) -> str:
        return f"Poly({render_poly(self)!r})"


PolyLike = Union[Poly, int]


def _coerce(p: PolyLike) -> Poly:
    if isinstance(p, Poly):
        return p
    if isinstance(p, int):
        return Poly.const(p)
    raise TypeError(f"cannot use {type(p).__name__} as a polynomial")


def poly_add(a: Poly, b: Poly) -> Poly:
    return a + b


def poly_sub(a: Poly, b: Poly) -> Poly:
    return a - b


def poly_mul(a: Poly, b: Poly) -> Poly:
    return a * b


def poly_eq(a: Poly, b: Poly) -> bool:
    """Decide equality of two ordinary polynomials via their canonical forms."""
    return a.terms == b.terms


def poly_eval(p: Poly, point: Mapping[int, int]) -> int:
    total = 0
    for m, c in p.terms:
        term = c
        for var, e in m:
            try:
                term *= point[var] ** e
            except KeyError:
                raise KeyError(f"no value bound for x{var}") from None
        total += term
    return total


# positivity


@dataclass(frozen=True)
class PositiveUpTo:
    bound: int


@dataclass(frozen=True)
class CounterexampleAt:
    point: dict
    value: int


PositivityVerdict = Union[PositiveUpTo, CounterexampleAt]


def poly_positivity(p: Poly, bound: int) -> PositivityVerdict:
    """Evaluate ``p`` on every point of {1..bound}^vars, in lexicographic order."""
    if bound < 1:
        raise ValueError("bound must be at least 1")
    variables = sorted(p.variables())
    for coords in itertools.product(range(1, bound + 1), repeat=len(variables)):
        point = dict(zip(variables, coords))
        value = poly_eval(p, point)
        if value <= 0:
            return CounterexampleAt(point, value)
    return PositiveUpTo(bound)


def poly_reflect(p: Poly):
    """Turn a polynomial with positive coefficients into an equivalent ``Expr``.

    Monomials are summed left to right in canonical order; a coefficient c > 1
    becomes a leading numeral factor, and x^k becomes the left-nested product
    x*x*...*x.
    """
    from .expr import Prod, Sum, Var, numeral

    if p.is_zero():
        raise ValueError("cannot reflect the zero polynomial")
    if any(c < 1 for c in p.coefficients()):
        raise ValueError(f"cannot reflect {p}: negative coefficient")
    summands = []
    for m, c in p.terms:
        factors = [Var(v) for v, e in m for _ in range(e)]
        if c > 1 or not factors:
            factors.insert(0, numeral(c))
        term = factors[0]
        for f in factors[1:]:
            term = Prod(term, f)
        summands.append(term)
    result = summands[0]
    for s in summands[1:]:
        result = Sum(result, s)
    return result


# text form


def render_poly(p: Poly) -> str:
    if p.is_zero():
        return "0"
    parts = []
    for i, (m, c) in enumerate(p.terms):
        mono = "*".join(f"x{v}" if e == 1 else f"x{v}^{e}" for v, e in m)
        mag = abs(c)
        if not mono:
            body = str(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{mag}*{mono}"
        if i == 0:
            parts.append(body if c > 0 else f"-{body}")
        else:
            parts.append(f" + {body}" if c > 0 else f" - {body}")
    return "".join(parts)


class _PolyParser:
    """poly := ['-'] term (('+'|'-') term)*; term := factor ('*' factor)*;
    factor := '-' factor | atom ('^' integer)?; atom := integer | ident | '(' poly ')'.
    """

    def __init__(self, stream: TokenStream):
        self.s = stream

    def poly(self) -> Poly:
        result = self.term()
        while True:
            if self.s.accept("+"):
                result = result + self.term()
            elif self.s.accept("-"):
                result = result - self.term()
            else:
                return result

    def term(self) -> Poly:
        result = self.factor()
        while self.s.accept("*"):
            result = result * self.factor()
        return result

    def factor(self) -> Poly:
        if self.s.accept("-"):
            return -self.factor()
        base = self.atom()
        if self.s.accept("^"):
            tok = self.s.next()
            if tok.kind != "num":
                raise ParseError("polynomial exponents must be integer literals", tok.pos)
            base = base ** int(tok.text)
        return base

    def atom(self) -> Poly:
        tok = self.s.next()
        if tok.kind == "num":
            return Poly.const(int(tok.text))
        if tok.kind == "ident":
            return Poly.var(var_index(tok))
        if tok.kind == "op" and tok.text == "(":
            inner = self.poly()
            self.s.expect(")")
            return inner
        raise ParseError(f"unexpected {tok.text or 'end of input'!r} in polynomial", tok.pos)


def parse_poly_tokens(stream: TokenStream) -> Poly:
    return _PolyParser(stream).poly()


def parse_poly(text: str) -> Poly:
    stream = TokenStream(tokenize(text))
    p = parse_poly_tokens(stream)
    tok = stream.peek()
    if tok.kind != "eof":
        raise ParseError(f"trailing input {tok.text!r}", tok.pos)
    return p
