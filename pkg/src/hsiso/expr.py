"""Polynomials with exponentiation: AST, parser, printer.

Grammar (``^`` binds tightest and is right-associative; ``*`` and ``+`` are
left-associative)::

    expr   := term ('+' term)*
    term   := factor ('*' factor)*
    factor := atom ('^' factor)?
    atom   := numeral | ident | 't[' poly ']' | '(' expr ')'

Numerals n >= 2 are sugar for the right-nested sum 1+(1+(...+1)).
Identifiers are x1, x2, ... with x, y, z, w as aliases for x1..x4.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from ._lex import ParseError, TokenStream, tokenize, var_index
from .poly import Poly, parse_poly_tokens, render_poly


@dataclass(frozen=True)
class One:
    pass


@dataclass(frozen=True)
class Var:
    index: int

    def __post_init__(self):
        if self.index < 1:
            raise ValueError("variable indices start at 1")


@dataclass(frozen=True)
class Sum:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Prod:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Exp:
    base: "Expr"
    exponent: "Expr"


@dataclass(frozen=True)
class TConst:
    """The constant t_z naming an ordinary (possibly non-monotone) polynomial z."""

    poly: Poly


Expr = Union[One, Var, Sum, Prod, Exp, TConst]

ONE = One()


@dataclass(frozen=True)
class Equation:
    lhs: Expr
    rhs: Expr

    def __str__(self) -> str:
        return f"{render_expr(self.lhs)} = {render_expr(self.rhs)}"


def numeral(n: int) -> Expr:
    """The right-nested sum of n ones."""
    if n < 1:
        raise ValueError("numerals start at 1 (there is no empty type)")
    result: Expr = ONE
    for _ in range(n - 1):
        result = Sum(ONE, result)
    return result


def numeral_value(e: Expr) -> int | None:
    """n if ``e`` is literally ``numeral(n)``, else None."""
    n = 1
    while isinstance(e, Sum):
        if not isinstance(e.left, One):
            return None
        e = e.right
        n += 1
    return n if isinstance(e, One) else None


def constant_value(e: Expr) -> int | None:
    """Value of a variable-free expression built from 1 and +, else None."""
    if isinstance(e, One):
        return 1
    if isinstance(e, Sum):
        a, b = constant_value(e.left), constant_value(e.right)
        if a is not None and b is not None:
            return a + b
    return None


def free_vars(e: Expr) -> frozenset:
    out: set = set()
    stack = [e]
    while stack:
        node = stack.pop()
        if isinstance(node, Var):
            out.add(node.index)
        elif isinstance(node, TConst):
            out |= node.poly.variables()
        elif isinstance(node, (Sum, Prod)):
            stack.extend((node.left, node.right))
        elif isinstance(node, Exp):
            stack.extend((node.base, node.exponent))
    return frozenset(out)


def has_tconst(e: Expr) -> bool:
    if isinstance(e, TConst):
        return True
    if isinstance(e, (Sum, Prod)):
        return has_tconst(e.left) or has_tconst(e.right)
    if isinstance(e, Exp):
        return has_tconst(e.base) or has_tconst(e.exponent)
    return False


def in_E(e: Expr) -> bool:
    """True iff ``e`` belongs to the base language (no t_z constants)."""
    return not has_tconst(e)


def size(e: Expr) -> int:
    if isinstance(e, (Sum, Prod)):
        return 1 + size(e.left) + size(e.right)
    if isinstance(e, Exp):
        return 1 + size(e.base) + size(e.exponent)
    return 1


def children(e: Expr) -> tuple:
    if isinstance(e, (Sum, Prod)):
        return (e.left, e.right)
    if isinstance(e, Exp):
        return (e.base, e.exponent)
    return ()


# printing

_SUM, _PROD, _EXP, _ATOM = 1, 2, 3, 4


def render_expr(e: Expr) -> str:
    return _render(e, _SUM)


def _render(e: Expr, ctx: int) -> str:
    if isinstance(e, One):
        return "1"
    if isinstance(e, Var):
        return f"x{e.index}"
    if isinstance(e, TConst):
        return f"t[{render_poly(e.poly)}]"
    n = numeral_value(e)
    if n is not None:
        return str(n)
    if isinstance(e, Sum):
        level, text = _SUM, f"{_render(e.left, _SUM)}+{_render(e.right, _PROD)}"
    elif isinstance(e, Prod):
        level, text = _PROD, f"{_render(e.left, _PROD)}*{_render(e.right, _EXP)}"
    elif isinstance(e, Exp):
        level, text = _EXP, f"{_render(e.base, _ATOM)}^{_render(e.exponent, _EXP)}"
    else:
        raise TypeError(f"not an expression: {e!r}")
    return f"({text})" if level < ctx else text


# parsing


class _ExprParser:
    def __init__(self, stream: TokenStream):
        self.s = stream

    def expr(self) -> Expr:
        result = self.term()
        while self.s.accept("+"):
            result = Sum(result, self.term())
        return result

    def term(self) -> Expr:
        result = self.factor()
        while self.s.accept("*"):
            result = Prod(result, self.factor())
        return result

    def factor(self) -> Expr:
        base = self.atom()
        if self.s.accept("^"):
            return Exp(base, self.factor())
        return base

    def atom(self) -> Expr:
        tok = self.s.next()
        if tok.kind == "num":
            n = int(tok.text)
            if n == 0:
                raise ParseError("numeral 0 is not allowed (no empty type)", tok.pos)
            return numeral(n)
        if tok.kind == "ident":
            if tok.text == "t" and self.s.accept("["):
                p = parse_poly_tokens(self.s)
                self.s.expect("]")
                return TConst(p)
            return Var(var_index(tok))
        if tok.kind == "op" and tok.text == "(":
            inner = self.expr()
            self.s.expect(")")
            return inner
        raise ParseError(f"unexpected {tok.text or 'end of input'!r}", tok.pos)


def parse_expr(text: str) -> Expr:
    stream = TokenStream(tokenize(text))
    e = _ExprParser(stream).expr()
    tok = stream.peek()
    if tok.kind != "eof":
        raise ParseError(f"trailing input {tok.text!r}", tok.pos)
    return e


def parse_equation(text: str) -> Equation:
    """Parse ``lhs = rhs``."""
    if text.count("=") != 1:
        raise ParseError("an equation needs exactly one '='", text.find("=") if "=" in text else len(text))
    left, right = text.split("=")
    try:
        rhs = parse_expr(right)
    except ParseError as err:
        raise ParseError(str(err).rsplit(" at position", 1)[0], err.pos + len(left) + 1) from None
    return Equation(parse_expr(left), rhs)
