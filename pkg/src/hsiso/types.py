"""Types of the simply typed lambda calculus with unit, sums and products, and
the translation of expressions into types."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Union

from .expr import Exp, Expr, One, Prod, Sum, TConst, Var, render_expr
from .poly import poly_eval


@dataclass(frozen=True)
class Unit:
    pass


@dataclass(frozen=True)
class Base:
    index: int


@dataclass(frozen=True)
class Arrow:
    domain: "Type"
    codomain: "Type"


@dataclass(frozen=True)
class Product:
    left: "Type"
    right: "Type"


@dataclass(frozen=True)
class SumT:
    left: "Type"
    right: "Type"


Type = Union[Unit, Base, Arrow, Product, SumT]
UNIT = Unit()

# variable index -> size k of the numeral type interpreting it
Env = Mapping[int, int]


class InterpretationError(ValueError):
    pass


def typeof(f: Expr) -> Type:
    """The type of an expression: g^f becomes f -> g, products and sums map to themselves."""
    if isinstance(f, One):
        return UNIT
    if isinstance(f, Var):
        return Base(f.index)
    if isinstance(f, Sum):
        return SumT(typeof(f.left), typeof(f.right))
    if isinstance(f, Prod):
        return Product(typeof(f.left), typeof(f.right))
    if isinstance(f, Exp):
        return Arrow(typeof(f.exponent), typeof(f.base))
    if isinstance(f, TConst):
        raise InterpretationError(f"{render_expr(f)} has no type without an environment")
    raise TypeError(f"not an expression: {f!r}")


_numerals: dict = {1: UNIT}


def numeral_type(k: int) -> Type:
    """1 + (1 + (... + 1)) with k unit summands."""
    if k < 1:
        raise ValueError("numeral types start at 1")
    if k not in _numerals:
        t = UNIT
        for _ in range(k - 1):
            t = SumT(UNIT, t)
        _numerals[k] = t
    return _numerals[k]


def interpret(f: Expr, rho: Env) -> Type:
    """Interpret ``f`` with each variable x_i sent to the numeral type rho[i]."""
    if isinstance(f, One):
        return UNIT
    if isinstance(f, Var):
        if f.index not in rho:
            raise InterpretationError(f"environment does not bind x{f.index}")
        return numeral_type(rho[f.index])
    if isinstance(f, TConst):
        missing = f.poly.variables() - set(rho)
        if missing:
            raise InterpretationError(f"environment does not bind x{min(missing)}")
        k = poly_eval(f.poly, rho)
        if k < 1:
            point = {i: rho[i] for i in sorted(f.poly.variables())}
            raise InterpretationError(f"{render_expr(f)} evaluates to {k} at {point}; t-constants must be positive")
        return numeral_type(k)
    if isinstance(f, Sum):
        return SumT(interpret(f.left, rho), interpret(f.right, rho))
    if isinstance(f, Prod):
        return Product(interpret(f.left, rho), interpret(f.right, rho))
    if isinstance(f, Exp):
        return Arrow(interpret(f.exponent, rho), interpret(f.base, rho))
    raise TypeError(f"not an expression: {f!r}")


def cardinality(t: Type) -> int:
    if isinstance(t, Unit):
        return 1
    if isinstance(t, SumT):
        return cardinality(t.left) + cardinality(t.right)
    if isinstance(t, Product):
        return cardinality(t.left) * cardinality(t.right)
    if isinstance(t, Arrow):
        return cardinality(t.codomain) ** cardinality(t.domain)
    raise ValueError(f"type {render_type(t)} has no finite cardinality")


def numeral_size(t: Type) -> int | None:
    """k if ``t`` is literally numeral_type(k)."""
    k = 1
    while isinstance(t, SumT) and isinstance(t.left, Unit):
        t, k = t.right, k + 1
    return k if isinstance(t, Unit) else None


_ARROW, _PLUS, _TIMES, _ATOM = 1, 2, 3, 4


def render_type(t: Type) -> str:
    return _render(t, _ARROW)


def _render(t: Type, ctx: int) -> str:
    if isinstance(t, Unit):
        return "1"
    if isinstance(t, Base):
        return f"#{t.index}"
    if isinstance(t, Arrow):
        level, text = _ARROW, f"{_render(t.domain, _PLUS)} -> {_render(t.codomain, _ARROW)}"
    elif isinstance(t, SumT):
        level, text = _PLUS, f"{_render(t.left, _PLUS)} + {_render(t.right, _TIMES)}"
    elif isinstance(t, Product):
        level, text = _TIMES, f"{_render(t.left, _TIMES)} * {_render(t.right, _ATOM)}"
    else:
        raise TypeError(f"not a type: {t!r}")
    return f"({text})" if level < ctx else text
