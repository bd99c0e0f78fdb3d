"""Exact evaluation over the positive integers and counterexample search."""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from typing import Mapping, Union

from .expr import Equation, Exp, Expr, One, Prod, Sum, TConst, Var, free_vars, render_expr
from .poly import poly_eval

DEFAULT_DIGIT_GUARD = 10**6
DEFAULT_BOUND = 5


class EvaluationError(ValueError):
    pass


class ValueTooLarge(EvaluationError):
    pass


@dataclass(frozen=True)
class EqualUpTo:
    bound: int
    points_checked: int = 0
    exhaustive: bool = True


@dataclass(frozen=True)
class Counterexample:
    point: dict = field(hash=False)
    lhs_value: int
    rhs_value: int


EqVerdict = Union[EqualUpTo, Counterexample]


def eval_expr(f: Expr, point: Mapping[int, int], digit_guard: int = DEFAULT_DIGIT_GUARD) -> int:
    """Evaluate ``f`` exactly; every variable must be bound to a positive integer."""
    if isinstance(f, One):
        return 1
    if isinstance(f, Var):
        try:
            value = point[f.index]
        except KeyError:
            raise EvaluationError(f"no value bound for x{f.index}") from None
        if value < 1:
            raise EvaluationError(f"x{f.index} = {value} is not a positive integer")
        return value
    if isinstance(f, Sum):
        return eval_expr(f.left, point, digit_guard) + eval_expr(f.right, point, digit_guard)
    if isinstance(f, Prod):
        return eval_expr(f.left, point, digit_guard) * eval_expr(f.right, point, digit_guard)
    if isinstance(f, Exp):
        base = eval_expr(f.base, point, digit_guard)
        if base == 1:
            return 1
        exponent = eval_expr(f.exponent, point, digit_guard)
        # log10(base^exponent) estimated from the bit length; stays an upper bound
        if exponent * base.bit_length() * math.log10(2) > digit_guard + 1:
            raise ValueTooLarge(
                f"{render_expr(f)} has more than {digit_guard} digits at {dict(point)}"
            )
        return base**exponent
    if isinstance(f, TConst):
        try:
            value = poly_eval(f.poly, point)
        except KeyError as err:
            raise EvaluationError(err.args[0]) from None
        if value < 1:
            raise EvaluationError(f"{render_expr(f)} evaluates to {value}; t-constants must be positive")
        return value
    raise TypeError(f"not an expression: {f!r}")


def equation_vars(eq: Equation) -> list:
    return sorted(free_vars(eq.lhs) | free_vars(eq.rhs))


def _compare(eq: Equation, point: dict, digit_guard: int) -> Counterexample | None:
    try:
        left = eval_expr(eq.lhs, point, digit_guard)
    except EvaluationError as err:
        raise EvaluationError(f"left-hand side at {point}: {err}") from err
    try:
        right = eval_expr(eq.rhs, point, digit_guard)
    except EvaluationError as err:
        raise EvaluationError(f"right-hand side at {point}: {err}") from err
    if left != right:
        return Counterexample(point, left, right)
    return None


def check_equation(eq: Equation, bound: int = DEFAULT_BOUND, digit_guard: int = DEFAULT_DIGIT_GUARD) -> EqVerdict:
    """Compare both sides on every point of {1..bound}^vars in lexicographic order.

    Only equality up to ``bound`` is ever reported; the first differing point wins.
    """
    if bound < 1:
        raise ValueError("bound must be at least 1")
    variables = equation_vars(eq)
    checked = 0
    for coords in itertools.product(range(1, bound + 1), repeat=len(variables)):
        point = dict(zip(variables, coords))
        checked += 1
        found = _compare(eq, point, digit_guard)
        if found is not None:
            return found
    return EqualUpTo(bound, checked)


def random_probe(
    eq: Equation, trials: int, max_coordinate: int, seed: int = 0, digit_guard: int = DEFAULT_DIGIT_GUARD
) -> EqVerdict:
    """Compare both sides at ``trials`` seeded random points in {1..max_coordinate}^vars."""
    if trials < 1:
        raise ValueError("trials must be at least 1")
    if max_coordinate < 1:
        raise ValueError("max_coordinate must be at least 1")
    rng = random.Random(seed)
    variables = equation_vars(eq)
    for _ in range(trials):
        point = {v: rng.randint(1, max_coordinate) for v in variables}
        found = _compare(eq, point, digit_guard)
        if found is not None:
            return found
    return EqualUpTo(max_coordinate, trials, exhaustive=False)


def verdict_to_json(v: EqVerdict) -> dict:
    if isinstance(v, EqualUpTo):
        return {"verdict": "equal_up_to", "bound": v.bound, "points_checked": v.points_checked,
                "exhaustive": v.exhaustive}
    return {
        "verdict": "counterexample",
        "point": {f"x{i}": k for i, k in sorted(v.point.items())},
        # decimal strings: values routinely exceed JSON number precision
        "lhs_value": str(v.lhs_value),
        "rhs_value": str(v.rhs_value),
    }
