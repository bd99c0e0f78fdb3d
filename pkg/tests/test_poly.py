import random

import pytest
import sympy

from hsiso._lex import ParseError
from hsiso.expr import One, Prod, Sum, Var, numeral
from hsiso.poly import (
    CounterexampleAt, Poly, PositiveUpTo, parse_poly, poly_add, poly_eq, poly_eval, poly_mul, poly_positivity,
    poly_reflect, poly_sub, render_poly,
)

SYMS = sympy.symbols("x1:5")


def to_sympy(p: Poly):
    return sum((c * sympy.prod([SYMS[v - 1] ** e for v, e in m]) for m, c in p.terms), sympy.Integer(0))


def random_poly(rng, nvars=3, terms=4, coeff=5, degree=3):
    p = Poly.const(0)
    for _ in range(terms):
        m = Poly.const(rng.randint(-coeff, coeff))
        for v in range(1, nvars + 1):
            m = m * Poly.var(v) ** rng.randint(0, degree)
        p = p + m
    return p


def test_parse_and_render_examples():
    assert render_poly(parse_poly("x1^2 - x1 + 1")) == "x1^2 - x1 + 1"
    assert render_poly(parse_poly("x + x")) == "2*x1"
    assert parse_poly("(x+1)*(x-1)+1") == parse_poly("x^2")


def test_parse_errors():
    with pytest.raises(ParseError):
        parse_poly("x^y")
    with pytest.raises(ParseError):
        parse_poly("x +")


def test_zero_coefficients_vanish():
    assert (Poly.var(1) - Poly.var(1)).is_zero()
    assert Poly({((1, 1),): 0}).terms == ()


@pytest.mark.parametrize("seed", range(40))
def test_ring_operations_against_sympy(seed):
    rng = random.Random(seed)
    a, b = random_poly(rng), random_poly(rng)
    assert sympy.expand(to_sympy(poly_add(a, b)) - (to_sympy(a) + to_sympy(b))) == 0
    assert sympy.expand(to_sympy(poly_sub(a, b)) - (to_sympy(a) - to_sympy(b))) == 0
    assert sympy.expand(to_sympy(poly_mul(a, b)) - to_sympy(a) * to_sympy(b)) == 0


@pytest.mark.parametrize("seed", range(20))
def test_ring_laws(seed):
    rng = random.Random(1000 + seed)
    a, b, c = (random_poly(rng, terms=3) for _ in range(3))
    assert a + b == b + a
    assert a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == Poly.const(0)
    assert a * 1 == a


@pytest.mark.parametrize("seed", range(20))
def test_evaluation_is_a_homomorphism(seed):
    rng = random.Random(2000 + seed)
    a, b = random_poly(rng), random_poly(rng)
    point = {v: rng.randint(-4, 6) for v in range(1, 4)}
    assert poly_eval(a + b, point) == poly_eval(a, point) + poly_eval(b, point)
    assert poly_eval(a * b, point) == poly_eval(a, point) * poly_eval(b, point)
    subs = {SYMS[v - 1]: k for v, k in point.items()}
    assert poly_eval(a, point) == to_sympy(a).subs(subs)


def test_poly_eq_is_canonical():
    assert poly_eq(parse_poly("(x+y)^2"), parse_poly("x^2 + 2*x*y + y^2"))
    assert not poly_eq(parse_poly("x"), parse_poly("y"))


def test_eval_missing_variable():
    with pytest.raises(KeyError):
        poly_eval(parse_poly("x + y"), {1: 2})


def test_positivity():
    assert poly_positivity(parse_poly("x^2 - x + 1"), 5) == PositiveUpTo(5)
    verdict = poly_positivity(parse_poly("x - 2"), 5)
    assert isinstance(verdict, CounterexampleAt)
    assert verdict.point == {1: 1} and verdict.value == -1


def test_reflect_shapes():
    assert poly_reflect(Poly.const(1)) == One()
    assert poly_reflect(parse_poly("x + 1")) == Sum(Var(1), One())
    assert poly_reflect(parse_poly("2*x")) == Prod(numeral(2), Var(1))
    assert poly_reflect(parse_poly("x^2")) == Prod(Var(1), Var(1))


def test_reflect_rejects_negative_coefficients():
    with pytest.raises(ValueError):
        poly_reflect(parse_poly("x - 1"))
