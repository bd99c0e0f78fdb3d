import itertools
import random

import pytest
from fuzz import gen_expr, random_point, random_rewrite

from hsiso.corpus import gen_curried_pair, gen_gurevic, gen_martin, gen_wilkie
from hsiso.expr import ONE, Equation, Exp, Prod, Sum, TConst, Var, free_vars, parse_equation, parse_expr, render_expr, size
from hsiso.hsi import Axiom, AxiomId, check_derivation, iter_nodes, steps
from hsiso.poly import Poly, parse_poly, poly_reflect
from hsiso.prover import NormalizationError, derive_t_reflect, normalize, prove_hsi
from hsiso.semantics import eval_expr


def nf(text):
    return render_expr(normalize(parse_expr(text))[0])


def test_normalize_examples():
    assert nf("2^(x+y)") == "2^x1*2^x2"
    assert nf("(x^y)^z") == "x1^(x2*x3)"
    assert nf("1^(x^x)") == "1"
    assert nf("x^1*1") == "x1"


def test_normalize_factors_bases():
    assert normalize(parse_expr("(2*x)^y"))[0] == normalize(parse_expr("2^y*x^y"))[0]
    assert normalize(parse_expr("(x*x+2*x+1)^y"))[0] == normalize(parse_expr("(x+1)^y*(x+1)^y"))[0]


def test_normalize_rejects_tconst():
    with pytest.raises(NormalizationError):
        normalize(parse_expr("t[x]"))


def test_traces_use_only_hsi_axioms():
    _, trace = normalize(gen_curried_pair().rhs)
    assert all(n.id.is_hsi for n in iter_nodes(trace) if isinstance(n, Axiom))


@pytest.mark.parametrize("seed", range(8))
def test_normalize_certificates_and_ceiling(seed):
    rng = random.Random(seed)
    for _ in range(60):
        f = gen_expr(rng, depth=4)
        normal, trace = normalize(f)
        assert check_derivation(trace, Equation(f, normal))
        assert steps(trace) <= 10 * size(f) ** 2
        assert normalize(normal)[0] == normal
        variables = sorted(free_vars(f))
        for coords in itertools.product(range(1, 4), repeat=len(variables)):
            point = dict(zip(variables, coords))
            assert eval_expr(f, point) == eval_expr(normal, point)


def test_prove_examples():
    eq = parse_equation("x*1 = x")
    d = prove_hsi(eq)
    assert check_derivation(d, eq)
    used = {n.id for n in iter_nodes(d) if isinstance(n, Axiom)}
    assert {AxiomId.OneProd, AxiomId.ProdComm} <= used


def test_prove_named_equations():
    for eq in (gen_curried_pair(), gen_martin()):
        d = prove_hsi(eq)
        assert d is not None and check_derivation(d, eq)
    assert prove_hsi(gen_wilkie()) is None
    assert prove_hsi(gen_gurevic(5)) is None
    assert prove_hsi(parse_equation("x^y = y^x")) is None


def test_prove_refl_shortcut():
    eq = parse_equation("x = x")
    assert prove_hsi(eq) == Axiom.of(AxiomId.Refl, f=Var(1))


@pytest.mark.parametrize("seed", range(5))
def test_reproves_random_rewrites(seed):
    rng = random.Random(seed)
    for _ in range(40):
        f = gen_expr(rng, depth=4)
        g = random_rewrite(f, rng, rng.randint(1, 6))
        d = prove_hsi(Equation(f, g))
        assert d is not None, (render_expr(f), render_expr(g))
        assert check_derivation(d, Equation(f, g))
        point = random_point(rng, free_vars(f) | free_vars(g))
        assert eval_expr(f, point) == eval_expr(g, point)


def test_reflect_examples():
    d = derive_t_reflect(parse_poly("x+1"))
    assert check_derivation(d, Equation(TConst(parse_poly("x+1")), Sum(Var(1), ONE)))
    assert derive_t_reflect(Poly.const(1)) == Axiom.of(AxiomId.T_One)
    d = derive_t_reflect(parse_poly("x^2"))
    assert check_derivation(d, Equation(TConst(parse_poly("x^2")), Prod(Var(1), Var(1))))
    assert {AxiomId.T_PolyEq, AxiomId.T_Prod, AxiomId.T_Var} <= {n.id for n in iter_nodes(d) if isinstance(n, Axiom)}


@pytest.mark.parametrize("text", ["3", "2*x*y + y^3 + 4", "x^2*y + 2*x + 1", "5*z^2"])
def test_reflect_general(text):
    p = parse_poly(text)
    d = derive_t_reflect(p)
    assert check_derivation(d, Equation(TConst(p), poly_reflect(p)))


def test_reflect_rejects_negative():
    with pytest.raises(ValueError):
        derive_t_reflect(parse_poly("x - 1"))
    with pytest.raises(ValueError):
        derive_t_reflect(Poly.const(0))


def test_exp_nesting_example():
    assert prove_hsi(Equation(Exp(Exp(Var(1), Var(2)), Var(3)), Exp(Exp(Var(1), Var(3)), Var(2)))) is not None
