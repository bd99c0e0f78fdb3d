import itertools

import pytest

from hsiso.corpus import corpus, default_rhos
from hsiso.expr import Sum, TConst, Var, parse_equation
from hsiso.finite import enumerate_type
from hsiso.hsi import Axiom, AxiomId, Sym, Trans, check_derivation
from hsiso.lam import App, Inl, Inr, Lam, Pair, VarT, alpha_eq, typecheck
from hsiso.poly import parse_poly
from hsiso.prover import derive_t_reflect, prove_hsi
from hsiso.types import UNIT, Arrow, Product, SumT, interpret, numeral_type
from hsiso.witness import (
    WitnessError, check_roundtrip, compile_witness, identity_pair, numeral_iso_prod, numeral_iso_sum,
)

x1, x2, x3 = Var(1), Var(2), Var(3)
TWO, THREE = numeral_type(2), numeral_type(3)


def test_exp_sum_forward_term():
    d = Axiom.of(AxiomId.ExpSum, f=x1, g=x2, h=x3)
    w = compile_witness(d, {1: 2, 2: 1, 3: 2})
    dom = SumT(UNIT, TWO)
    x, y = VarT("x"), VarT("y")
    expected = Lam("x", Arrow(dom, TWO),
                   Pair(Lam("y", UNIT, App(x, Inl(y, dom))), Lam("y", TWO, App(x, Inr(y, dom)))))
    assert alpha_eq(w.forward, expected)
    assert check_roundtrip(w)


def test_refl_is_identity():
    w = compile_witness(Axiom.of(AxiomId.Refl, f=x1), {1: 2})
    assert w == identity_pair(TWO)


def test_reflection_witness():
    d = derive_t_reflect(parse_poly("x+1"))
    w = compile_witness(d, {1: 2})
    assert w.source_type == THREE and w.target_type == SumT(TWO, UNIT)
    assert check_roundtrip(w)


def test_numeral_iso_examples():
    assert numeral_iso_sum(1, 1) == identity_pair(TWO)
    w = numeral_iso_sum(2, 1)
    assert (w.source_type, w.target_type) == (THREE, SumT(TWO, UNIT))
    assert check_roundtrip(w)
    w = numeral_iso_prod(2, 3)
    assert (w.source_type, w.target_type) == (numeral_type(6), Product(TWO, THREE))
    assert check_roundtrip(w)


@pytest.mark.parametrize("k1,k2", list(itertools.product(range(1, 6), repeat=2)))
def test_numeral_isos_roundtrip(k1, k2):
    for w in (numeral_iso_sum(k1, k2), numeral_iso_prod(k1, k2)):
        assert check_roundtrip(w)


def test_sum_iso_preserves_order():
    # the i-th element of k1+k2 goes to the i-th element of the sum, left block first
    from hsiso.finite import eval_term

    w = numeral_iso_sum(2, 3)
    fwd = eval_term(w.forward)
    assert [fwd(v) for v in enumerate_type(w.source_type)] == list(enumerate_type(w.target_type))


def test_sym_swaps_and_trans_composes():
    d = Axiom.of(AxiomId.SumComm, f=x1, g=x2)
    rho = {1: 2, 2: 3}
    w, ws = compile_witness(d, rho), compile_witness(Sym(d), rho)
    assert (ws.forward, ws.backward) == (w.backward, w.forward)
    round_trip = Trans(d, Sym(d))
    wt = compile_witness(round_trip, rho)
    assert wt.source_type == wt.target_type == interpret(Sum(x1, x2), rho)
    assert check_roundtrip(wt)


def test_typechecks_at_interpreted_types():
    eq = parse_equation("(x*y)^z = x^z*y^z")
    w = compile_witness(prove_hsi(eq), {1: 2, 2: 1, 3: 2})
    assert typecheck({}, w.forward) == Arrow(interpret(eq.lhs, {1: 2, 2: 1, 3: 2}), interpret(eq.rhs, {1: 2, 2: 1, 3: 2}))


def test_compile_errors():
    bad = Trans(Axiom.of(AxiomId.Refl, f=x1), Axiom.of(AxiomId.Refl, f=x2))
    with pytest.raises(WitnessError):
        compile_witness(bad, {1: 1, 2: 1})
    with pytest.raises(WitnessError):
        compile_witness(Axiom.of(AxiomId.Refl, f=x1), {1: 0})


def test_nonpositive_tconst_at_rho():
    # 9 - x passes the sampled positivity check on 1..8 but is negative at 10
    z = TConst(parse_poly("9 - x"))
    d = Axiom.of(AxiomId.T_Sum, z=z, u=TConst(parse_poly("1")))
    assert check_derivation(d)
    w = compile_witness(d, {1: 4})
    assert (w.source_type, w.target_type) == (numeral_type(6), SumT(numeral_type(5), UNIT))
    assert check_roundtrip(w)
    with pytest.raises(WitnessError, match="evaluates to -1"):
        compile_witness(d, {1: 10})


def test_witness_soundness_over_corpus():
    # every proved corpus entry at every size assignment in {1,2,3} that fits the guard
    checked = 0
    for entry in corpus():
        d = prove_hsi(entry.equation)
        if d is None:
            continue
        for rho in default_rhos(entry.equation, sizes=(1, 2, 3), guard=4096):
            w = compile_witness(d, rho)
            assert check_roundtrip(w), (entry.name, rho)
            checked += 1
    assert checked > 100
