import pytest
from fuzz import reify

from hsiso.finite import enumerate_type, eval_term
from hsiso.lam import (
    STAR, App, Case, Fst, Inl, Inr, Lam, Pair, Snd, TypingError, VarT, alpha_eq, beta_normalize, beta_step,
    render_term, subst, term_from_json, term_to_json, typecheck,
)
from hsiso.types import UNIT, Arrow, Product, SumT, numeral_type
from hsiso.witness import numeral_iso_prod, numeral_iso_sum

TWO, THREE = numeral_type(2), numeral_type(3)
x, y = VarT("x"), VarT("y")


def test_typecheck_examples():
    assert typecheck({}, Lam("x", TWO, x)) == Arrow(TWO, TWO)
    apply_star = Lam("x", Arrow(UNIT, THREE), App(x, STAR))
    assert typecheck({}, apply_star) == Arrow(Arrow(UNIT, THREE), THREE)
    with pytest.raises(TypingError) as err:
        typecheck({}, Fst(STAR))
    assert err.value.rule == "fst"


@pytest.mark.parametrize("term,rule", [
    (x, "var"),
    (App(STAR, STAR), "app"),
    (App(Lam("x", TWO, x), STAR), "app"),
    (Inl(STAR, UNIT), "inl"),
    (Inr(STAR, SumT(UNIT, TWO)), "inr"),
    (Case(STAR, "a", STAR, "b", STAR), "case"),
    (Case(Inl(STAR, TWO), "a", STAR, "b", Pair(STAR, STAR)), "case"),
    (Snd(Lam("x", UNIT, x)), "snd"),
])
def test_typing_errors_name_the_rule(term, rule):
    with pytest.raises(TypingError) as err:
        typecheck({}, term)
    assert err.value.rule == rule


def test_context_shadowing():
    assert typecheck({"x": UNIT}, Lam("x", TWO, x)) == Arrow(TWO, TWO)
    assert typecheck({"x": UNIT}, x) == UNIT


def test_beta_examples():
    assert beta_step(App(Lam("x", UNIT, x), STAR)) == STAR
    assert beta_step(Fst(Pair(STAR, STAR))) == STAR
    assert beta_step(Lam("x", UNIT, x)) is None
    assert beta_step(Case(Inr(STAR, TWO), "a", Inl(VarT("a"), TWO), "b", Inr(VarT("b"), TWO))) == Inr(STAR, TWO)


def test_beta_is_leftmost_innermost():
    inner = App(Lam("y", UNIT, y), STAR)
    t = App(Lam("x", UNIT, Pair(x, x)), inner)
    assert beta_step(t) == App(Lam("x", UNIT, Pair(x, x)), STAR)


def test_substitution_avoids_capture():
    t = Lam("y", UNIT, x)
    out = subst(t, "x", y)
    assert isinstance(out, Lam) and out.name != "y"
    assert alpha_eq(out, Lam("z", UNIT, y))
    assert not alpha_eq(out, Lam("y", UNIT, y))
    # bound occurrences are left alone
    assert subst(Lam("x", UNIT, x), "x", STAR) == Lam("x", UNIT, x)


def test_alpha_eq():
    assert alpha_eq(Lam("a", TWO, VarT("a")), Lam("b", TWO, VarT("b")))
    assert not alpha_eq(Lam("a", TWO, VarT("a")), Lam("b", THREE, VarT("b")))
    c1 = Case(x, "a", VarT("a"), "b", VarT("b"))
    c2 = Case(x, "u", VarT("u"), "v", VarT("v"))
    assert alpha_eq(c1, c2)
    assert not alpha_eq(c1, Case(y, "u", VarT("u"), "v", VarT("v")))


def test_printer():
    swap = Lam("x", TWO, Case(x, "a", Inr(VarT("a"), TWO), "b", Inl(VarT("b"), TWO)))
    assert render_term(swap, ascriptions=False) == "\\x. case x of inl a -> inr a | inr b -> inl b"
    assert render_term(Pair(Fst(x), App(App(x, y), STAR))) == "<fst x,x y *>"
    assert render_term(App(x, App(y, STAR))) == "x (y *)"
    assert render_term(Lam("x", Arrow(TWO, UNIT), x)) == "\\x:1 + 1 -> 1. x"


def test_json_roundtrip():
    w = numeral_iso_prod(2, 3)
    for t in (w.forward, w.backward):
        assert term_from_json(term_to_json(t)) == t


def _witness_terms():
    for k1, k2 in [(1, 2), (2, 2), (3, 2), (2, 3)]:
        for w in (numeral_iso_sum(k1, k2), numeral_iso_prod(k1, k2)):
            yield w, w.source_type


@pytest.mark.parametrize("case", range(8))
def test_beta_preserves_type_and_denotation(case):
    w, src = list(_witness_terms())[case]
    for v in enumerate_type(src):
        t = App(w.backward, App(w.forward, reify(v, src)))
        ty, value = typecheck({}, t), eval_term(t)
        assert value == v
        for _ in range(10_000):
            nxt = beta_step(t)
            if nxt is None:
                break
            assert typecheck({}, nxt) == ty
            assert eval_term(nxt) == value
            t = nxt
        assert beta_step(t) is None
        assert eval_term(beta_normalize(t)) == v


@pytest.mark.parametrize("ty", [Arrow(TWO, TWO), Arrow(THREE, TWO), Arrow(Product(TWO, TWO), TWO),
                                Arrow(UNIT, THREE), Arrow(TWO, Arrow(TWO, TWO))])
def test_eta_for_functions(ty):
    for f in enumerate_type(ty):
        m = reify(f, ty)
        assert eval_term(m) == f
        assert eval_term(Lam("z", ty.domain, App(m, VarT("z")))) == eval_term(m)
