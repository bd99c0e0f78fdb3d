import pytest

from hsiso.corpus import (
    CorpusEntry, Expectation, SoundnessBreach, check_entry, corpus, default_rhos, fits_guard, gen_curried_pair,
    gen_gurevic, gen_martin, gen_wilkie, run_corpus, run_pipeline, wilkie_polys,
)
from hsiso.expr import parse_equation, parse_expr
from hsiso.fragments import classify
from hsiso.poly import parse_poly, poly_eval
from hsiso.prover import prove_hsi
from hsiso.semantics import Counterexample, EqualUpTo, check_equation, eval_expr


def test_wilkie_sides_agree_at_ones():
    eq = gen_wilkie()
    assert eval_expr(eq.lhs, {1: 1, 2: 1}) == 25
    assert eval_expr(eq.rhs, {1: 1, 2: 1}) == 25


def same_poly(e, text):
    # a one-variable polynomial of degree < 9 is fixed by its values at 1..9
    p = parse_poly(text)
    return all(eval_expr(e, {1: k}) == poly_eval(p, {1: k}) for k in range(1, 10))


def test_wilkie_coefficients():
    A, B, C, D = wilkie_polys()
    for got, want in zip((A, B, C, D), ("1+x", "1+x+x^2", "1+x^3", "1+x^2+x^4")):
        assert same_poly(got, want)


def test_gurevic_coefficients():
    eq = gen_gurevic(5)
    # B_5 and D_5 sit inside the left factor of the right-hand side
    base = eq.rhs.left.base
    B = base.right.base
    D = eq.rhs.right.base.right.base
    assert same_poly(B, "1+x+x^2+x^3+x^4")
    assert same_poly(D, "1+x^2+x^4+x^6+x^8")


@pytest.mark.parametrize("n", [4, 3, 1, -5, 6])
def test_gurevic_rejects_bad_n(n):
    with pytest.raises(ValueError):
        gen_gurevic(n)


def test_gurevic_5_equal_up_to_3():
    v = check_equation(gen_gurevic(5), 3)
    assert v == EqualUpTo(3, 3)


@pytest.mark.parametrize("n", [5, 7, 9])
def test_gurevic_bound_4_needs_big_integers(n):
    eq = gen_gurevic(n)
    assert check_equation(eq, 4) == EqualUpTo(4, 4)
    assert eval_expr(eq.rhs, {1: 4}) > 10**300


def test_martin_at_ones():
    eq = gen_martin()
    ones = {i: 1 for i in range(1, 5)}
    assert eval_expr(eq.lhs, ones) == eval_expr(eq.rhs, ones) == 4


def test_curried_pair_proved_and_classified():
    eq = gen_curried_pair()
    assert prove_hsi(eq) is not None
    assert classify(eq.lhs).in_L
    assert not classify(eq.rhs).in_L


def test_generators_are_literal():
    assert gen_martin() == parse_equation("(x^z+x^z)^w*(y^w+y^w)^z = (x^w+x^w)^z*(y^z+y^z)^w")
    # the generator nests sums to the right, the parser to the left
    literal = parse_expr("((1+x)^x+(1+x+x^2)^x)^y*((1+x^3)^y+(1+x^2+x^4)^y)^x")
    for a in range(1, 4):
        for b in range(1, 4):
            assert eval_expr(gen_wilkie().lhs, {1: a, 2: b}) == eval_expr(literal, {1: a, 2: b})


def test_pipeline_commutativity():
    report = run_pipeline(parse_equation("x*y = y*x"), bound=3)
    assert report.derivation is not None
    assert report.verdict == EqualUpTo(3, 9)
    assert len(report.witnesses) == 4
    assert all(r.roundtrip for r in report.witnesses)
    assert report.notes == ["proved by normalization"]


def test_pipeline_wilkie():
    report = run_pipeline(gen_wilkie(), bound=4)
    assert report.verdict == EqualUpTo(4, 16)
    assert report.derivation is None and not report.witnesses
    assert "outside ℒ" in report.notes[0]
    assert report.to_json()["proved"] is False


def test_pipeline_counterexample():
    report = run_pipeline(parse_equation("x = x+1"), bound=3)
    assert isinstance(report.verdict, Counterexample)
    assert report.verdict.point == {1: 1}
    assert (report.verdict.lhs_value, report.verdict.rhs_value) == (1, 2)
    assert report.notes == ["refuted by evaluation"]


def test_pipeline_explicit_rho():
    report = run_pipeline(parse_equation("x^(y+z) = x^y*x^z"), rhos=[{1: 3, 2: 2, 3: 1}])
    assert [r.roundtrip for r in report.witnesses] == [True]


def test_pipeline_skips_rho_beyond_guard():
    eq = parse_equation("x^(y+z) = x^y*x^z")
    report = run_pipeline(eq, rhos=[{1: 3, 2: 3, 3: 3}], guard=100)
    assert report.witnesses[0].roundtrip is None
    assert report.witnesses[0].note.startswith("skipped")


def test_default_rhos_respect_guard():
    eq = gen_curried_pair()
    rhos = default_rhos(eq)
    assert {1: 1, 2: 1, 3: 1} in rhos
    assert all(fits_guard(eq, r) for r in rhos)
    assert {1: 2, 2: 2, 3: 2} not in rhos
    assert len(default_rhos(parse_equation("x*y = y*x"))) == 4


def test_breach_is_raised(monkeypatch):
    import hsiso.corpus as mod

    real = prove_hsi(parse_equation("x*y = y*x"))
    monkeypatch.setattr(mod, "prove_hsi", lambda eq: real)
    monkeypatch.setattr(mod, "check_derivation", lambda d, eq: True)
    with pytest.raises(SoundnessBreach):
        run_pipeline(parse_equation("x = x+1"))


def test_failed_expectation_is_reported():
    entry = CorpusEntry("wrong", parse_equation("x*y = y*x"), Expectation(False, False, True, True))
    outcome = check_entry(entry)
    assert not outcome.ok
    assert len(outcome.failures) == 2


def test_corpus_names_sorted_and_unique():
    names = [e.name for e in corpus()]
    assert names == sorted(names)
    assert len(set(names)) == len(names)
    assert sum(n.startswith("axiom-") for n in names) == 12


def test_corpus_runner_meets_every_expectation():
    outcomes = run_corpus()
    assert [o.entry.name for o in outcomes] == [e.name for e in corpus()]
    for o in outcomes:
        assert o.ok, (o.entry.name, o.failures)
        if o.report.derivation is not None:
            # every proved entry verifies at the whole {1,2} grid within the guard
            assert o.report.witnesses
            assert all(r.roundtrip for r in o.report.witnesses), o.entry.name
