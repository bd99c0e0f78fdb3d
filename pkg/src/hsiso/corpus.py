"""Named equations and the end-to-end pipeline: classify, refute or prove,
compile witnesses, verify them."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .expr import ONE, Equation, Exp, Expr, Prod, Sum, Var, free_vars, numeral, parse_expr, render_expr
from .finite import DEFAULT_GUARD, GuardExceeded, capped_cardinality
from .fragments import FragmentReport, classify
from .hsi import Axiom, AxiomId, Derivation, HSI_AXIOMS, METAVARS, check_derivation, derivation_to_json
from .prover import prove_hsi
from .semantics import Counterexample, EqVerdict, check_equation, verdict_to_json
from .types import interpret
from .witness import WitnessPair, check_roundtrip, compile_witness

X, Y = Var(1), Var(2)


class SoundnessBreach(RuntimeError):
    """A certificate was produced for an equation refuted by evaluation."""


def _psum(*terms: Expr) -> Expr:
    out = terms[-1]
    for t in reversed(terms[:-1]):
        out = Sum(t, out)
    return out


def _power(base: Expr, k: int) -> Expr:
    return base if k == 1 else Exp(base, numeral(k))


def _poly_in(x: Expr, degrees: list) -> Expr:
    """1 + x^d1 + x^d2 + ... for the listed positive degrees."""
    return _psum(ONE, *(_power(x, d) for d in degrees))


def _wilkie_shape(A: Expr, B: Expr, C: Expr, D: Expr, e1: Expr, e2: Expr) -> Equation:
    lhs = Prod(Exp(Sum(Exp(A, e1), Exp(B, e1)), e2), Exp(Sum(Exp(C, e2), Exp(D, e2)), e1))
    rhs = Prod(Exp(Sum(Exp(A, e2), Exp(B, e2)), e1), Exp(Sum(Exp(C, e1), Exp(D, e1)), e2))
    return Equation(lhs, rhs)


def wilkie_polys(d_degrees: tuple = (2, 4)) -> tuple:
    A = _poly_in(X, [1])
    B = _poly_in(X, [1, 2])
    C = _poly_in(X, [3])
    D = _poly_in(X, list(d_degrees))
    return A, B, C, D


def gen_wilkie(d_degrees: tuple = (2, 4)) -> Equation:
    """(A^x+B^x)^y (C^y+D^y)^x = (A^y+B^y)^x (C^x+D^x)^y with A=1+x, B=1+x+x^2,
    C=1+x^3, D=1+x^2+x^4; ``d_degrees`` replaces the degrees of D for mutants."""
    return _wilkie_shape(*wilkie_polys(d_degrees), X, Y)


def gen_gurevic(n: int) -> Equation:
    """The one-variable family G_n for odd n > 3."""
    if not isinstance(n, int) or n <= 3 or n % 2 == 0:
        raise ValueError(f"G_n needs an odd n > 3, got {n}")
    A = _poly_in(X, [1])
    B = _poly_in(X, list(range(1, n)))
    C = _poly_in(X, [n])
    D = _poly_in(X, [2 * i for i in range(1, n)])
    two_x = Exp(numeral(2), X)
    return _wilkie_shape(A, B, C, D, two_x, X)


def gen_martin() -> Equation:
    x, y, z, w = (Var(i) for i in range(1, 5))
    lhs = Prod(Exp(Sum(Exp(x, z), Exp(x, z)), w), Exp(Sum(Exp(y, w), Exp(y, w)), z))
    rhs = Prod(Exp(Sum(Exp(x, w), Exp(x, w)), z), Exp(Sum(Exp(y, z), Exp(y, z)), w))
    return Equation(lhs, rhs)


def gen_curried_pair() -> Equation:
    """Uncurried (y+z)^(x(y+z)(y+z)^(x(y+z))) against its curried form, x=x1, y=x2, z=x3."""
    x, s = Var(1), Sum(Var(2), Var(3))
    uncurried = Exp(s, Prod(Prod(x, s), Exp(s, Prod(x, s))))
    curried = Exp(Exp(Exp(s, x), Exp(Exp(s, s), x)), s)
    return Equation(uncurried, curried)


# corpus


@dataclass(frozen=True)
class Expectation:
    true_in_Nplus: bool
    hsi_provable_by_normalization: bool
    in_L_lhs: bool
    in_L_rhs: bool


@dataclass(frozen=True)
class CorpusEntry:
    name: str
    equation: Equation
    expected: Expectation
    bound: int = 3


def axiom_instance(ax: AxiomId) -> Equation:
    variables = {"f": Var(1), "g": Var(2), "h": Var(3)}
    return Axiom.of(ax, **{m: variables[m] for m in METAVARS[ax]}).conclusion


def corpus() -> list:
    entries = [
        # (x1^x2)^x3 has a base with a variable-based exponential, so it is outside L
        CorpusEntry(f"axiom-{ax.value}", axiom_instance(ax),
                    Expectation(True, True, ax is not AxiomId.ExpExp, True))
        for ax in HSI_AXIOMS
    ]
    entries += [
        CorpusEntry("curried-pair", gen_curried_pair(), Expectation(True, True, True, False), bound=2),
        CorpusEntry("martin", gen_martin(), Expectation(True, True, False, False)),
        CorpusEntry("wilkie", gen_wilkie(), Expectation(True, False, False, False), bound=4),
        CorpusEntry("wilkie-mutant", gen_wilkie((2, 3)), Expectation(False, False, False, False)),
        CorpusEntry("gurevic-5", gen_gurevic(5), Expectation(True, False, False, False), bound=3),
        CorpusEntry("exp-not-comm", Equation(parse_expr("x^y"), parse_expr("y^x")),
                    Expectation(False, False, True, True)),
    ]
    return sorted(entries, key=lambda e: e.name)


# pipeline


@dataclass
class RhoResult:
    rho: dict
    witness: WitnessPair | None
    roundtrip: bool | None
    note: str = ""


@dataclass
class PipelineReport:
    equation: Equation
    lhs_fragments: FragmentReport
    rhs_fragments: FragmentReport
    verdict: EqVerdict
    derivation: Derivation | None
    witnesses: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    @property
    def consistent(self) -> bool:
        return all(r.roundtrip is not False for r in self.witnesses)

    def to_json(self) -> dict:
        return {
            "equation": str(self.equation),
            "lhs_fragments": self.lhs_fragments.to_json(),
            "rhs_fragments": self.rhs_fragments.to_json(),
            "verdict": verdict_to_json(self.verdict),
            "proved": self.derivation is not None,
            "derivation": derivation_to_json(self.derivation) if self.derivation is not None else None,
            "witnesses": [
                {"rho": {f"x{i}": k for i, k in sorted(r.rho.items())}, "roundtrip": r.roundtrip, "note": r.note}
                for r in self.witnesses
            ],
            "notes": list(self.notes),
        }


def default_rhos(eq: Equation, sizes=(1, 2), guard: int = DEFAULT_GUARD) -> list:
    """Every assignment of ``sizes`` to the variables whose types fit the guard."""
    variables = sorted(free_vars(eq.lhs) | free_vars(eq.rhs))
    out = []
    for ks in itertools.product(sizes, repeat=len(variables)):
        rho = dict(zip(variables, ks))
        if fits_guard(eq, rho, guard):
            out.append(rho)
    return out


def fits_guard(eq: Equation, rho: dict, guard: int = DEFAULT_GUARD) -> bool:
    # both sides and, inside them, every function space the evaluator tabulates
    return all(_max_domain(side, rho, guard) <= guard for side in (eq.lhs, eq.rhs))


def _max_domain(e: Expr, rho: dict, guard: int) -> int:
    size = capped_cardinality(interpret(e, rho), guard)
    if isinstance(e, (Sum, Prod)):
        return max(size, _max_domain(e.left, rho, guard), _max_domain(e.right, rho, guard))
    if isinstance(e, Exp):
        return max(size, _max_domain(e.base, rho, guard), _max_domain(e.exponent, rho, guard))
    return size


def run_pipeline(eq: Equation, bound: int = 3, rhos: list | None = None, guard: int = DEFAULT_GUARD) -> PipelineReport:
    lhs_rep, rhs_rep = classify(eq.lhs), classify(eq.rhs)
    verdict = check_equation(eq, bound)
    derivation = prove_hsi(eq)
    report = PipelineReport(eq, lhs_rep, rhs_rep, verdict, derivation)
    if derivation is not None:
        result = check_derivation(derivation, eq)
        if not result:
            raise SoundnessBreach("prover returned a certificate that does not check: " + "; ".join(result.trace))
        if isinstance(verdict, Counterexample):
            raise SoundnessBreach(
                f"certificate for {eq} but the sides differ at {verdict.point}: "
                f"{verdict.lhs_value} vs {verdict.rhs_value}"
            )
        for rho in (default_rhos(eq, guard=guard) if rhos is None else rhos):
            try:
                w = compile_witness(derivation, rho, checked=True)
                ok = check_roundtrip(w, guard)
            except GuardExceeded as err:
                report.witnesses.append(RhoResult(rho, None, None, f"skipped: {err}"))
                continue
            report.witnesses.append(RhoResult(rho, w, ok))
            if not ok:
                raise SoundnessBreach(f"witness for {eq} at {rho} is not an isomorphism")
        report.notes.append("proved by normalization")
    elif isinstance(verdict, Counterexample):
        report.notes.append("refuted by evaluation")
    else:
        note = f"equal up to bound {bound}; no certificate found by normalization"
        if not (lhs_rep.in_L and rhs_rep.in_L):
            note += "; outside ℒ, so underivability in HSI is possible"
        report.notes.append(note)
    return report


@dataclass
class EntryOutcome:
    entry: CorpusEntry
    report: PipelineReport
    failures: list

    @property
    def ok(self) -> bool:
        return not self.failures


def check_entry(entry: CorpusEntry, rhos: list | None = None, guard: int = DEFAULT_GUARD) -> EntryOutcome:
    report = run_pipeline(entry.equation, entry.bound, rhos, guard)
    exp = entry.expected
    failures = []
    if isinstance(report.verdict, Counterexample) == exp.true_in_Nplus:
        failures.append(f"verdict {verdict_to_json(report.verdict)['verdict']} contradicts true_in_Nplus={exp.true_in_Nplus}")
    if (report.derivation is not None) != exp.hsi_provable_by_normalization:
        failures.append(f"provable={report.derivation is not None}, expected {exp.hsi_provable_by_normalization}")
    if report.lhs_fragments.in_L != exp.in_L_lhs:
        failures.append(f"lhs in_L={report.lhs_fragments.in_L}, expected {exp.in_L_lhs}")
    if report.rhs_fragments.in_L != exp.in_L_rhs:
        failures.append(f"rhs in_L={report.rhs_fragments.in_L}, expected {exp.in_L_rhs}")
    return EntryOutcome(entry, report, failures)


def run_corpus(entries: list | None = None, guard: int = DEFAULT_GUARD) -> list:
    """Run every entry (sorted by name) and return the outcomes."""
    entries = corpus() if entries is None else entries
    return [check_entry(e, guard=guard) for e in sorted(entries, key=lambda e: e.name)]


def describe(eq: Equation) -> str:
    return f"{render_expr(eq.lhs)} = {render_expr(eq.rhs)}"
