"""Equational derivations over the high-school identities and their extension
with t-constants for positive ordinary polynomials.

A derivation is a proof tree; its conclusion is computed bottom-up, and
``check_derivation`` is the independent certificate checker.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from functools import cached_property
from typing import Mapping, Union

from .expr import ONE, Equation, Exp, Expr, Prod, Sum, TConst, Var, has_tconst, parse_expr, render_expr
from .poly import CounterexampleAt, Poly, poly_eq, poly_positivity

DEFAULT_POSITIVITY_BOUND = 8


class AxiomId(enum.Enum):
    Refl = "Refl"
    SumComm = "SumComm"
    SumAssoc = "SumAssoc"
    ProdComm = "ProdComm"
    ProdAssoc = "ProdAssoc"
    DistL = "DistL"
    OneProd = "OneProd"
    ExpOne = "ExpOne"
    OneExp = "OneExp"
    ExpSum = "ExpSum"
    ExpProdBase = "ExpProdBase"
    ExpExp = "ExpExp"
    T_One = "T_One"
    T_Var = "T_Var"
    T_Prod = "T_Prod"
    T_Sum = "T_Sum"
    T_PolyEq = "T_PolyEq"

    @property
    def is_hsi(self) -> bool:
        return not self.value.startswith("T_")


HSI_AXIOMS = [a for a in AxiomId if a.is_hsi]
T_AXIOMS = [a for a in AxiomId if not a.is_hsi]


def _hsi_schema(ax: AxiomId, f: Expr | None, g: Expr | None, h: Expr | None) -> tuple:
    if ax is AxiomId.Refl:
        return f, f
    if ax is AxiomId.SumComm:
        return Sum(f, g), Sum(g, f)
    if ax is AxiomId.SumAssoc:
        return Sum(Sum(f, g), h), Sum(f, Sum(g, h))
    if ax is AxiomId.ProdComm:
        return Prod(f, g), Prod(g, f)
    if ax is AxiomId.ProdAssoc:
        return Prod(Prod(f, g), h), Prod(f, Prod(g, h))
    if ax is AxiomId.DistL:
        return Prod(f, Sum(g, h)), Sum(Prod(f, g), Prod(f, h))
    if ax is AxiomId.OneProd:
        return Prod(ONE, f), f
    if ax is AxiomId.ExpOne:
        return Exp(f, ONE), f
    if ax is AxiomId.OneExp:
        return Exp(ONE, f), ONE
    if ax is AxiomId.ExpSum:
        return Exp(f, Sum(g, h)), Prod(Exp(f, g), Exp(f, h))
    if ax is AxiomId.ExpProdBase:
        return Exp(Prod(f, g), h), Prod(Exp(f, h), Exp(g, h))
    if ax is AxiomId.ExpExp:
        return Exp(Exp(f, g), h), Exp(f, Prod(g, h))
    raise ValueError(ax)


METAVARS = {
    AxiomId.Refl: ("f",),
    AxiomId.SumComm: ("f", "g"),
    AxiomId.SumAssoc: ("f", "g", "h"),
    AxiomId.ProdComm: ("f", "g"),
    AxiomId.ProdAssoc: ("f", "g", "h"),
    AxiomId.DistL: ("f", "g", "h"),
    AxiomId.OneProd: ("f",),
    AxiomId.ExpOne: ("f",),
    AxiomId.OneExp: ("f",),
    AxiomId.ExpSum: ("f", "g", "h"),
    AxiomId.ExpProdBase: ("f", "g", "h"),
    AxiomId.ExpExp: ("f", "g", "h"),
    AxiomId.T_One: (),
    AxiomId.T_Var: ("x",),
    AxiomId.T_Prod: ("z", "u"),
    AxiomId.T_Sum: ("z", "u"),
    AxiomId.T_PolyEq: ("z", "u"),
}


class DerivationError(ValueError):
    pass


# proof trees


@dataclass(frozen=True)
class Axiom:
    id: AxiomId
    instantiation: tuple = ()  # sorted (metavariable, Expr) pairs

    @classmethod
    def of(cls, ax: AxiomId, **inst: Expr) -> "Axiom":
        return cls(ax, tuple(sorted(inst.items())))

    @property
    def inst(self) -> dict:
        return dict(self.instantiation)

    @cached_property
    def conclusion(self) -> Equation:
        return _axiom_conclusion(self)


@dataclass(frozen=True)
class Sym:
    premise: "Derivation"

    @cached_property
    def conclusion(self) -> Equation:
        c = self.premise.conclusion
        return Equation(c.rhs, c.lhs)


@dataclass(frozen=True)
class Trans:
    left: "Derivation"
    right: "Derivation"

    @cached_property
    def conclusion(self) -> Equation:
        a, b = self.left.conclusion, self.right.conclusion
        if a.rhs != b.lhs:
            raise DerivationError(
                f"transitivity middle mismatch: {render_expr(a.rhs)} vs {render_expr(b.lhs)}"
            )
        return Equation(a.lhs, b.rhs)


@dataclass(frozen=True)
class CongExp:
    base: "Derivation"
    exponent: "Derivation"

    @cached_property
    def conclusion(self) -> Equation:
        b, e = self.base.conclusion, self.exponent.conclusion
        return Equation(Exp(b.lhs, e.lhs), Exp(b.rhs, e.rhs))


@dataclass(frozen=True)
class CongSum:
    left: "Derivation"
    right: "Derivation"

    @cached_property
    def conclusion(self) -> Equation:
        a, b = self.left.conclusion, self.right.conclusion
        return Equation(Sum(a.lhs, b.lhs), Sum(a.rhs, b.rhs))


@dataclass(frozen=True)
class CongProd:
    left: "Derivation"
    right: "Derivation"

    @cached_property
    def conclusion(self) -> Equation:
        a, b = self.left.conclusion, self.right.conclusion
        return Equation(Prod(a.lhs, b.lhs), Prod(a.rhs, b.rhs))


Derivation = Union[Axiom, Sym, Trans, CongExp, CongSum, CongProd]


def _axiom_conclusion(node: Axiom) -> Equation:
    ax, inst = node.id, node.inst
    wanted = METAVARS[ax]
    if set(inst) != set(wanted):
        raise DerivationError(f"{ax.value} needs metavariables {list(wanted)}, got {sorted(inst)}")
    if ax.is_hsi:
        for name, e in inst.items():
            if has_tconst(e):
                raise DerivationError(f"{ax.value}: {name} := {render_expr(e)} contains a t-constant")
        lhs, rhs = _hsi_schema(ax, inst.get("f"), inst.get("g"), inst.get("h"))
        return Equation(lhs, rhs)
    if ax is AxiomId.T_One:
        return Equation(TConst(Poly.const(1)), ONE)
    if ax is AxiomId.T_Var:
        x = inst["x"]
        if not isinstance(x, Var):
            raise DerivationError(f"T_Var: x := {render_expr(x)} is not a variable")
        return Equation(TConst(Poly.var(x.index)), x)
    z, u = inst["z"], inst["u"]
    for name, e in (("z", z), ("u", u)):
        if not isinstance(e, TConst):
            raise DerivationError(f"{ax.value}: {name} := {render_expr(e)} is not a t-constant")
    if ax is AxiomId.T_Prod:
        return Equation(TConst(z.poly * u.poly), Prod(z, u))
    if ax is AxiomId.T_Sum:
        return Equation(TConst(z.poly + u.poly), Sum(z, u))
    if ax is AxiomId.T_PolyEq:
        if not poly_eq(z.poly, u.poly):
            raise DerivationError(f"T_PolyEq side condition fails: {z.poly} and {u.poly} differ")
        return Equation(z, u)
    raise DerivationError(f"unknown axiom {ax}")


def conclusion(d: Derivation) -> Equation:
    """The equation proved by ``d``; raises DerivationError on ill-formed trees."""
    return d.conclusion


def refl(e: Expr) -> Derivation:
    """Reflexivity, using T_PolyEq for expressions that mention t-constants."""
    if isinstance(e, TConst):
        return Axiom.of(AxiomId.T_PolyEq, z=e, u=e)
    if has_tconst(e):
        if isinstance(e, Sum):
            return CongSum(refl(e.left), refl(e.right))
        if isinstance(e, Prod):
            return CongProd(refl(e.left), refl(e.right))
        return CongExp(refl(e.base), refl(e.exponent))
    return Axiom.of(AxiomId.Refl, f=e)


def is_refl(d: Derivation) -> bool:
    return isinstance(d, Axiom) and d.id is AxiomId.Refl


# checking


@dataclass
class CheckResult:
    ok: bool
    trace: list = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.ok


def iter_nodes(d: Derivation):
    stack = [d]
    while stack:
        node = stack.pop()
        yield node
        if isinstance(node, Sym):
            stack.append(node.premise)
        elif isinstance(node, (Trans, CongSum, CongProd)):
            stack.extend((node.right, node.left))
        elif isinstance(node, CongExp):
            stack.extend((node.exponent, node.base))


def t_constants(d: Derivation) -> set:
    """All t-constants introduced by axioms of ``d``."""
    found = set()
    for node in iter_nodes(d):
        if isinstance(node, Axiom) and not node.id.is_hsi:
            eq = node.conclusion
            found |= _collect_tconsts(eq.lhs) | _collect_tconsts(eq.rhs)
    return found


def _collect_tconsts(e: Expr) -> set:
    if isinstance(e, TConst):
        return {e}
    if isinstance(e, (Sum, Prod)):
        return _collect_tconsts(e.left) | _collect_tconsts(e.right)
    if isinstance(e, Exp):
        return _collect_tconsts(e.base) | _collect_tconsts(e.exponent)
    return set()


def check_derivation(
    d: Derivation,
    expected: Equation | None = None,
    positivity_bound: int = DEFAULT_POSITIVITY_BOUND,
    trust_positive: bool = False,
) -> CheckResult:
    """Check every rule application, the T_PolyEq side conditions and (sampled)
    positivity of the t-constants, then compare the conclusion with ``expected``."""
    trace = []
    try:
        concl = d.conclusion
    except DerivationError as err:
        return CheckResult(False, [f"ill-formed derivation: {err}"])
    except (AttributeError, TypeError) as err:
        return CheckResult(False, [f"malformed derivation tree: {err}"])
    trace.append(f"concludes {concl}")
    if not trust_positive:
        for t in sorted(t_constants(d), key=render_expr):
            verdict = poly_positivity(t.poly, positivity_bound)
            if isinstance(verdict, CounterexampleAt):
                trace.append(f"t-constant {render_expr(t)} is {verdict.value} at {verdict.point}")
                return CheckResult(False, trace)
    if expected is not None and concl != expected:
        trace.append(f"expected {expected}")
        return CheckResult(False, trace)
    return CheckResult(True, trace)


def steps(d: Derivation) -> int:
    """Number of non-reflexivity axiom applications."""
    return sum(1 for n in iter_nodes(d) if isinstance(n, Axiom) and n.id is not AxiomId.Refl)


# JSON certificates

_BINARY = {"trans": Trans, "cong_sum": CongSum, "cong_prod": CongProd, "cong_exp": CongExp}
_RULE_NAMES = {cls: name for name, cls in _BINARY.items()}


def derivation_to_json(d: Derivation) -> dict:
    if isinstance(d, Axiom):
        return {"rule": "axiom", "axiom": d.id.value,
                "inst": {k: render_expr(v) for k, v in d.instantiation}}
    if isinstance(d, Sym):
        return {"rule": "sym", "premises": [derivation_to_json(d.premise)]}
    if isinstance(d, CongExp):
        return {"rule": "cong_exp", "premises": [derivation_to_json(d.base), derivation_to_json(d.exponent)]}
    if isinstance(d, (Trans, CongSum, CongProd)):
        return {"rule": _RULE_NAMES[type(d)],
                "premises": [derivation_to_json(d.left), derivation_to_json(d.right)]}
    raise TypeError(f"not a derivation: {d!r}")


def derivation_from_json(obj: Mapping) -> Derivation:
    try:
        rule = obj["rule"]
        if rule == "axiom":
            ax = AxiomId(obj["axiom"])
            inst = {k: parse_expr(v) for k, v in obj.get("inst", {}).items()}
            return Axiom.of(ax, **inst)
        premises = [derivation_from_json(p) for p in obj["premises"]]
        if rule == "sym":
            (p,) = premises
            return Sym(p)
        a, b = premises
        return _BINARY[rule](a, b)
    except (KeyError, ValueError, TypeError) as err:
        raise DerivationError(f"bad certificate node: {err}") from err


def dumps(d: Derivation) -> str:
    return json.dumps(derivation_to_json(d), sort_keys=True, separators=(",", ":"))


def loads(text: str) -> Derivation:
    return derivation_from_json(json.loads(text))
