"""Syntactic membership in the subclasses of expressions for which the
high-school identities are known to be complete.

Constants are specialised to S = {1}, so the constants of every grammar are the
numerals (variable-free sums of 1). An exponentiation whose exponent is a
numeral is read as the iterated product it abbreviates; this keeps the
inclusions S ⊆ L(S) ⊆ R(S) ⊆ L and Λ0 ⊆ Λ ⊆ L true syntactically.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache

from .expr import Exp, Expr, One, Prod, Sum, Var, constant_value, free_vars, has_tconst, render_expr


class FragmentError(ValueError):
    pass


@dataclass(frozen=True)
class FragmentReport:
    in_S: bool
    in_LS: bool
    in_RS: bool
    in_Lambda0: bool
    in_Lambda: bool
    in_L: bool
    blocking_subterm: tuple | None = None  # (Expr, reason)

    def to_json(self) -> dict:
        out = {
            "S": self.in_S,
            "L(S)": self.in_LS,
            "R(S)": self.in_RS,
            "Lambda0": self.in_Lambda0,
            "Lambda": self.in_Lambda,
            "L": self.in_L,
            "blocking_subterm": None,
        }
        if self.blocking_subterm is not None:
            sub, reason = self.blocking_subterm
            out["blocking_subterm"] = {"expr": render_expr(sub), "reason": reason}
        return out


def _is_numeral(e: Expr) -> bool:
    return constant_value(e) is not None


def _const_power(e: Expr) -> bool:
    return isinstance(e, Exp) and _is_numeral(e.exponent)


@lru_cache(maxsize=None)
def in_S(f: Expr) -> bool:
    """1 | x | f+g | fg | x^f | n^f, with at most one distinct variable overall."""
    return len(free_vars(f)) <= 1 and _in_S(f)


def _in_S(f: Expr) -> bool:
    if isinstance(f, (One, Var)):
        return True
    if isinstance(f, (Sum, Prod)):
        return _in_S(f.left) and _in_S(f.right)
    if isinstance(f, Exp):
        if _const_power(f):
            return _in_S(f.base)
        return (isinstance(f.base, Var) or _is_numeral(f.base)) and _in_S(f.exponent)
    return False


@lru_cache(maxsize=None)
def in_LS(f: Expr) -> bool:
    """1 | x_i | f+g | fg | n^f | x_i^f | (x_i^n)^f."""
    if isinstance(f, (One, Var)):
        return True
    if isinstance(f, (Sum, Prod)):
        return in_LS(f.left) and in_LS(f.right)
    if isinstance(f, Exp):
        if _const_power(f):
            return in_LS(f.base)
        b = f.base
        ok_base = isinstance(b, Var) or _is_numeral(b) or (_const_power(b) and isinstance(b.base, Var))
        return ok_base and in_LS(f.exponent)
    return False


def is_ordinary(p: Expr) -> bool:
    """Built from 1, variables, +, * and numeral exponents only."""
    if isinstance(p, (One, Var)):
        return True
    if isinstance(p, (Sum, Prod)):
        return is_ordinary(p.left) and is_ordinary(p.right)
    if isinstance(p, Exp):
        return _is_numeral(p.exponent) and is_ordinary(p.base)
    return False


@lru_cache(maxsize=None)
def in_RS(f: Expr) -> bool:
    """1 | x_i | f+g | fg | p^f with p an ordinary polynomial."""
    if isinstance(f, (One, Var)):
        return True
    if isinstance(f, (Sum, Prod)):
        return in_RS(f.left) and in_RS(f.right)
    if isinstance(f, Exp):
        if _const_power(f):
            return in_RS(f.base)
        return is_ordinary(f.base) and in_RS(f.exponent)
    return False


@lru_cache(maxsize=None)
def in_Lambda(f: Expr) -> bool:
    """1 | x_i | f+g | fg | l0^f with l0 a variable-free member and f a member."""
    if isinstance(f, (One, Var)):
        return True
    if isinstance(f, (Sum, Prod)):
        return in_Lambda(f.left) and in_Lambda(f.right)
    if isinstance(f, Exp):
        if _const_power(f):
            return in_Lambda(f.base)
        return in_Lambda0(f.base) and in_Lambda(f.exponent)
    return False


def in_Lambda0(f: Expr) -> bool:
    return not free_vars(f) and in_Lambda(f)


def _find_L_blocker(f: Expr) -> tuple | None:
    """None if f is in L, else the leftmost offending subterm with a reason."""
    if isinstance(f, (One, Var)):
        return None
    if isinstance(f, (Sum, Prod)):
        return _find_L_blocker(f.left) or _find_L_blocker(f.right)
    if isinstance(f, Exp):
        if _const_power(f):
            return _find_L_blocker(f.base)
        if not in_Lambda(f.base):
            return (f.base, _lambda_failure(f.base))
        return _find_L_blocker(f.exponent)
    raise FragmentError(f"cannot classify {render_expr(f)}")


def _lambda_failure(b: Expr) -> str:
    """Why a base of exponentiation is not in Λ."""
    stack = [b]
    while stack:
        node = stack.pop()
        if isinstance(node, Exp) and not _const_power(node):
            if free_vars(node.base):
                return (
                    "base of exponentiation contains the exponential "
                    f"{render_expr(node)} whose base has variables"
                )
            stack.append(node.exponent)
        elif isinstance(node, (Sum, Prod)):
            stack.extend((node.right, node.left))
        elif isinstance(node, Exp):
            stack.append(node.base)
    return "base of exponentiation is not in Λ"


def classify(f: Expr) -> FragmentReport:
    if has_tconst(f):
        raise FragmentError("t-constants are outside the classified language")
    blocker = _find_L_blocker(f)
    return FragmentReport(
        in_S=in_S(f),
        in_LS=in_LS(f),
        in_RS=in_RS(f),
        in_Lambda0=in_Lambda0(f),
        in_Lambda=in_Lambda(f),
        in_L=blocker is None,
        blocking_subterm=blocker,
    )


_NAMES = [("in_S", "𝒮"), ("in_LS", "ℒ(S)"), ("in_RS", "ℛ(S)"), ("in_Lambda0", "Λ₀"),
          ("in_Lambda", "Λ"), ("in_L", "ℒ")]


def _production(f: Expr, fragment: str) -> str:
    if isinstance(f, One):
        return "1"
    if isinstance(f, Var):
        return "x" if fragment == "𝒮" else "xᵢ"
    if isinstance(f, Sum) and isinstance(f.left, Exp) and isinstance(f.right, Exp):
        return {"𝒮": "sum of x^f / n^f", "ℒ(S)": "sum of x^f / n^f", "ℛ(S)": "sum of p^f with p ordinary",
                "ℒ": "sum of l^f with l ∈ Λ"}.get(fragment, "sum of l₀^f")
    if isinstance(f, Sum):
        return "f+g"
    if isinstance(f, Prod):
        return "fg"
    if isinstance(f, Exp):
        if _const_power(f):
            return "numeral power (iterated product)"
        if fragment in ("𝒮", "ℒ(S)"):
            if isinstance(f.base, Var):
                return "x^f"
            return "n^f" if _is_numeral(f.base) else "(x^n)^f"
        return {"ℛ(S)": "p^f with p ordinary", "ℒ": "l^f with l ∈ Λ"}.get(fragment, "l₀^f")
    return "?"


def explain(f: Expr) -> str:
    """Human-readable account of the classification, one line per fragment."""
    report = classify(f)
    flags = [(name, getattr(report, attr)) for attr, name in _NAMES]
    if all(ok for _, ok in flags):
        return "in all fragments"
    lines = []
    for name, ok in flags:
        if ok:
            lines.append(f"in {name} via {_production(f, name)}" if name != "ℒ"
                         else f"in ℒ: {_production(f, name)}")
        else:
            lines.append(f"not in {name}")
    if report.blocking_subterm is not None:
        sub, reason = report.blocking_subterm
        lines.append(f"blocked at {render_expr(sub)}: {reason}")
    return "\n".join(lines)


def report_json(f: Expr) -> str:
    return json.dumps(classify(f).to_json(), ensure_ascii=False)
