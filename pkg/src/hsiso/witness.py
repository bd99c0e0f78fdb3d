"""Compile derivations into pairs of mutually inverse lambda terms and check
them in finite-set models.

At an environment sending every variable to a numeral type, each axiom of a
derivation becomes a fixed pair of coercions; the inference rules combine
them. ``check_roundtrip`` confirms extensionally that the two compositions
are identities.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .expr import Expr, render_expr
from .finite import DEFAULT_GUARD, Evaluator, raw_enumerate, to_value
from .hsi import (
    Axiom, AxiomId, CongExp, CongProd, CongSum, Derivation, Sym, Trans, check_derivation,
)
from .lam import (
    STAR, App, Case, Fst, Inl, Inr, Lam, Pair, Snd, Term, VarT, render_term, term_to_json,
    type_to_json, typecheck,
)
from .poly import poly_eval
from .types import UNIT, Arrow, Env, InterpretationError, Product, SumT, Type, interpret, numeral_type, render_type


class WitnessError(ValueError):
    pass


@dataclass(frozen=True)
class WitnessPair:
    forward: Term
    backward: Term
    source_type: Type
    target_type: Type

    def swapped(self) -> "WitnessPair":
        return WitnessPair(self.backward, self.forward, self.target_type, self.source_type)

    def to_json(self) -> dict:
        return {
            "source_type": render_type(self.source_type),
            "target_type": render_type(self.target_type),
            "forward": render_term(self.forward),
            "backward": render_term(self.backward),
            "forward_ast": term_to_json(self.forward),
            "backward_ast": term_to_json(self.backward),
            "source_type_ast": type_to_json(self.source_type),
            "target_type_ast": type_to_json(self.target_type),
        }


x, y, a, b = VarT("x"), VarT("y"), VarT("a"), VarT("b")


def identity_pair(t: Type) -> WitnessPair:
    ident = Lam("x", t, x)
    return WitnessPair(ident, ident, t, t)


def _pair(src: Type, tgt: Type, fwd_body: Term, bwd_body: Term) -> WitnessPair:
    return WitnessPair(Lam("x", src, fwd_body), Lam("x", tgt, bwd_body), src, tgt)


# the fixed coercions for each axiom, at interpreted types F, G, H


def _axiom_pair(ax: AxiomId, F: Type, G: Type, H: Type) -> WitnessPair:
    if ax is AxiomId.Refl:
        return identity_pair(F)
    if ax is AxiomId.SumComm:
        src, tgt = SumT(F, G), SumT(G, F)
        return _pair(src, tgt,
                     Case(x, "a", Inr(a, tgt), "b", Inl(b, tgt)),
                     Case(x, "a", Inr(a, src), "b", Inl(b, src)))
    if ax is AxiomId.SumAssoc:
        src, tgt = SumT(SumT(F, G), H), SumT(F, SumT(G, H))
        gh = SumT(G, H)
        fwd = Case(x, "a", Case(a, "c", Inl(VarT("c"), tgt), "d", Inr(Inl(VarT("d"), gh), tgt)),
                   "b", Inr(Inr(b, gh), tgt))
        bwd = Case(x, "a", Inl(Inl(a, src.left), src),
                   "b", Case(b, "c", Inl(Inr(VarT("c"), src.left), src), "d", Inr(VarT("d"), src)))
        return _pair(src, tgt, fwd, bwd)
    if ax is AxiomId.ProdComm:
        return _pair(Product(F, G), Product(G, F), Pair(Snd(x), Fst(x)), Pair(Snd(x), Fst(x)))
    if ax is AxiomId.ProdAssoc:
        return _pair(Product(Product(F, G), H), Product(F, Product(G, H)),
                     Pair(Fst(Fst(x)), Pair(Snd(Fst(x)), Snd(x))),
                     Pair(Pair(Fst(x), Fst(Snd(x))), Snd(Snd(x))))
    if ax is AxiomId.DistL:
        src, tgt = Product(F, SumT(G, H)), SumT(Product(F, G), Product(F, H))
        fwd = Case(Snd(x), "a", Inl(Pair(Fst(x), a), tgt), "b", Inr(Pair(Fst(x), b), tgt))
        bwd = Case(x, "a", Pair(Fst(a), Inl(Snd(a), src.right)), "b", Pair(Fst(b), Inr(Snd(b), src.right)))
        return _pair(src, tgt, fwd, bwd)
    if ax is AxiomId.OneProd:
        return _pair(Product(UNIT, F), F, Snd(x), Pair(STAR, x))
    if ax is AxiomId.ExpOne:
        return _pair(Arrow(UNIT, F), F, App(x, STAR), Lam("y", UNIT, x))
    if ax is AxiomId.OneExp:
        return _pair(Arrow(F, UNIT), UNIT, STAR, Lam("y", F, STAR))
    if ax is AxiomId.ExpSum:
        src = Arrow(SumT(G, H), F)
        tgt = Product(Arrow(G, F), Arrow(H, F))
        fwd = Pair(Lam("y", G, App(x, Inl(y, src.domain))), Lam("y", H, App(x, Inr(y, src.domain))))
        bwd = Lam("y", src.domain, Case(y, "a", App(Fst(x), a), "b", App(Snd(x), b)))
        return _pair(src, tgt, fwd, bwd)
    if ax is AxiomId.ExpProdBase:
        src = Arrow(H, Product(F, G))
        tgt = Product(Arrow(H, F), Arrow(H, G))
        fwd = Pair(Lam("y", H, Fst(App(x, y))), Lam("y", H, Snd(App(x, y))))
        bwd = Lam("y", H, Pair(App(Fst(x), y), App(Snd(x), y)))
        return _pair(src, tgt, fwd, bwd)
    if ax is AxiomId.ExpExp:
        src = Arrow(H, Arrow(G, F))
        tgt = Arrow(Product(G, H), F)
        fwd = Lam("y", Product(G, H), App(App(x, Snd(y)), Fst(y)))
        bwd = Lam("z", H, Lam("y", G, App(x, Pair(y, VarT("z")))))
        return _pair(src, tgt, fwd, bwd)
    raise WitnessError(f"{ax.value} is not a high-school axiom")


# numeral isomorphisms


@lru_cache(maxsize=None)
def numeral_iso_sum(k1: int, k2: int) -> WitnessPair:
    """Coercions between the numeral type k1+k2 and numeral(k1) + numeral(k2)."""
    if k1 < 1 or k2 < 1:
        raise ValueError("numeral sizes start at 1")
    src = numeral_type(k1 + k2)
    tgt = SumT(numeral_type(k1), numeral_type(k2))
    if k1 == 1:
        return identity_pair(src)  # the two types coincide by right-nesting
    r = numeral_iso_sum(k1 - 1, k2)
    n1 = numeral_type(k1)
    c, d, u, v = VarT("c"), VarT("d"), VarT("u"), VarT("v")
    fwd = Case(x, "a", Inl(Inl(a, n1), tgt),
               "b", Case(App(r.forward, b), "c", Inl(Inr(c, n1), tgt), "d", Inr(d, tgt)))
    bwd = Case(x, "a", Case(a, "u", Inl(u, src), "v", Inr(App(r.backward, Inl(v, r.target_type)), src)),
               "b", Inr(App(r.backward, Inr(b, r.target_type)), src))
    return _pair(src, tgt, fwd, bwd)


@lru_cache(maxsize=None)
def numeral_iso_prod(k1: int, k2: int) -> WitnessPair:
    """Coercions between the numeral type k1*k2 and numeral(k1) * numeral(k2)."""
    if k1 < 1 or k2 < 1:
        raise ValueError("numeral sizes start at 1")
    n2 = numeral_type(k2)
    if k1 == 1:
        return _pair(n2, Product(UNIT, n2), Pair(STAR, x), Snd(x))
    src = numeral_type(k1 * k2)
    n1 = numeral_type(k1)
    tgt = Product(n1, n2)
    s = numeral_iso_sum(k2, (k1 - 1) * k2)  # k = k2 + (k1-1)k2
    r = numeral_iso_prod(k1 - 1, k2)
    p, v = VarT("p"), VarT("v")
    # the beta-redex shares one call of the recursive coercion between both components
    fwd = Case(App(s.forward, x), "a", Pair(Inl(STAR, n1), a),
               "b", App(Lam("p", r.target_type, Pair(Inr(Fst(p), n1), Snd(p))), App(r.forward, b)))
    bwd = Case(Fst(x), "u", App(s.backward, Inl(Snd(x), s.target_type)),
               "v", App(s.backward, Inr(App(r.backward, Pair(v, Snd(x))), s.target_type)))
    return _pair(src, tgt, fwd, bwd)


# the compiler


class _Compiler:
    def __init__(self, rho: Env):
        self.rho = rho
        self.types: dict = {}
        self.done: dict = {}

    def ty(self, e: Expr) -> Type:
        key = id(e)
        hit = self.types.get(key)
        if hit is None:
            hit = (e, interpret(e, self.rho))
            self.types[key] = hit
        return hit[1]

    def value(self, e: Expr) -> int:
        return poly_eval(e.poly, self.rho)

    def compile(self, d: Derivation) -> WitnessPair:
        key = id(d)
        hit = self.done.get(key)
        if hit is None:
            hit = (d, self._compile(d))
            self.done[key] = hit
        return hit[1]

    def _compile(self, d: Derivation) -> WitnessPair:
        if isinstance(d, Axiom):
            return self.axiom(d)
        if isinstance(d, Sym):
            return self.compile(d.premise).swapped()
        if isinstance(d, Trans):
            w1, w2 = self.compile(d.left), self.compile(d.right)
            return _pair(w1.source_type, w2.target_type,
                         App(w2.forward, App(w1.forward, x)),
                         App(w1.backward, App(w2.backward, x)))
        if isinstance(d, CongExp):
            wb, we = self.compile(d.base), self.compile(d.exponent)
            src = Arrow(we.source_type, wb.source_type)
            tgt = Arrow(we.target_type, wb.target_type)
            return _pair(src, tgt,
                         Lam("y", we.target_type, App(wb.forward, App(x, App(we.backward, y)))),
                         Lam("y", we.source_type, App(wb.backward, App(x, App(we.forward, y)))))
        if isinstance(d, CongSum):
            w1, w2 = self.compile(d.left), self.compile(d.right)
            src = SumT(w1.source_type, w2.source_type)
            tgt = SumT(w1.target_type, w2.target_type)
            return _pair(src, tgt,
                         Case(x, "a", Inl(App(w1.forward, a), tgt), "b", Inr(App(w2.forward, b), tgt)),
                         Case(x, "a", Inl(App(w1.backward, a), src), "b", Inr(App(w2.backward, b), src)))
        if isinstance(d, CongProd):
            w1, w2 = self.compile(d.left), self.compile(d.right)
            return _pair(Product(w1.source_type, w2.source_type), Product(w1.target_type, w2.target_type),
                         Pair(App(w1.forward, Fst(x)), App(w2.forward, Snd(x))),
                         Pair(App(w1.backward, Fst(x)), App(w2.backward, Snd(x))))
        raise WitnessError(f"not a derivation node: {d!r}")

    def axiom(self, d: Axiom) -> WitnessPair:
        inst = d.inst
        if d.id.is_hsi:
            F, G, H = (self.ty(inst[m]) if m in inst else None for m in ("f", "g", "h"))
            return _axiom_pair(d.id, F, G, H)
        if d.id is AxiomId.T_One:
            return identity_pair(UNIT)
        if d.id is AxiomId.T_Var:
            return identity_pair(self.ty(inst["x"]))
        if d.id is AxiomId.T_PolyEq:
            return identity_pair(self.ty(inst["z"]))
        self.ty(inst["z"]), self.ty(inst["u"])  # positivity at rho
        k1, k2 = self.value(inst["z"]), self.value(inst["u"])
        if d.id is AxiomId.T_Sum:
            return numeral_iso_sum(k1, k2)
        return numeral_iso_prod(k1, k2)


def compile_witness(d: Derivation, rho: Env, checked: bool = False) -> WitnessPair:
    """The coercion pair interpreting ``d`` at the environment ``rho``."""
    if not checked:
        result = check_derivation(d)
        if not result:
            raise WitnessError("derivation does not check: " + "; ".join(result.trace))
    bad = {i: k for i, k in rho.items() if k < 1}
    if bad:
        raise WitnessError(f"environment sizes must be positive: {bad}")
    try:
        w = _Compiler(rho).compile(d)
        concl = d.conclusion
        expected = (interpret(concl.lhs, rho), interpret(concl.rhs, rho))
    except InterpretationError as err:
        raise WitnessError(str(err)) from None
    if (w.source_type, w.target_type) != expected:
        raise WitnessError(f"compiled pair has types {render_type(w.source_type)} / {render_type(w.target_type)}"
                           f" for {render_expr(concl.lhs)} = {render_expr(concl.rhs)}")
    return w


def typecheck_pair(w: WitnessPair) -> None:
    fwd, bwd = typecheck({}, w.forward), typecheck({}, w.backward)
    if fwd != Arrow(w.source_type, w.target_type):
        raise WitnessError(f"forward term has type {render_type(fwd)}")
    if bwd != Arrow(w.target_type, w.source_type):
        raise WitnessError(f"backward term has type {render_type(bwd)}")


def check_roundtrip(w: WitnessPair, guard: int = DEFAULT_GUARD) -> bool:
    """True iff backward . forward and forward . backward are pointwise identities."""
    return roundtrip_failure(w, guard) is None


def roundtrip_failure(w: WitnessPair, guard: int = DEFAULT_GUARD):
    """The first element on which a composition is not the identity, as
    (side, element, image), or None."""
    typecheck_pair(w)
    ev = Evaluator(guard)
    fwd, bwd = ev.raw(w.forward), ev.raw(w.backward)
    for side, ty, there, back in (("source", w.source_type, fwd, bwd), ("target", w.target_type, bwd, fwd)):
        # the tables follow the enumeration order, so position i holds the image of element i
        for i, elem in enumerate(raw_enumerate(ty, guard)):
            image = back[back.index[there[i]]]
            if image != elem:
                return (side, to_value(elem, ty), to_value(image, ty))
    return None
