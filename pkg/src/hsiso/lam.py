"""Lambda terms with unit, pairs and sums: typing, reduction, printing.

Binders and injections carry type ascriptions so that typing is syntax
directed: ``Lam(x, T, M)`` binds ``x : T`` and ``Inl(M, T + S)`` names the
whole sum type.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Mapping, Union

from .types import UNIT, Arrow, Base, Product, SumT, Type, Unit, render_type


@dataclass(frozen=True)
class VarT:
    name: str


@dataclass(frozen=True)
class Star:
    pass


@dataclass(frozen=True)
class Lam:
    name: str
    ty: Type
    body: "Term"


@dataclass(frozen=True)
class App:
    fun: "Term"
    arg: "Term"


@dataclass(frozen=True)
class Inl:
    term: "Term"
    ty: Type  # the sum type


@dataclass(frozen=True)
class Inr:
    term: "Term"
    ty: Type


@dataclass(frozen=True)
class Case:
    scrutinee: "Term"
    name_l: str
    branch_l: "Term"
    name_r: str
    branch_r: "Term"


@dataclass(frozen=True)
class Pair:
    first: "Term"
    second: "Term"


@dataclass(frozen=True)
class Fst:
    term: "Term"


@dataclass(frozen=True)
class Snd:
    term: "Term"


Term = Union[VarT, Star, Lam, App, Inl, Inr, Case, Pair, Fst, Snd]
STAR = Star()


class TypingError(TypeError):
    def __init__(self, rule: str, term: "Term", message: str):
        super().__init__(f"[{rule}] {message} in {render_term(term)}")
        self.rule = rule
        self.term = term


# typing


def typecheck(ctx: Mapping[str, Type], t: Term) -> Type:
    """The type of ``t`` in context ``ctx`` (later bindings shadow earlier ones)."""
    return _Checker().check(dict(ctx), t)


class FreeVarMemo:
    """Free variables of shared subterms, memoised by identity."""

    def __init__(self):
        self.memo: dict = {}

    def __call__(self, t: Term) -> frozenset:
        key = id(t)
        hit = self.memo.get(key)
        if hit is not None:
            return hit[1]
        if isinstance(t, VarT):
            out = frozenset((t.name,))
        elif isinstance(t, Star):
            out = frozenset()
        elif isinstance(t, Lam):
            out = self(t.body) - {t.name}
        elif isinstance(t, Case):
            out = self(t.scrutinee) | (self(t.branch_l) - {t.name_l}) | (self(t.branch_r) - {t.name_r})
        elif isinstance(t, App):
            out = self(t.fun) | self(t.arg)
        elif isinstance(t, Pair):
            out = self(t.first) | self(t.second)
        else:
            out = self(t.term)
        self.memo[key] = (t, out)  # holding t keeps its id unique
        return out


class _Checker:
    def __init__(self):
        self.fv = FreeVarMemo()
        self.closed: dict = {}

    def check(self, ctx: dict, t: Term) -> Type:
        if isinstance(t, (VarT, Star)) or self.fv(t):
            return self._check(ctx, t)
        hit = self.closed.get(id(t))
        if hit is None:
            hit = (t, self._check({}, t))
            self.closed[id(t)] = hit
        return hit[1]

    def _check(self, ctx: dict, t: Term) -> Type:
        if isinstance(t, VarT):
            if t.name not in ctx:
                raise TypingError("var", t, f"unbound variable {t.name}")
            return ctx[t.name]
        if isinstance(t, Star):
            return UNIT
        if isinstance(t, Lam):
            return Arrow(t.ty, self.check({**ctx, t.name: t.ty}, t.body))
        if isinstance(t, App):
            f = self.check(ctx, t.fun)
            if not isinstance(f, Arrow):
                raise TypingError("app", t, f"applying a term of type {render_type(f)}")
            a = self.check(ctx, t.arg)
            if a != f.domain:
                raise TypingError("app", t, f"argument has type {render_type(a)}, expected {render_type(f.domain)}")
            return f.codomain
        if isinstance(t, (Inl, Inr)):
            rule = "inl" if isinstance(t, Inl) else "inr"
            if not isinstance(t.ty, SumT):
                raise TypingError(rule, t, f"ascription {render_type(t.ty)} is not a sum")
            want = t.ty.left if isinstance(t, Inl) else t.ty.right
            got = self.check(ctx, t.term)
            if got != want:
                raise TypingError(rule, t, f"injected term has type {render_type(got)}, expected {render_type(want)}")
            return t.ty
        if isinstance(t, Case):
            s = self.check(ctx, t.scrutinee)
            if not isinstance(s, SumT):
                raise TypingError("case", t, f"scrutinee has type {render_type(s)}")
            left = self.check({**ctx, t.name_l: s.left}, t.branch_l)
            right = self.check({**ctx, t.name_r: s.right}, t.branch_r)
            if left != right:
                raise TypingError("case", t, f"branches disagree: {render_type(left)} vs {render_type(right)}")
            return left
        if isinstance(t, Pair):
            return Product(self.check(ctx, t.first), self.check(ctx, t.second))
        if isinstance(t, (Fst, Snd)):
            rule = "fst" if isinstance(t, Fst) else "snd"
            p = self.check(ctx, t.term)
            if not isinstance(p, Product):
                raise TypingError(rule, t, f"projecting from type {render_type(p)}")
            return p.left if isinstance(t, Fst) else p.right
        raise TypeError(f"not a term: {t!r}")


# free variables and substitution

_fresh = itertools.count()


def fresh_name(base: str = "v") -> str:
    return f"{base.rstrip('0123456789_')}_{next(_fresh)}"


def term_free_vars(t: Term) -> frozenset:
    if isinstance(t, VarT):
        return frozenset((t.name,))
    if isinstance(t, Star):
        return frozenset()
    if isinstance(t, Lam):
        return term_free_vars(t.body) - {t.name}
    if isinstance(t, App):
        return term_free_vars(t.fun) | term_free_vars(t.arg)
    if isinstance(t, (Inl, Inr, Fst, Snd)):
        return term_free_vars(t.term)
    if isinstance(t, Pair):
        return term_free_vars(t.first) | term_free_vars(t.second)
    if isinstance(t, Case):
        return (term_free_vars(t.scrutinee) | (term_free_vars(t.branch_l) - {t.name_l})
                | (term_free_vars(t.branch_r) - {t.name_r}))
    raise TypeError(f"not a term: {t!r}")


def _subst_binder(name: str, body: Term, x: str, n: Term, n_free: frozenset):
    """Substitute under a binder, renaming it if it would capture."""
    if name == x:
        return name, body
    if name in n_free:
        new = fresh_name(name)
        body = subst(body, name, VarT(new))
        name = new
    return name, subst(body, x, n, n_free)


def subst(t: Term, x: str, n: Term, n_free: frozenset | None = None) -> Term:
    """Capture-avoiding t{n/x}."""
    if n_free is None:
        n_free = term_free_vars(n)
    if isinstance(t, VarT):
        return n if t.name == x else t
    if isinstance(t, Star):
        return t
    if isinstance(t, Lam):
        name, body = _subst_binder(t.name, t.body, x, n, n_free)
        return Lam(name, t.ty, body)
    if isinstance(t, App):
        return App(subst(t.fun, x, n, n_free), subst(t.arg, x, n, n_free))
    if isinstance(t, Inl):
        return Inl(subst(t.term, x, n, n_free), t.ty)
    if isinstance(t, Inr):
        return Inr(subst(t.term, x, n, n_free), t.ty)
    if isinstance(t, Fst):
        return Fst(subst(t.term, x, n, n_free))
    if isinstance(t, Snd):
        return Snd(subst(t.term, x, n, n_free))
    if isinstance(t, Pair):
        return Pair(subst(t.first, x, n, n_free), subst(t.second, x, n, n_free))
    if isinstance(t, Case):
        nl, bl = _subst_binder(t.name_l, t.branch_l, x, n, n_free)
        nr, br = _subst_binder(t.name_r, t.branch_r, x, n, n_free)
        return Case(subst(t.scrutinee, x, n, n_free), nl, bl, nr, br)
    raise TypeError(f"not a term: {t!r}")


# reduction


def _children(t: Term) -> list:
    if isinstance(t, Lam):
        return [t.body]
    if isinstance(t, App):
        return [t.fun, t.arg]
    if isinstance(t, (Inl, Inr, Fst, Snd)):
        return [t.term]
    if isinstance(t, Pair):
        return [t.first, t.second]
    if isinstance(t, Case):
        return [t.scrutinee, t.branch_l, t.branch_r]
    return []


def _rebuild(t: Term, kids: list) -> Term:
    if isinstance(t, Lam):
        return Lam(t.name, t.ty, kids[0])
    if isinstance(t, App):
        return App(*kids)
    if isinstance(t, Inl):
        return Inl(kids[0], t.ty)
    if isinstance(t, Inr):
        return Inr(kids[0], t.ty)
    if isinstance(t, Fst):
        return Fst(kids[0])
    if isinstance(t, Snd):
        return Snd(kids[0])
    if isinstance(t, Pair):
        return Pair(*kids)
    if isinstance(t, Case):
        return Case(kids[0], t.name_l, kids[1], t.name_r, kids[2])
    raise TypeError(f"not a term: {t!r}")


def _contract(t: Term) -> Term | None:
    if isinstance(t, App) and isinstance(t.fun, Lam):
        return subst(t.fun.body, t.fun.name, t.arg)
    if isinstance(t, Fst) and isinstance(t.term, Pair):
        return t.term.first
    if isinstance(t, Snd) and isinstance(t.term, Pair):
        return t.term.second
    if isinstance(t, Case) and isinstance(t.scrutinee, Inl):
        return subst(t.branch_l, t.name_l, t.scrutinee.term)
    if isinstance(t, Case) and isinstance(t.scrutinee, Inr):
        return subst(t.branch_r, t.name_r, t.scrutinee.term)
    return None


def beta_step(t: Term) -> Term | None:
    """One leftmost-innermost beta, projection or case reduction; None if normal."""
    kids = _children(t)
    for i, kid in enumerate(kids):
        reduced = beta_step(kid)
        if reduced is not None:
            return _rebuild(t, kids[:i] + [reduced] + kids[i + 1:])
    return _contract(t)


def beta_normalize(t: Term, max_steps: int = 100_000) -> Term:
    for _ in range(max_steps):
        nxt = beta_step(t)
        if nxt is None:
            return t
        t = nxt
    raise RuntimeError(f"no normal form within {max_steps} steps")


# alpha-equivalence


def _debruijn(t: Term, env: tuple):
    if isinstance(t, VarT):
        for i, name in enumerate(reversed(env)):
            if name == t.name:
                return ("bound", i)
        return ("free", t.name)
    if isinstance(t, Star):
        return ("star",)
    if isinstance(t, Lam):
        return ("lam", t.ty, _debruijn(t.body, env + (t.name,)))
    if isinstance(t, Case):
        return ("case", _debruijn(t.scrutinee, env), _debruijn(t.branch_l, env + (t.name_l,)),
                _debruijn(t.branch_r, env + (t.name_r,)))
    tags = {App: "app", Inl: "inl", Inr: "inr", Pair: "pair", Fst: "fst", Snd: "snd"}
    extra = (t.ty,) if isinstance(t, (Inl, Inr)) else ()
    return (tags[type(t)], *extra, *(_debruijn(k, env) for k in _children(t)))


def alpha_eq(a: Term, b: Term) -> bool:
    return _debruijn(a, ()) == _debruijn(b, ())


# printing


def render_term(t: Term, ascriptions: bool = True) -> str:
    return _render(t, 0, ascriptions)


def _render(t: Term, ctx: int, asc: bool) -> str:
    # ctx 0: anywhere; 1: function position/operand; 2: argument position
    if isinstance(t, VarT):
        return t.name
    if isinstance(t, Star):
        return "*"
    if isinstance(t, Pair):
        return f"<{_render(t.first, 0, asc)},{_render(t.second, 0, asc)}>"
    if isinstance(t, Lam):
        binder = f"{t.name}:{render_type(t.ty)}" if asc else t.name
        text = f"\\{binder}. {_render(t.body, 0, asc)}"
        return f"({text})" if ctx > 0 else text
    if isinstance(t, Case):
        text = (f"case {_render(t.scrutinee, 0, asc)} of inl {t.name_l} -> {_render(t.branch_l, 0, asc)}"
                f" | inr {t.name_r} -> {_render(t.branch_r, 0, asc)}")
        return f"({text})" if ctx > 0 else text
    if isinstance(t, App):
        text = f"{_render(t.fun, 1, asc)} {_render(t.arg, 2, asc)}"
    elif isinstance(t, (Fst, Snd, Inl, Inr)):
        head = type(t).__name__.lower()
        text = f"{head} {_render(t.term, 2, asc)}"
    else:
        raise TypeError(f"not a term: {t!r}")
    return f"({text})" if ctx > 1 or (ctx == 1 and not isinstance(t, App)) else text


# JSON


def type_to_json(t: Type):
    if isinstance(t, Unit):
        return "unit"
    if isinstance(t, Base):
        return {"base": t.index}
    kind = {Arrow: "arrow", Product: "product", SumT: "sum"}[type(t)]
    a, b = (t.domain, t.codomain) if isinstance(t, Arrow) else (t.left, t.right)
    return {kind: [type_to_json(a), type_to_json(b)]}


def type_from_json(obj) -> Type:
    if obj == "unit":
        return UNIT
    ((kind, val),) = obj.items()
    if kind == "base":
        return Base(int(val))
    a, b = (type_from_json(v) for v in val)
    return {"arrow": Arrow, "product": Product, "sum": SumT}[kind](a, b)


def term_to_json(t: Term) -> dict:
    if isinstance(t, VarT):
        return {"var": t.name}
    if isinstance(t, Star):
        return {"star": None}
    if isinstance(t, Lam):
        return {"lam": {"name": t.name, "type": type_to_json(t.ty), "body": term_to_json(t.body)}}
    if isinstance(t, App):
        return {"app": [term_to_json(t.fun), term_to_json(t.arg)]}
    if isinstance(t, (Inl, Inr)):
        return {type(t).__name__.lower(): {"term": term_to_json(t.term), "type": type_to_json(t.ty)}}
    if isinstance(t, Case):
        return {"case": {"scrutinee": term_to_json(t.scrutinee),
                         "inl": [t.name_l, term_to_json(t.branch_l)],
                         "inr": [t.name_r, term_to_json(t.branch_r)]}}
    if isinstance(t, Pair):
        return {"pair": [term_to_json(t.first), term_to_json(t.second)]}
    if isinstance(t, (Fst, Snd)):
        return {type(t).__name__.lower(): term_to_json(t.term)}
    raise TypeError(f"not a term: {t!r}")


def term_from_json(obj: dict) -> Term:
    ((kind, val),) = obj.items()
    if kind == "var":
        return VarT(val)
    if kind == "star":
        return STAR
    if kind == "lam":
        return Lam(val["name"], type_from_json(val["type"]), term_from_json(val["body"]))
    if kind == "app":
        return App(term_from_json(val[0]), term_from_json(val[1]))
    if kind in ("inl", "inr"):
        cls = Inl if kind == "inl" else Inr
        return cls(term_from_json(val["term"]), type_from_json(val["type"]))
    if kind == "case":
        (nl, bl), (nr, br) = val["inl"], val["inr"]
        return Case(term_from_json(val["scrutinee"]), nl, term_from_json(bl), nr, term_from_json(br))
    if kind == "pair":
        return Pair(term_from_json(val[0]), term_from_json(val[1]))
    if kind in ("fst", "snd"):
        return (Fst if kind == "fst" else Snd)(term_from_json(val))
    raise ValueError(f"unknown term node {kind!r}")
