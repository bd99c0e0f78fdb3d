"""Finite-set denotations of closed lambda terms.

Every type built from Unit by sums, products and arrows denotes a finite set,
so two closed terms are extensionally equal iff their denotations coincide.
"""

from __future__ import annotations

import itertools
from functools import lru_cache

from .lam import (
    App, Case, FreeVarMemo, Fst, Inl, Inr, Lam, Pair, Snd, Star, Term, VarT, render_term, typecheck,
)
from .types import Arrow, Base, Product, SumT, Type, Unit, render_type

DEFAULT_GUARD = 2**16


class GuardExceeded(ValueError):
    pass


class _Value:
    __slots__ = ("_hash",)

    def __init__(self):
        object.__setattr__(self, "_hash", None)

    def __hash__(self):
        h = self._hash
        if h is None:
            h = hash((type(self).__name__, *self._key()))
            object.__setattr__(self, "_hash", h)
        return h

    def __eq__(self, other):
        return self is other or (type(self) is type(other) and self._key() == other._key())

    def __setattr__(self, name, value):
        raise AttributeError("semantic values are immutable")


class UnitV(_Value):
    __slots__ = ()

    def _key(self):
        return ()

    def __repr__(self):
        return "UnitV()"


class PairV(_Value):
    __slots__ = ("first", "second")

    def __init__(self, first, second):
        object.__setattr__(self, "_hash", None)
        object.__setattr__(self, "first", first)
        object.__setattr__(self, "second", second)

    def _key(self):
        return (self.first, self.second)

    def __repr__(self):
        return f"PairV({self.first!r}, {self.second!r})"


class InlV(_Value):
    __slots__ = ("value",)

    def __init__(self, value):
        object.__setattr__(self, "_hash", None)
        object.__setattr__(self, "value", value)

    def _key(self):
        return (self.value,)

    def __repr__(self):
        return f"InlV({self.value!r})"


class InrV(InlV):
    __slots__ = ()

    def __repr__(self):
        return f"InrV({self.value!r})"


class FunV(_Value):
    """A total function table ordered by the enumeration of its domain."""

    __slots__ = ("table", "_lookup")

    def __init__(self, table):
        object.__setattr__(self, "_hash", None)
        object.__setattr__(self, "table", tuple(table))

    def _key(self):
        return (self.table,)

    def __call__(self, arg):
        try:
            lookup = self._lookup
        except AttributeError:
            lookup = dict(self.table)
            object.__setattr__(self, "_lookup", lookup)
        return lookup[arg]

    def __repr__(self):
        return f"FunV({list(self.table)!r})"


SemValue = _Value
UNIT_V = UnitV()


def enumerate_type(tau: Type, guard: int = DEFAULT_GUARD) -> tuple:
    """All inhabitants of ``tau`` in canonical order."""
    if capped_cardinality(tau, guard) > guard:
        raise GuardExceeded(f"{render_type(tau)} has more than {guard} elements")
    return _enumerate(tau)


def capped_cardinality(tau: Type, cap: int) -> int:
    """min(|tau|, cap + 1), without building huge integers."""
    if isinstance(tau, Unit):
        return 1
    if isinstance(tau, Base):
        raise ValueError(f"type {render_type(tau)} is a base type; interpret it first")
    if isinstance(tau, SumT):
        return min(capped_cardinality(tau.left, cap) + capped_cardinality(tau.right, cap), cap + 1)
    if isinstance(tau, Product):
        return min(capped_cardinality(tau.left, cap) * capped_cardinality(tau.right, cap), cap + 1)
    cod = capped_cardinality(tau.codomain, cap)
    if cod == 1:
        return 1
    dom = capped_cardinality(tau.domain, cap)
    if dom * (cod.bit_length() - 1) > cap.bit_length():
        return cap + 1
    return min(cod**dom, cap + 1)


@lru_cache(maxsize=256)
def _enumerate(tau: Type) -> tuple:
    if isinstance(tau, Unit):
        return (UNIT_V,)
    if isinstance(tau, SumT):
        return tuple(InlV(v) for v in _enumerate(tau.left)) + tuple(InrV(v) for v in _enumerate(tau.right))
    if isinstance(tau, Product):
        return tuple(PairV(a, b) for a in _enumerate(tau.left) for b in _enumerate(tau.right))
    if isinstance(tau, Arrow):
        dom, cod = _enumerate(tau.domain), _enumerate(tau.codomain)
        return tuple(FunV(zip(dom, images)) for images in itertools.product(cod, repeat=len(dom)))
    raise ValueError(f"cannot enumerate {render_type(tau)}")


# Inside the evaluator values are plain tuples, which hash and compare at C
# speed: () for the unit, (a, b) for pairs, (0, v) and (1, v) for injections,
# and for functions a tuple of images in the order of the domain. Each domain
# type gets its own tuple subclass whose ``index`` maps arguments to positions.


@lru_cache(maxsize=None)
def _table_class(dom: Type) -> type:
    cls = type("Table", (tuple,), {"__slots__": ()})
    cls.index = {v: i for i, v in enumerate(_raw_enumerate(dom))}
    return cls


@lru_cache(maxsize=256)
def _raw_enumerate(tau: Type) -> tuple:
    if isinstance(tau, Unit):
        return ((),)
    if isinstance(tau, SumT):
        return tuple((0, v) for v in _raw_enumerate(tau.left)) + tuple((1, v) for v in _raw_enumerate(tau.right))
    if isinstance(tau, Product):
        return tuple((a, b) for a in _raw_enumerate(tau.left) for b in _raw_enumerate(tau.right))
    if isinstance(tau, Arrow):
        cls = _table_class(tau.domain)
        cod = _raw_enumerate(tau.codomain)
        return tuple(cls(images) for images in itertools.product(cod, repeat=len(cls.index)))
    raise ValueError(f"cannot enumerate {render_type(tau)}")


def raw_enumerate(tau: Type, guard: int = DEFAULT_GUARD) -> tuple:
    """Inhabitants of ``tau`` in the evaluator's representation, canonical order."""
    if capped_cardinality(tau, guard) > guard:
        raise GuardExceeded(f"{render_type(tau)} has more than {guard} elements")
    return _raw_enumerate(tau)


def to_value(raw, tau: Type):
    """Convert from the evaluator's representation to a SemValue of type ``tau``."""
    if isinstance(tau, Unit):
        return UNIT_V
    if isinstance(tau, SumT):
        tag, v = raw
        return InlV(to_value(v, tau.left)) if tag == 0 else InrV(to_value(v, tau.right))
    if isinstance(tau, Product):
        return PairV(to_value(raw[0], tau.left), to_value(raw[1], tau.right))
    if isinstance(tau, Arrow):
        return FunV(zip(_enumerate(tau.domain), (to_value(v, tau.codomain) for v in raw)))
    raise ValueError(f"no values of type {render_type(tau)}")


class Evaluator:
    """Evaluates closed terms by first compiling them into Python closures.

    Closed subterms are evaluated at most once; compiled code is shared between
    all terms evaluated by the same instance.
    """

    def __init__(self, guard: int = DEFAULT_GUARD):
        self.guard = guard
        self.fv = FreeVarMemo()
        self.compiled: dict = {}  # id(term) -> (term, code)

    def raw(self, t: Term):
        """The denotation of the closed term ``t`` in the internal representation."""
        return self.code(t)({})

    def value(self, t: Term):
        return to_value(self.raw(t), typecheck({}, t))

    def code(self, t: Term):
        key = id(t)
        hit = self.compiled.get(key)
        if hit is not None:
            return hit[1]
        code = self._compile(t)
        if not isinstance(t, (VarT, Star)) and not self.fv(t):
            code = _memoised(code)
        self.compiled[key] = (t, code)  # holding t keeps its id unique
        return code

    def _compile(self, t: Term):
        if isinstance(t, VarT):
            name = t.name
            return lambda env: env[name]
        if isinstance(t, Star):
            return lambda env: ()
        if isinstance(t, Lam):
            name, body, domain = t.name, self.code(t.body), _Domain(t.ty, self.guard)

            def lam(env):
                elements = domain()
                return domain.cls(body({**env, name: a}) for a in elements)

            return lam
        if isinstance(t, App):
            arg = self.code(t.arg)
            if isinstance(t.fun, Lam):
                # evaluate the redex directly instead of tabulating the function
                name, body = t.fun.name, self.code(t.fun.body)
                return lambda env: body({**env, name: arg(env)})
            fun = self.code(t.fun)

            def app(env):
                f = fun(env)
                return f[f.index[arg(env)]]

            return app
        if isinstance(t, Inl):
            inner = self.code(t.term)
            return lambda env: (0, inner(env))
        if isinstance(t, Inr):
            inner = self.code(t.term)
            return lambda env: (1, inner(env))
        if isinstance(t, Pair):
            first, second = self.code(t.first), self.code(t.second)
            return lambda env: (first(env), second(env))
        if isinstance(t, Fst):
            inner = self.code(t.term)
            return lambda env: inner(env)[0]
        if isinstance(t, Snd):
            inner = self.code(t.term)
            return lambda env: inner(env)[1]
        if isinstance(t, Case):
            scrut, left, right = self.code(t.scrutinee), self.code(t.branch_l), self.code(t.branch_r)
            name_l, name_r = t.name_l, t.name_r

            def case(env):
                tag, v = scrut(env)
                if tag == 0:
                    return left({**env, name_l: v})
                return right({**env, name_r: v})

            return case
        raise TypeError(f"not a term: {t!r}")


class _Domain:
    """The elements of a lambda's domain, enumerated on first use."""

    __slots__ = ("ty", "guard", "elements", "cls")

    def __init__(self, ty: Type, guard: int):
        self.ty, self.guard, self.elements, self.cls = ty, guard, None, None

    def __call__(self):
        if self.elements is None:
            self.elements = raw_enumerate(self.ty, self.guard)
            self.cls = _table_class(self.ty)
        return self.elements


def _memoised(code):
    cell = []

    def run(env):
        if not cell:
            cell.append(code({}))
        return cell[0]

    return run


def eval_term(t: Term, tau: Type | None = None, guard: int = DEFAULT_GUARD):
    """The denotation of the closed term ``t``; checks it has type ``tau`` if given."""
    actual = typecheck({}, t)
    if tau is not None and actual != tau:
        raise TypeError(f"{render_term(t)} has type {render_type(actual)}, not {render_type(tau)}")
    if _has_base(actual):
        raise ValueError(f"type {render_type(actual)} contains a base type")
    return Evaluator(guard).value(t)


def _has_base(tau: Type) -> bool:
    if isinstance(tau, Base):
        return True
    if isinstance(tau, Unit):
        return False
    if isinstance(tau, Arrow):
        return _has_base(tau.domain) or _has_base(tau.codomain)
    return _has_base(tau.left) or _has_base(tau.right)
