"""Normalization with proof traces, the HSI prover built on it, and the
reflection derivations t_p = p for positive polynomials.

Normal forms are sums of monomials, monomials are products of atoms, and atoms
are variables or powers b^m where b is a variable or an irreducible sum and m
is a monomial other than 1. Sums and products are right-nested and sorted by a
fixed total order on terms. Every rewrite is recorded as an axiom instance, so
the trace returned with a normal form is a checkable derivation.

Bases of exponentiation are kept factored: after distributing, a sum base is
split into a product whenever its polynomial (over the atoms) factors into
pieces with non-negative coefficients, and the split is then pushed through
the exponent with (fg)^h = f^h g^h. Without this step (2x)^y and 2^y x^y would
have different normal forms.
"""

from __future__ import annotations

from functools import lru_cache, reduce

import sympy

from .expr import ONE, Equation, Exp, Expr, One, Prod, Sum, TConst, Var, render_expr
from .hsi import (
    Axiom,
    AxiomId as A,
    CongExp,
    CongProd,
    CongSum,
    Derivation,
    Sym,
    Trans,
    is_refl,
    refl,
)
from .poly import Poly, poly_reflect


class NormalizationError(ValueError):
    pass


@lru_cache(maxsize=None)
def term_key(e: Expr) -> tuple:
    """A total order on expressions; equal keys iff structurally equal."""
    if isinstance(e, One):
        return (0,)
    if isinstance(e, Var):
        return (1, e.index)
    if isinstance(e, Exp):
        return (2, term_key(e.base), term_key(e.exponent))
    if isinstance(e, Prod):
        return (3, term_key(e.left), term_key(e.right))
    if isinstance(e, Sum):
        return (4, term_key(e.left), term_key(e.right))
    if isinstance(e, TConst):
        return (5, e.poly.terms)
    raise TypeError(f"not an expression: {e!r}")


# derivation builders that drop reflexivity steps


def _trans(*ds: Derivation) -> Derivation:
    keep = [d for d in ds if not is_refl(d)]
    if not keep:
        return ds[0]
    return reduce(Trans, keep)


def _cong_sum(a: Derivation, b: Derivation) -> Derivation:
    if is_refl(a) and is_refl(b):
        return refl(Sum(a.inst["f"], b.inst["f"]))
    return CongSum(a, b)


def _cong_prod(a: Derivation, b: Derivation) -> Derivation:
    if is_refl(a) and is_refl(b):
        return refl(Prod(a.inst["f"], b.inst["f"]))
    return CongProd(a, b)


def _cong_exp(a: Derivation, b: Derivation) -> Derivation:
    if is_refl(a) and is_refl(b):
        return refl(Exp(a.inst["f"], b.inst["f"]))
    return CongExp(a, b)


def _ax(ax: A, **inst: Expr) -> Axiom:
    return Axiom.of(ax, **inst)


def _sym(d: Derivation) -> Derivation:
    return d if is_refl(d) else Sym(d)


# list views of normal forms


def summands(e: Expr) -> list:
    out = []
    while isinstance(e, Sum):
        out.append(e.left)
        e = e.right
    out.append(e)
    return out


def atoms_of(m: Expr) -> list:
    if isinstance(m, One):
        return []
    out = []
    while isinstance(m, Prod):
        out.append(m.left)
        m = m.right
    out.append(m)
    return out


def mk_sum(items: list) -> Expr:
    return reduce(lambda acc, x: Sum(x, acc), reversed(items[:-1]), items[-1])


def mk_prod(items: list) -> Expr:
    if not items:
        return ONE
    return reduce(lambda acc, x: Prod(x, acc), reversed(items[:-1]), items[-1])


# sums


def _insert_sum(m: Expr, t: Expr):
    """Proof of m + t = sorted sum, for a monomial m and a sorted sum t."""
    if isinstance(t, Sum):
        n, rest = t.left, t.right
        if term_key(m) <= term_key(n):
            return Sum(m, t), refl(Sum(m, t))
        r, d = _insert_sum(m, rest)
        return Sum(n, r), _trans(
            Sym(_ax(A.SumAssoc, f=m, g=n, h=rest)),
            CongSum(_ax(A.SumComm, f=m, g=n), refl(rest)),
            _ax(A.SumAssoc, f=n, g=m, h=rest),
            _cong_sum(refl(n), d),
        )
    if term_key(m) <= term_key(t):
        return Sum(m, t), refl(Sum(m, t))
    return Sum(t, m), _ax(A.SumComm, f=m, g=t)


def _add(s: Expr, t: Expr):
    """Proof of s + t = merged normal form, for normal forms s and t."""
    if isinstance(s, Sum):
        m, rest = s.left, s.right
        r, d = _add(rest, t)
        r2, d2 = _insert_sum(m, r)
        return r2, _trans(_ax(A.SumAssoc, f=m, g=rest, h=t), _cong_sum(refl(m), d), d2)
    return _insert_sum(s, t)


# products


def _insert_atom(a: Expr, m: Expr):
    """Proof of a * m = sorted product, for an atom a and a sorted product m."""
    if isinstance(m, Prod):
        b, rest = m.left, m.right
        if term_key(a) <= term_key(b):
            return Prod(a, m), refl(Prod(a, m))
        r, d = _insert_atom(a, rest)
        return Prod(b, r), _trans(
            Sym(_ax(A.ProdAssoc, f=a, g=b, h=rest)),
            CongProd(_ax(A.ProdComm, f=a, g=b), refl(rest)),
            _ax(A.ProdAssoc, f=b, g=a, h=rest),
            _cong_prod(refl(b), d),
        )
    if term_key(a) <= term_key(m):
        return Prod(a, m), refl(Prod(a, m))
    return Prod(m, a), _ax(A.ProdComm, f=a, g=m)


def _mono_mul(m: Expr, n: Expr):
    if isinstance(m, One):
        return n, _ax(A.OneProd, f=n)
    if isinstance(n, One):
        return m, _trans(_ax(A.ProdComm, f=m, g=ONE), _ax(A.OneProd, f=m))
    if isinstance(m, Prod):
        a, rest = m.left, m.right
        r, d = _mono_mul(rest, n)
        r2, d2 = _insert_atom(a, r)
        return r2, _trans(_ax(A.ProdAssoc, f=a, g=rest, h=n), _cong_prod(refl(a), d), d2)
    return _insert_atom(m, n)


def _mul(s: Expr, t: Expr):
    """Proof of s * t = normal form, for normal forms s and t."""
    if isinstance(s, Sum):
        m, rest = s.left, s.right
        a, da = _mul(m, t)
        b, db = _mul(rest, t)
        r, dr = _add(a, b)
        return r, _trans(
            _ax(A.ProdComm, f=s, g=t),
            _ax(A.DistL, f=t, g=m, h=rest),
            CongSum(_ax(A.ProdComm, f=t, g=m), _ax(A.ProdComm, f=t, g=rest)),
            _cong_sum(da, db),
            dr,
        )
    if isinstance(t, Sum):
        n, rest = t.left, t.right
        a, da = _mul(s, n)
        b, db = _mul(s, rest)
        r, dr = _add(a, b)
        return r, _trans(_ax(A.DistL, f=s, g=n, h=rest), _cong_sum(da, db), dr)
    return _mono_mul(s, t)


# exponentiation


def _exp(b: Expr, e: Expr):
    """Proof of b ^ e = normal form, for normal forms b and e (b may also be a
    product of normal forms, as produced by base factoring)."""
    if isinstance(e, Sum):
        m, rest = e.left, e.right
        x, dx = _exp(b, m)
        y, dy = _exp(b, rest)
        r, dr = _mul(x, y)
        return r, _trans(_ax(A.ExpSum, f=b, g=m, h=rest), _cong_prod(dx, dy), dr)
    if isinstance(e, One):
        return b, _ax(A.ExpOne, f=b)
    if isinstance(b, One):
        return ONE, _ax(A.OneExp, f=e)
    if isinstance(b, Prod):
        f, g = b.left, b.right
        x, dx = _exp(f, e)
        y, dy = _exp(g, e)
        r, dr = _mul(x, y)
        return r, _trans(_ax(A.ExpProdBase, f=f, g=g, h=e), _cong_prod(dx, dy), dr)
    if isinstance(b, Exp):
        c, d = b.base, b.exponent
        m, dm = _mul(d, e)
        r, dr = _exp(c, m)
        return r, _trans(_ax(A.ExpExp, f=c, g=d, h=e), _cong_exp(refl(c), dm), dr)
    if isinstance(b, Sum):
        factors = factor_base(b)
        if factors is None:
            return Exp(b, e), refl(Exp(b, e))
        product = mk_prod(factors)
        back, d_back = _norm(product)
        if back != b:
            raise NormalizationError(f"factoring {render_expr(b)} did not multiply back")
        r, dr = _exp(product, e)
        return r, _trans(CongExp(Sym(d_back), refl(e)), dr)
    return Exp(b, e), refl(Exp(b, e))


@lru_cache(maxsize=None)
def factor_base(b: Expr) -> list | None:
    """Split a normal-form sum into normal-form factors, or None if it stays whole.

    The sum is read as a polynomial in its atoms and factored over the integers.
    Irreducible factors with positive coefficients (and prime constants and
    atoms) are split off one at a time, in a fixed order, as long as the
    remaining cofactor keeps non-negative coefficients; the cofactor is the last
    factor. The result depends only on the polynomial, so HSI-equal bases split
    identically.
    """
    monos = [atoms_of(m) for m in summands(b)]
    atoms = sorted({a for mono in monos for a in mono}, key=term_key)
    gens = sympy.symbols(f"a0:{len(atoms)}") if atoms else ()
    index = {a: i for i, a in enumerate(atoms)}
    poly_expr = sum(sympy.Mul(*[gens[index[a]] for a in mono]) for mono in monos)
    if not atoms:
        n = int(poly_expr)
        primes = [p for p, k in sorted(sympy.factorint(n).items()) for _ in range(k)]
        if len(primes) < 2:
            return None
        return [mk_sum([ONE] * p) for p in primes]

    poly = sympy.Poly(poly_expr, *gens, domain="ZZ")
    content, facs = poly.factor_list()
    pieces = []
    for p, k in sorted(sympy.factorint(int(content)).items()):
        pieces += [sympy.Poly(p, *gens, domain="ZZ")] * k
    for f, k in facs:
        pieces += [f] * k
    if len(pieces) < 2:
        return None

    def to_nf(p):
        monomials = []
        for exps, c in p.terms():
            mono = mk_prod(sorted((atoms[i] for i, k in enumerate(exps) for _ in range(k)), key=term_key))
            monomials += [mono] * int(c)
        return mk_sum(sorted(monomials, key=term_key))

    def nonneg(p):
        return all(c >= 0 for c in p.coeffs())

    nf_of = {}
    order = []
    for p in pieces:
        if p not in nf_of and nonneg(p):
            nf_of[p] = to_nf(p)
    order = sorted(nf_of, key=lambda p: term_key(nf_of[p]))

    remaining = list(pieces)
    split_off = []
    changed = True
    while changed and len(remaining) > 1:
        changed = False
        for p in order:
            if p not in remaining:
                continue
            rest = list(remaining)
            rest.remove(p)
            cofactor = reduce(lambda x, y: x * y, rest)
            if nonneg(cofactor):
                remaining = rest
                split_off.append(p)
                changed = True
                break
            if len(remaining) == 1:
                break
    factors = [nf_of[p] for p in split_off]
    factors.append(to_nf(reduce(lambda x, y: x * y, remaining)))
    if len(factors) < 2:
        return None
    return factors


_norm_cache: dict = {}


def _norm(e: Expr):
    hit = _norm_cache.get(e)
    if hit is not None:
        return hit
    if isinstance(e, (One, Var)):
        out = (e, refl(e))
    elif isinstance(e, Sum):
        a, da = _norm(e.left)
        b, db = _norm(e.right)
        r, dr = _add(a, b)
        out = (r, _trans(_cong_sum(da, db), dr))
    elif isinstance(e, Prod):
        a, da = _norm(e.left)
        b, db = _norm(e.right)
        r, dr = _mul(a, b)
        out = (r, _trans(_cong_prod(da, db), dr))
    elif isinstance(e, Exp):
        a, da = _norm(e.base)
        b, db = _norm(e.exponent)
        r, dr = _exp(a, b)
        out = (r, _trans(_cong_exp(da, db), dr))
    elif isinstance(e, TConst):
        raise NormalizationError("normalization works on expressions without t-constants")
    else:
        raise TypeError(f"not an expression: {e!r}")
    if len(_norm_cache) > 200_000:
        _norm_cache.clear()
    _norm_cache[e] = out
    return out


def normalize(f: Expr) -> tuple:
    """Return ``(normal, trace)`` where ``trace`` derives f = normal in HSI."""
    return _norm(f)


def prove_hsi(eq: Equation) -> Derivation | None:
    """A certificate for ``eq`` if both sides share a normal form, else None."""
    nl, dl = normalize(eq.lhs)
    nr, dr = normalize(eq.rhs)
    if nl != nr:
        return None
    if is_refl(dl) and is_refl(dr):
        return refl(eq.lhs)
    if is_refl(dr):
        return dl
    if is_refl(dl):
        return Sym(dr)
    return Trans(dl, Sym(dr))


# reflection of positive polynomials


def derive_t_reflect(p: Poly) -> Derivation:
    """Derivation of t_p = poly_reflect(p) from the t-constant axioms."""
    if p.is_zero() or any(c < 1 for c in p.coefficients()):
        raise ValueError(f"cannot reflect {p}: coefficients must be positive")
    monos = [Poly({m: c}) for m, c in p.terms]
    acc = monos[0]
    d = _reflect_monomial(acc)
    for m in monos[1:]:
        d = Trans(
            Axiom.of(A.T_Sum, z=TConst(acc), u=TConst(m)),
            CongSum(d, _reflect_monomial(m)),
        )
        acc = acc + m
    return d


def _reflect_numeral(c: int) -> Derivation:
    if c == 1:
        return Axiom.of(A.T_One)
    return Trans(
        Axiom.of(A.T_Sum, z=TConst(Poly.const(1)), u=TConst(Poly.const(c - 1))),
        CongSum(Axiom.of(A.T_One), _reflect_numeral(c - 1)),
    )


def _reflect_monomial(mono: Poly) -> Derivation:
    ((m, c),) = mono.terms
    pieces = [(Poly.var(v), Axiom.of(A.T_Var, x=Var(v))) for v, e in m for _ in range(e)]
    if c > 1 or not pieces:
        pieces.insert(0, (Poly.const(c), _reflect_numeral(c)))
    acc, d = pieces[0]
    for q, dq in pieces[1:]:
        d = Trans(Axiom.of(A.T_Prod, z=TConst(acc), u=TConst(q)), CongProd(d, dq))
        acc = acc * q
    if any(e > 1 for _, e in m):
        # x^2 and x*x name the same t-constant; record the identification
        d = Trans(Axiom.of(A.T_PolyEq, z=TConst(mono), u=TConst(acc)), d)
    return d


def reflect_equation(p: Poly) -> Equation:
    return Equation(TConst(p), poly_reflect(p))
