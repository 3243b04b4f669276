"""Structural operations on the syntax: free variables, capture-avoiding
substitution, alpha-equivalence, the shape erasure, and the
parameter/linear classification of types.
"""
from __future__ import annotations

from . import ast as A

PARAMETER = "parameter"
LINEAR = "linear"


# ---------------------------------------------------------------------------
# classification and shape
# ---------------------------------------------------------------------------

def classify(t: A.TypeExpr) -> str:
    """Decide whether a type belongs to the parameter-type grammar.

    Unit, the base types, and !A are parameter types outright; tensors,
    sums, lists, and parameter functions are parameter types when all
    their components are.  Simple types and -o are state-level.
    """
    match t:
        case A.Unit() | A.Base() | A.Bang():
            return PARAMETER
        case A.ListOf(elem):
            return classify(elem)
        case A.LinTensor(_, left, right) | A.Sum(left, right):
            if classify(left) == PARAMETER and classify(right) == PARAMETER:
                return PARAMETER
            return LINEAR
        case A.ParamPi(_, domain, codomain):
            if classify(domain) == PARAMETER and classify(codomain) == PARAMETER:
                return PARAMETER
            return LINEAR
        case A.See() | A.At() | A.Safe() | A.LinPi():
            return LINEAR
        case _:
            raise TypeError(f"not a type node: {t!r}")


def is_parameter_type(t: A.TypeExpr) -> bool:
    return classify(t) == PARAMETER


def shape(t: A.TypeExpr) -> A.TypeExpr:
    """Erase every simple type to Unit; -o becomes the parameter arrow.

    The result is always a parameter type, and shape is idempotent.
    """
    match t:
        case A.See() | A.At() | A.Safe():
            return A.Unit()
        case A.Unit() | A.Base():
            return t
        case A.ListOf(elem):
            return A.ListOf(shape(elem))
        case A.Bang(body):
            return A.Bang(shape(body))
        case A.LinPi(binder, domain, codomain):
            return A.ParamPi(binder, shape(domain), shape(codomain))
        case A.LinTensor(binder, left, right):
            return A.LinTensor(binder, shape(left), shape(right))
        case A.ParamPi(binder, domain, codomain):
            return A.ParamPi(binder, shape(domain), shape(codomain))
        case A.Sum(left, right):
            return A.Sum(shape(left), shape(right))
        case _:
            raise TypeError(f"not a type node: {t!r}")


def is_param_term(m: A.TermExpr) -> bool:
    """Does `m` fit the parameter-term grammar?

    Parameter terms are the only terms that may be substituted into
    types.  `lift M` is a parameter term for any M (the body stays a
    suspended state-level computation), as are literals and Nat
    arithmetic.
    """
    match m:
        case A.UnitVal() | A.Var() | A.Lift() | A.NatLit() | A.RealLit() \
                | A.PointLit():
            return True
        case A.LamPrime(_, body) | A.ForcePrime(body):
            return is_param_term(body)
        case A.AppAt(fn, arg) | A.NatOp(_, fn, arg):
            return is_param_term(fn) and is_param_term(arg)
        case A.Pair(left, right):
            return is_param_term(left) and is_param_term(right)
        case A.LetPair(_, _, scrut, body):
            return is_param_term(scrut) and is_param_term(body)
        case A.ListLit(items):
            return all(is_param_term(i) for i in items)
        case A.Ann(term, _):
            return is_param_term(term)
        case _:
            return False


# ---------------------------------------------------------------------------
# free variables
# ---------------------------------------------------------------------------

def term_free_vars(m: A.TermExpr) -> set[str]:
    match m:
        case A.Var(name):
            return {name}
        case A.UnitVal() | A.Hole() | A.NatLit() | A.RealLit() | A.PointLit():
            return set()
        case A.Lam(binder, body) | A.LamPrime(binder, body):
            return term_free_vars(body) - {binder}
        case A.App(fn, arg) | A.AppAt(fn, arg) | A.NatOp(_, fn, arg):
            return term_free_vars(fn) | term_free_vars(arg)
        case A.Force(body) | A.ForcePrime(body) | A.Lift(body) | A.Inl(body) \
                | A.Inr(body):
            return term_free_vars(body)
        case A.Pair(left, right):
            return term_free_vars(left) | term_free_vars(right)
        case A.LetPair(x, y, scrut, body):
            return term_free_vars(scrut) | (term_free_vars(body) - {x, y})
        case A.Case(scrut, lx, lb, rx, rb):
            return (term_free_vars(scrut)
                    | (term_free_vars(lb) - {lx})
                    | (term_free_vars(rb) - {rx}))
        case A.ListLit(items):
            out: set[str] = set()
            for i in items:
                out |= term_free_vars(i)
            return out
        case A.Ann(term, ty):
            return term_free_vars(term) | type_free_vars(ty)
        case _:
            raise TypeError(f"not a term node: {m!r}")


def type_free_vars(t: A.TypeExpr) -> set[str]:
    match t:
        case A.Unit() | A.Base():
            return set()
        case A.ListOf(elem) | A.Bang(elem):
            return type_free_vars(elem)
        case A.See(arg) | A.At(arg) | A.Safe(arg):
            return term_free_vars(arg)
        case A.LinPi(binder, domain, codomain) | A.ParamPi(binder, domain, codomain):
            return type_free_vars(domain) | (type_free_vars(codomain) - {binder})
        case A.LinTensor(binder, left, right):
            return type_free_vars(left) | (type_free_vars(right) - {binder})
        case A.Sum(left, right):
            return type_free_vars(left) | type_free_vars(right)
        case _:
            raise TypeError(f"not a type node: {t!r}")


_FRESH = 0


def fresh_name(base: str, avoid: set[str]) -> str:
    global _FRESH
    base = base.rstrip("0123456789_") or "x"
    while True:
        _FRESH += 1
        cand = f"{base}_{_FRESH}"
        if cand not in avoid:
            return cand


# ---------------------------------------------------------------------------
# substitution
# ---------------------------------------------------------------------------

def _subst_binder(binder: str, body, name: str, val: A.TermExpr, sub):
    """Rename `binder` when it would capture a free variable of `val`."""
    if binder == name or binder == "_":
        return binder, body if binder == name else sub(body, name, val)
    if binder in term_free_vars(val):
        avoid = term_free_vars(val) | {name}
        avoid |= (term_free_vars(body) if isinstance(body, A.TermExpr)
                  else type_free_vars(body))
        nb = fresh_name(binder, avoid)
        body = (subst_term(body, binder, A.Var(nb))
                if isinstance(body, A.TermExpr)
                else subst_type(body, binder, A.Var(nb)))
        return nb, sub(body, name, val)
    return binder, sub(body, name, val)


def subst_term(m: A.TermExpr, name: str, val: A.TermExpr) -> A.TermExpr:
    match m:
        case A.Var(n):
            return val if n == name else m
        case A.UnitVal() | A.Hole() | A.NatLit() | A.RealLit() | A.PointLit():
            return m
        case A.Lam(binder, body):
            nb, body = _subst_binder(binder, body, name, val, subst_term)
            return A.Lam(nb, body)
        case A.LamPrime(binder, body):
            nb, body = _subst_binder(binder, body, name, val, subst_term)
            return A.LamPrime(nb, body)
        case A.App(fn, arg):
            return A.App(subst_term(fn, name, val), subst_term(arg, name, val))
        case A.AppAt(fn, arg):
            return A.AppAt(subst_term(fn, name, val), subst_term(arg, name, val))
        case A.NatOp(op, l, r):
            return A.NatOp(op, subst_term(l, name, val), subst_term(r, name, val))
        case A.Force(body):
            return A.Force(subst_term(body, name, val))
        case A.ForcePrime(body):
            return A.ForcePrime(subst_term(body, name, val))
        case A.Lift(body):
            return A.Lift(subst_term(body, name, val))
        case A.Inl(body):
            return A.Inl(subst_term(body, name, val))
        case A.Inr(body):
            return A.Inr(subst_term(body, name, val))
        case A.Pair(l, r):
            return A.Pair(subst_term(l, name, val), subst_term(r, name, val))
        case A.LetPair(x, y, scrut, body):
            scrut = subst_term(scrut, name, val)
            if name in (x, y):
                return A.LetPair(x, y, scrut, body)
            avoid = term_free_vars(val)
            if x in avoid or y in avoid:
                all_avoid = avoid | term_free_vars(body) | {name, x, y}
                nx = fresh_name(x, all_avoid) if x in avoid else x
                ny = fresh_name(y, all_avoid | {nx}) if y in avoid else y
                if nx != x:
                    body = subst_term(body, x, A.Var(nx))
                if ny != y:
                    body = subst_term(body, y, A.Var(ny))
                x, y = nx, ny
            return A.LetPair(x, y, scrut, subst_term(body, name, val))
        case A.Case(scrut, lx, lb, rx, rb):
            scrut = subst_term(scrut, name, val)
            if lx != name:
                nlx, lb = _subst_binder(lx, lb, name, val, subst_term)
                lx = nlx
            if rx != name:
                nrx, rb = _subst_binder(rx, rb, name, val, subst_term)
                rx = nrx
            return A.Case(scrut, lx, lb, rx, rb)
        case A.ListLit(items):
            return A.ListLit(tuple(subst_term(i, name, val) for i in items))
        case A.Ann(term, ty):
            return A.Ann(subst_term(term, name, val), subst_type(ty, name, val))
        case _:
            raise TypeError(f"not a term node: {m!r}")


def subst_type(t: A.TypeExpr, name: str, val: A.TermExpr) -> A.TypeExpr:
    match t:
        case A.Unit() | A.Base():
            return t
        case A.ListOf(elem):
            return A.ListOf(subst_type(elem, name, val))
        case A.Bang(body):
            return A.Bang(subst_type(body, name, val))
        case A.See(arg):
            return A.See(subst_term(arg, name, val))
        case A.At(arg):
            return A.At(subst_term(arg, name, val))
        case A.Safe(arg):
            # Safe is opaque: ordinary term substitution, no shape scrutiny.
            return A.Safe(subst_term(arg, name, val))
        case A.LinPi(binder, domain, codomain):
            domain = subst_type(domain, name, val)
            nb, codomain = _subst_binder(binder, codomain, name, val, subst_type)
            return A.LinPi(nb, domain, codomain)
        case A.ParamPi(binder, domain, codomain):
            domain = subst_type(domain, name, val)
            nb, codomain = _subst_binder(binder, codomain, name, val, subst_type)
            return A.ParamPi(nb, domain, codomain)
        case A.LinTensor(binder, left, right):
            left = subst_type(left, name, val)
            nb, right = _subst_binder(binder, right, name, val, subst_type)
            return A.LinTensor(nb, left, right)
        case A.Sum(left, right):
            return A.Sum(subst_type(left, name, val), subst_type(right, name, val))
        case _:
            raise TypeError(f"not a type node: {t!r}")


# ---------------------------------------------------------------------------
# alpha-equivalence
# ---------------------------------------------------------------------------

def _alpha_term(a: A.TermExpr, b: A.TermExpr, ea: dict, eb: dict) -> bool:
    if type(a) is not type(b):
        return False
    match a, b:
        case A.Var(n1), A.Var(n2):
            return ea.get(n1, ("free", n1)) == eb.get(n2, ("free", n2))
        case (A.UnitVal(), A.UnitVal()):
            return True
        case A.Hole(n1), A.Hole(n2):
            return n1 == n2
        case A.NatLit(v1), A.NatLit(v2):
            return v1 == v2
        case A.RealLit(v1), A.RealLit(v2):
            return v1 == v2
        case A.PointLit(x1, y1), A.PointLit(x2, y2):
            return x1 == x2 and y1 == y2
        case (A.Lam(x1, b1), A.Lam(x2, b2)) | (A.LamPrime(x1, b1), A.LamPrime(x2, b2)):
            lvl = ("bound", len(ea))
            return _alpha_term(b1, b2, {**ea, x1: lvl}, {**eb, x2: lvl})
        case (A.App(f1, a1), A.App(f2, a2)) | (A.AppAt(f1, a1), A.AppAt(f2, a2)) \
                | (A.Pair(f1, a1), A.Pair(f2, a2)):
            return _alpha_term(f1, f2, ea, eb) and _alpha_term(a1, a2, ea, eb)
        case A.NatOp(o1, l1, r1), A.NatOp(o2, l2, r2):
            return o1 == o2 and _alpha_term(l1, l2, ea, eb) and _alpha_term(r1, r2, ea, eb)
        case (A.Force(b1), A.Force(b2)) | (A.ForcePrime(b1), A.ForcePrime(b2)) \
                | (A.Lift(b1), A.Lift(b2)) | (A.Inl(b1), A.Inl(b2)) \
                | (A.Inr(b1), A.Inr(b2)):
            return _alpha_term(b1, b2, ea, eb)
        case A.LetPair(x1, y1, s1, b1), A.LetPair(x2, y2, s2, b2):
            if not _alpha_term(s1, s2, ea, eb):
                return False
            l1, l2 = ("bound", len(ea)), ("bound", len(ea) + 1)
            return _alpha_term(b1, b2, {**ea, x1: l1, y1: l2},
                               {**eb, x2: l1, y2: l2})
        case A.Case(s1, lx1, lb1, rx1, rb1), A.Case(s2, lx2, lb2, rx2, rb2):
            if not _alpha_term(s1, s2, ea, eb):
                return False
            lvl = ("bound", len(ea))
            return (_alpha_term(lb1, lb2, {**ea, lx1: lvl}, {**eb, lx2: lvl})
                    and _alpha_term(rb1, rb2, {**ea, rx1: lvl}, {**eb, rx2: lvl}))
        case A.ListLit(i1), A.ListLit(i2):
            return len(i1) == len(i2) and all(
                _alpha_term(a_, b_, ea, eb) for a_, b_ in zip(i1, i2))
        case A.Ann(t1, ty1), A.Ann(t2, ty2):
            return _alpha_term(t1, t2, ea, eb) and _alpha_type(ty1, ty2, ea, eb)
        case _:
            return False


def _alpha_type(a: A.TypeExpr, b: A.TypeExpr, ea: dict, eb: dict) -> bool:
    if type(a) is not type(b):
        return False
    match a, b:
        case (A.Unit(), A.Unit()):
            return True
        case A.Base(n1), A.Base(n2):
            return n1 == n2
        case (A.ListOf(e1), A.ListOf(e2)) | (A.Bang(e1), A.Bang(e2)):
            return _alpha_type(e1, e2, ea, eb)
        case (A.See(t1), A.See(t2)) | (A.At(t1), A.At(t2)) | (A.Safe(t1), A.Safe(t2)):
            return _alpha_term(t1, t2, ea, eb)
        case (A.LinPi(x1, d1, c1), A.LinPi(x2, d2, c2)) \
                | (A.ParamPi(x1, d1, c1), A.ParamPi(x2, d2, c2)) \
                | (A.LinTensor(x1, d1, c1), A.LinTensor(x2, d2, c2)):
            if not _alpha_type(d1, d2, ea, eb):
                return False
            lvl = ("bound", len(ea))
            return _alpha_type(c1, c2, {**ea, x1: lvl}, {**eb, x2: lvl})
        case A.Sum(l1, r1), A.Sum(l2, r2):
            return _alpha_type(l1, l2, ea, eb) and _alpha_type(r1, r2, ea, eb)
        case _:
            return False


def alpha_eq_term(a: A.TermExpr, b: A.TermExpr) -> bool:
    return _alpha_term(a, b, {}, {})


def alpha_eq_type(a: A.TypeExpr, b: A.TypeExpr) -> bool:
    return _alpha_type(a, b, {}, {})
