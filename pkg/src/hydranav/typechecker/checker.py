"""Bidirectional usage-indexed checking.

The discipline, in brief:

* Synthesis (`infer_term`) covers variables, both applications, force and
  force', lift, annotations, literals, pairs, and let-pair; everything
  else needs an expected type.
* Every judgment returns a usage vector over the ambient context.  The
  public entry points validate the result against the declared budgets
  with `fits`; an extra unused hypothesis is therefore always harmless.
* Binders introduced by \\, let-pair, and case carry budget 1 and, when
  their type is state-level, must be consumed exactly once: both reuse
  and silent discard of a linear resource are errors.  \\' binders carry
  budget w.
* `lift M` requires every variable M consumes to have budget w, and
  scales M's usage by w: the thunk may be forced any number of times.
* Types may only depend on parameter-level data.  Substituting a term
  into a dependent position demands a parameter term, except under Safe,
  which is an opaque tag and swallows anything verbatim.
* Definitional equality is alpha-equivalence after normalizing
  parameter-level redexes (beta for @, force' of lift, Nat arithmetic on
  literals).  State-level terms are never reduced.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from ..syntax import ast as A
from ..syntax.ast import Context, Index, Loc
from ..syntax.ops import (
    LINEAR, PARAMETER, alpha_eq_type, classify, fresh_name, is_param_term,
    subst_term, subst_type, term_free_vars,
)
from .errors import (
    BRANCH_USAGE_MISMATCH, CANNOT_INFER, HOLE_NOT_ALLOWED, LIFT_OF_LINEAR,
    LINEARITY_VIOLATION, NOT_A_FUNCTION, PARAMETER_CONTEXT_VIOLATION,
    SHAPE_VIOLATION, TYPE_MISMATCH, UNBOUND_VARIABLE, Diagnostic,
    TypeCheckError,
)
from .indices import (
    MANY, ONE, ZERO, UsageVector, ctx_add, fits, single_usage, usage_max,
    usage_scale, zero_usage,
)

NAT = A.Base("Nat")
REAL = A.Base("Real")
POINT = A.Base("Point")


@dataclass
class HoleInfo:
    name: str
    goal: A.TypeExpr
    context: Context
    loc: Loc | None


@dataclass
class Judgment:
    context: Context
    term: A.TermExpr
    type: A.TypeExpr
    usage: UsageVector


@dataclass
class _State:
    allow_holes: bool = False
    holes: list[HoleInfo] = field(default_factory=list)


# ---------------------------------------------------------------------------
# parameter-level normalization and type equality
# ---------------------------------------------------------------------------

def normalize_param_term(m: A.TermExpr) -> A.TermExpr:
    """Contract parameter-level redexes; never beta-reduces \\ or case."""
    match m:
        case A.NatOp(op, l, r):
            l, r = normalize_param_term(l), normalize_param_term(r)
            if isinstance(l, A.NatLit) and isinstance(r, A.NatLit):
                v = l.value + r.value if op == "+" else max(0, l.value - r.value)
                return A.NatLit(v)
            return A.NatOp(op, l, r)
        case A.AppAt(fn, arg):
            fn, arg = normalize_param_term(fn), normalize_param_term(arg)
            if isinstance(fn, A.LamPrime):
                return normalize_param_term(subst_term(fn.body, fn.binder, arg))
            return A.AppAt(fn, arg)
        case A.ForcePrime(body):
            body = normalize_param_term(body)
            if isinstance(body, A.Lift):
                return body.body
            return A.ForcePrime(body)
        case A.LamPrime(x, body):
            return A.LamPrime(x, normalize_param_term(body))
        case A.Lift(body):
            return A.Lift(normalize_param_term(body))
        case A.Pair(l, r):
            return A.Pair(normalize_param_term(l), normalize_param_term(r))
        case A.ListLit(items):
            return A.ListLit(tuple(normalize_param_term(i) for i in items))
        case A.Ann(term, _):
            return normalize_param_term(term)
        case _:
            return m


def _normalize_type(t: A.TypeExpr) -> A.TypeExpr:
    match t:
        case A.See(arg):
            return A.See(normalize_param_term(arg))
        case A.At(arg):
            return A.At(normalize_param_term(arg))
        case A.Safe(_):
            return t  # opaque: the subject is compared verbatim
        case A.ListOf(e):
            return A.ListOf(_normalize_type(e))
        case A.Bang(b):
            return A.Bang(_normalize_type(b))
        case A.LinPi(x, d, c):
            return A.LinPi(x, _normalize_type(d), _normalize_type(c))
        case A.ParamPi(x, d, c):
            return A.ParamPi(x, _normalize_type(d), _normalize_type(c))
        case A.LinTensor(x, l, r):
            return A.LinTensor(x, _normalize_type(l), _normalize_type(r))
        case A.Sum(l, r):
            return A.Sum(_normalize_type(l), _normalize_type(r))
        case _:
            return t


def types_equal(a: A.TypeExpr, b: A.TypeExpr) -> bool:
    return alpha_eq_type(_normalize_type(a), _normalize_type(b))


# ---------------------------------------------------------------------------
# dependency guard
# ---------------------------------------------------------------------------

def _free_outside_safe(t: A.TypeExpr) -> set[str]:
    """Term variables free in a type, ignoring opaque Safe subjects."""
    match t:
        case A.Unit() | A.Base() | A.Safe(_):
            return set()
        case A.ListOf(e) | A.Bang(e):
            return _free_outside_safe(e)
        case A.See(arg) | A.At(arg):
            return term_free_vars(arg)
        case A.LinPi(x, d, c) | A.ParamPi(x, d, c) | A.LinTensor(x, d, c):
            return _free_outside_safe(d) | (_free_outside_safe(c) - {x})
        case A.Sum(l, r):
            return _free_outside_safe(l) | _free_outside_safe(r)
        case _:
            raise TypeError(f"not a type node: {t!r}")


def _subst_dependent(body: A.TypeExpr, binder: str, arg: A.TermExpr,
                     loc: Loc | None) -> A.TypeExpr:
    """Substitute `arg` for `binder` in a dependent codomain.

    Only the shape of a term may flow into a type: if the binder occurs
    outside Safe positions, the argument must be a parameter term.
    """
    if binder == "_":
        return body
    if binder in _free_outside_safe(body) and not is_param_term(arg):
        raise TypeCheckError(
            SHAPE_VIOLATION,
            "a type depends on this argument, but it is a state-level term; "
            "only parameter-level data may appear in types",
            loc)
    return subst_type(body, binder, arg)


# ---------------------------------------------------------------------------
# the checker
# ---------------------------------------------------------------------------

def _bind(ctx: Context, name: str, ty: A.TypeExpr, budget: Index,
          body: A.TermExpr) -> tuple[Context, str, A.TermExpr]:
    """Extend the context, renaming the binder when it shadows."""
    if name != "_" and name in ctx:
        nb = fresh_name(name, set(ctx.names()) | term_free_vars(body))
        body = subst_term(body, name, A.Var(nb))
        name = nb
    if name == "_":
        name = fresh_name("wild", set(ctx.names()))
    return ctx.extend(name, ty, budget), name, body


def _exit_binder(name: str, ty: A.TypeExpr, budget: Index,
                 usage: UsageVector, loc: Loc | None) -> UsageVector:
    j = usage.pop(name)
    if not fits(j, budget):
        raise TypeCheckError(
            LINEARITY_VIOLATION,
            f"variable {name!r}: declared budget {budget}, computed usage {j}",
            loc)
    if budget is ONE and j is ZERO and classify(ty) == LINEAR:
        raise TypeCheckError(
            LINEARITY_VIOLATION,
            f"variable {name!r}: linear resource of type is discarded "
            f"(budget 1, computed usage 0)",
            loc)
    return usage


def _lift_guard(ctx: Context, usage: UsageVector, loc: Loc | None) -> UsageVector:
    for name, j in usage.items():
        if j is ZERO:
            continue
        entry = ctx.lookup(name)
        if entry is not None and entry.index is not MANY:
            raise TypeCheckError(
                LIFT_OF_LINEAR,
                f"lift captures {name!r} at budget {entry.index}; a lifted "
                f"term may only consume unrestricted (w) hypotheses",
                loc)
    return usage_scale(MANY, usage)


def _infer(ctx: Context, m: A.TermExpr, st: _State) -> tuple[A.TypeExpr, UsageVector]:
    match m:
        case A.Var(name):
            entry = ctx.lookup(name)
            if entry is None:
                raise TypeCheckError(UNBOUND_VARIABLE,
                                     f"unbound variable {name!r}", m.loc)
            return entry.type, single_usage(ctx, name)
        case A.UnitVal():
            return A.Unit(), zero_usage(ctx)
        case A.NatLit():
            return NAT, zero_usage(ctx)
        case A.RealLit():
            return REAL, zero_usage(ctx)
        case A.PointLit():
            return POINT, zero_usage(ctx)
        case A.ListLit(items):
            if not items:
                raise TypeCheckError(
                    CANNOT_INFER, "empty list literal needs an annotation", m.loc)
            elem_ty, usage = _infer(ctx, items[0], st)
            for item in items[1:]:
                usage = ctx_add(usage, _check(ctx, item, elem_ty, st))
            return A.ListOf(elem_ty), usage
        case A.NatOp(_, l, r):
            u = ctx_add(_check(ctx, l, NAT, st), _check(ctx, r, NAT, st))
            return NAT, u
        case A.App(fn, arg):
            fn_ty, fn_u = _infer(ctx, fn, st)
            fn_ty = _normalize_type(fn_ty)
            if not isinstance(fn_ty, A.LinPi):
                raise TypeCheckError(
                    NOT_A_FUNCTION,
                    f"application head has type "
                    f"'{_show(fn_ty)}', not a linear function", m.loc)
            arg_u = _check(ctx, arg, fn_ty.domain, st)
            res = _subst_dependent(fn_ty.codomain, fn_ty.binder, arg, m.loc)
            return res, ctx_add(fn_u, arg_u)
        case A.AppAt(fn, arg):
            fn_ty, fn_u = _infer(ctx, fn, st)
            fn_ty = _normalize_type(fn_ty)
            if not isinstance(fn_ty, A.ParamPi):
                raise TypeCheckError(
                    NOT_A_FUNCTION,
                    f"'@' head has type '{_show(fn_ty)}', not a parameter "
                    f"function", m.loc)
            arg_u = _check(ctx, arg, fn_ty.domain, st)
            res = _subst_dependent(fn_ty.codomain, fn_ty.binder, arg, m.loc)
            return res, ctx_add(fn_u, arg_u)
        case A.Force(body) | A.ForcePrime(body):
            body_ty, u = _infer(ctx, body, st)
            body_ty = _normalize_type(body_ty)
            if not isinstance(body_ty, A.Bang):
                raise TypeCheckError(
                    TYPE_MISMATCH,
                    f"force expects a !-type, found '{_show(body_ty)}'", m.loc)
            return body_ty.body, u
        case A.Lift(body):
            body_ty, u = _infer(ctx, body, st)
            return A.Bang(body_ty), _lift_guard(ctx, u, m.loc)
        case A.Pair(l, r):
            lt, lu = _infer(ctx, l, st)
            rt, ru = _infer(ctx, r, st)
            return A.LinTensor("_", lt, rt), ctx_add(lu, ru)
        case A.LetPair(x, y, scrut, body):
            res_ty, usage = _letpair(ctx, m, st, expected=None)
            return res_ty, usage
        case A.Ann(term, ty):
            check_type(ctx, ty, st)
            return ty, _check(ctx, term, ty, st)
        case A.Hole(name):
            raise TypeCheckError(
                CANNOT_INFER, f"hole ?{name} needs an expected type", m.loc)
        case _:
            raise TypeCheckError(
                CANNOT_INFER,
                f"cannot synthesize a type for this term; add an annotation",
                m.loc)


def _letpair(ctx: Context, m: A.LetPair, st: _State,
             expected: A.TypeExpr | None):
    scrut_ty, scrut_u = _infer(ctx, m.scrutinee, st)
    scrut_ty = _normalize_type(scrut_ty)
    if not isinstance(scrut_ty, A.LinTensor):
        raise TypeCheckError(
            TYPE_MISMATCH,
            f"let-pair scrutinee has type '{_show(scrut_ty)}', not a tensor",
            m.loc)
    body = m.body
    # components bind at the scrutinee's budget (consumed once here)
    ctx1, x, body = _bind(ctx, m.left_name, scrut_ty.left, ONE, body)
    right_ty = subst_type(scrut_ty.right, scrut_ty.binder, A.Var(x)) \
        if scrut_ty.binder != "_" else scrut_ty.right
    ctx2, y, body = _bind(ctx1, m.right_name, right_ty, ONE, body)
    if expected is None:
        res_ty, body_u = _infer(ctx2, body, st)
        escapees = _free_outside_safe(res_ty) & {x, y}
        if escapees:
            raise TypeCheckError(
                SHAPE_VIOLATION,
                f"inferred type mentions pair component(s) "
                f"{', '.join(sorted(escapees))} that leave scope", m.loc)
    else:
        res_ty = expected
        body_u = _check(ctx2, body, expected, st)
    body_u = _exit_binder(y, right_ty, ONE, body_u, m.loc)
    body_u = _exit_binder(x, scrut_ty.left, ONE, body_u, m.loc)
    return res_ty, ctx_add(scrut_u, body_u)


def _check(ctx: Context, m: A.TermExpr, a: A.TypeExpr, st: _State) -> UsageVector:
    a_norm = _normalize_type(a)
    match m:
        case A.Lam(x, body):
            if isinstance(a_norm, A.ParamPi):
                raise TypeCheckError(
                    TYPE_MISMATCH,
                    "state-level \\ checked against a parameter function "
                    "type; use \\' for ->", m.loc)
            if not isinstance(a_norm, A.LinPi):
                raise TypeCheckError(
                    TYPE_MISMATCH,
                    f"\\-abstraction checked against '{_show(a_norm)}'", m.loc)
            ctx1, x, body = _bind(ctx, x, a_norm.domain, ONE, body)
            cod = (subst_type(a_norm.codomain, a_norm.binder, A.Var(x))
                   if a_norm.binder != "_" else a_norm.codomain)
            u = _check(ctx1, body, cod, st)
            return _exit_binder(x, a_norm.domain, ONE, u, m.loc)
        case A.LamPrime(x, body):
            if isinstance(a_norm, A.LinPi):
                raise TypeCheckError(
                    TYPE_MISMATCH,
                    "parameter-level \\' checked against a linear function "
                    "type; use \\ for -o", m.loc)
            if not isinstance(a_norm, A.ParamPi):
                raise TypeCheckError(
                    TYPE_MISMATCH,
                    f"\\'-abstraction checked against '{_show(a_norm)}'", m.loc)
            if classify(a_norm.domain) != PARAMETER:
                raise TypeCheckError(
                    PARAMETER_CONTEXT_VIOLATION,
                    f"parameter binder {x!r} would carry the state-level type "
                    f"'{_show(a_norm.domain)}'", m.loc)
            ctx1, x, body = _bind(ctx, x, a_norm.domain, MANY, body)
            cod = (subst_type(a_norm.codomain, a_norm.binder, A.Var(x))
                   if a_norm.binder != "_" else a_norm.codomain)
            u = _check(ctx1, body, cod, st)
            return _exit_binder(x, a_norm.domain, MANY, u, m.loc)
        case A.Inl(body):
            if not isinstance(a_norm, A.Sum):
                raise TypeCheckError(
                    TYPE_MISMATCH, f"inl checked against '{_show(a_norm)}'", m.loc)
            return _check(ctx, body, a_norm.left, st)
        case A.Inr(body):
            if not isinstance(a_norm, A.Sum):
                raise TypeCheckError(
                    TYPE_MISMATCH, f"inr checked against '{_show(a_norm)}'", m.loc)
            return _check(ctx, body, a_norm.right, st)
        case A.Case(scrut, lx, lb, rx, rb):
            scrut_ty, scrut_u = _infer(ctx, scrut, st)
            scrut_ty = _normalize_type(scrut_ty)
            if not isinstance(scrut_ty, A.Sum):
                raise TypeCheckError(
                    TYPE_MISMATCH,
                    f"case scrutinee has type '{_show(scrut_ty)}', not a sum",
                    m.loc)
            lctx, lxn, lb = _bind(ctx, lx, scrut_ty.left, ONE, lb)
            lu = _check(lctx, lb, a, st)
            lu = _exit_binder(lxn, scrut_ty.left, ONE, lu, m.loc)
            rctx, rxn, rb = _bind(ctx, rx, scrut_ty.right, ONE, rb)
            ru = _check(rctx, rb, a, st)
            ru = _exit_binder(rxn, scrut_ty.right, ONE, ru, m.loc)
            for entry in ctx.entries:
                if classify(entry.type) == LINEAR and lu[entry.name] != ru[entry.name]:
                    raise TypeCheckError(
                        BRANCH_USAGE_MISMATCH,
                        f"branches disagree on linear variable "
                        f"{entry.name!r}: inl uses it {lu[entry.name]}, "
                        f"inr uses it {ru[entry.name]}", m.loc)
            return ctx_add(scrut_u, usage_max(lu, ru))
        case A.Pair(l, r):
            if not isinstance(a_norm, A.LinTensor):
                raise TypeCheckError(
                    TYPE_MISMATCH, f"pair checked against '{_show(a_norm)}'", m.loc)
            lu = _check(ctx, l, a_norm.left, st)
            right_ty = _subst_dependent(a_norm.right, a_norm.binder, l, m.loc)
            ru = _check(ctx, r, right_ty, st)
            return ctx_add(lu, ru)
        case A.LetPair():
            _, usage = _letpair(ctx, m, st, expected=a)
            return usage
        case A.Lift(body):
            if not isinstance(a_norm, A.Bang):
                raise TypeCheckError(
                    TYPE_MISMATCH, f"lift checked against '{_show(a_norm)}'", m.loc)
            u = _check(ctx, body, a_norm.body, st)
            return _lift_guard(ctx, u, m.loc)
        case A.ListLit(items):
            if isinstance(a_norm, A.ListOf):
                u = zero_usage(ctx)
                for item in items:
                    u = ctx_add(u, _check(ctx, item, a_norm.elem, st))
                return u
            raise TypeCheckError(
                TYPE_MISMATCH, f"list literal checked against '{_show(a_norm)}'",
                m.loc)
        case A.Hole(name):
            if not st.allow_holes:
                raise TypeCheckError(
                    HOLE_NOT_ALLOWED,
                    f"hole ?{name} (re-run with --allow-holes to accept)", m.loc)
            st.holes.append(HoleInfo(name, a, ctx, m.loc))
            return zero_usage(ctx)
        case _:
            inferred, u = _infer(ctx, m, st)
            if not types_equal(inferred, a):
                raise TypeCheckError(
                    TYPE_MISMATCH,
                    f"expected '{_show(a)}', found '{_show(inferred)}'", m.loc)
            return u


# ---------------------------------------------------------------------------
# type well-formedness
# ---------------------------------------------------------------------------

def check_type(ctx: Context, t: A.TypeExpr, st: _State | None = None) -> None:
    st = st or _State(allow_holes=False)
    match t:
        case A.Unit() | A.Base():
            return
        case A.ListOf(e) | A.Bang(e):
            check_type(ctx, e, st)
        case A.See(arg):
            _check_type_arg(ctx, arg, NAT, st, t.loc)
        case A.At(arg):
            _check_type_arg(ctx, arg, POINT, st, t.loc)
        case A.Safe(arg):
            for name in sorted(term_free_vars(arg)):
                if name not in ctx:
                    raise TypeCheckError(
                        UNBOUND_VARIABLE,
                        f"Safe refers to unknown controller {name!r}", t.loc)
        case A.LinPi(x, d, c) | A.LinTensor(x, d, c):
            check_type(ctx, d, st)
            ctx1 = ctx if x == "_" else _bind_type_var(ctx, x, d)
            check_type(ctx1, c, st)
        case A.ParamPi(x, d, c):
            check_type(ctx, d, st)
            if classify(d) != PARAMETER:
                raise TypeCheckError(
                    PARAMETER_CONTEXT_VIOLATION,
                    f"'->' takes a parameter type on the left, found "
                    f"state-level '{_show(d)}' (index 1 on a non-parameter "
                    f"type in a parameter context)", t.loc)
            ctx1 = ctx if x == "_" else _bind_type_var(ctx, x, d)
            check_type(ctx1, c, st)
        case A.Sum(l, r):
            check_type(ctx, l, st)
            check_type(ctx, r, st)
        case _:
            raise TypeError(f"not a type node: {t!r}")


def _bind_type_var(ctx: Context, name: str, ty: A.TypeExpr) -> Context:
    if name in ctx:
        # shadowing inside a type: keep the outer entry, the inner one wins
        entries = tuple(e for e in ctx.entries if e.name != name)
        ctx = Context(entries)
    return ctx.extend(name, ty, ZERO)


def _check_type_arg(ctx: Context, arg: A.TermExpr, sort: A.TypeExpr,
                    st: _State, loc: Loc | None) -> None:
    if not is_param_term(arg):
        raise TypeCheckError(
            SHAPE_VIOLATION,
            f"type argument must be a parameter term", arg.loc or loc)
    _check(ctx, arg, sort, st)  # usage in type positions is erased


# ---------------------------------------------------------------------------
# public entry points
# ---------------------------------------------------------------------------

def _validate_ambient(ctx: Context, usage: UsageVector, loc: Loc | None):
    for entry in ctx.entries:
        j = usage[entry.name]
        if not fits(j, entry.index):
            raise TypeCheckError(
                LINEARITY_VIOLATION,
                f"variable {entry.name!r}: declared budget {entry.index}, "
                f"computed usage {j}", loc)


def infer_term(ctx: Context, m: A.TermExpr, *,
               allow_holes: bool = False) -> tuple[A.TypeExpr, UsageVector]:
    st = _State(allow_holes=allow_holes)
    ty, usage = _infer(ctx, m, st)
    _validate_ambient(ctx, usage, m.loc)
    return ty, usage


def check_term(ctx: Context, m: A.TermExpr, a: A.TypeExpr, *,
               allow_holes: bool = False) -> UsageVector:
    st = _State(allow_holes=allow_holes)
    check_type(ctx, a, st)
    usage = _check(ctx, m, a, st)
    _validate_ambient(ctx, usage, m.loc)
    return usage


def validate_parameter_context(ctx: Context) -> None:
    """A parameter context may put budget 1 only on parameter types."""
    for entry in ctx.entries:
        if entry.index is ONE and classify(entry.type) != PARAMETER:
            raise TypeCheckError(
                PARAMETER_CONTEXT_VIOLATION,
                f"entry {entry.name!r} has index 1 on non-parameter type "
                f"'{_show(entry.type)}'", None)


# ---------------------------------------------------------------------------
# declaration files
# ---------------------------------------------------------------------------

@dataclass
class DeclResult:
    name: str
    ok: bool
    diagnostics: list[Diagnostic]
    judgment: Judgment | None = None


@dataclass
class ModuleReport:
    results: list[DeclResult]
    holes: list[HoleInfo]

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.results)


def check_decl_file(decls: list[A.Declaration], *, allow_holes: bool = False,
                    filename: str = "<input>") -> ModuleReport:
    """Check a parsed module declaration by declaration.

    Signatures become unrestricted hypotheses for the declarations after
    them; definition bodies are checked against their signatures.
    Diagnostics are collected per declaration in file order.
    """
    globals_ctx = Context()
    results: list[DeclResult] = []
    holes: list[HoleInfo] = []
    for decl in decls:
        st = _State(allow_holes=allow_holes)
        diags: list[Diagnostic] = []
        judgment = None
        try:
            if isinstance(decl, A.TypeAlias):
                check_type(globals_ctx, decl.body, st)
            else:
                check_type(globals_ctx, decl.signature, st)
                if decl.body is not None:
                    usage = _check(globals_ctx, decl.body, decl.signature, st)
                    _validate_ambient(globals_ctx, usage, decl.loc)
                    judgment = Judgment(globals_ctx, decl.body,
                                        decl.signature, usage)
                globals_ctx = globals_ctx.extend(
                    decl.name, decl.signature, MANY)
        except TypeCheckError as e:
            diags.append(Diagnostic(filename, e.loc or decl.loc, e.code, e.msg))
        results.append(DeclResult(decl.name, not diags, diags, judgment))
        holes.extend(st.holes)
    return ModuleReport(results, holes)


def _show(t: A.TypeExpr) -> str:
    from ..syntax.printer import print_type
    return print_type(t)
