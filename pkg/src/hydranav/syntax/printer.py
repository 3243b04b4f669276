"""Pretty-printer, inverse to the parser: `parse(print(t)) == t`.

Parenthesization is driven by the same precedence table the parser uses;
the printer emits the minimal parens that re-parse to the same tree.
"""
from __future__ import annotations

from . import ast as A

# type precedence levels
_T_ARROW, _T_SUM, _T_TENSOR, _T_PREFIX, _T_ATOM = range(5)
# term precedence levels
_M_TERM, _M_ARITH, _M_APP, _M_PREFIX, _M_ATOM = range(5)


def _num(v: float) -> str:
    return repr(float(v))


def print_type(t: A.TypeExpr, level: int = _T_ARROW) -> str:
    match t:
        case A.Unit():
            s, mine = "Unit", _T_ATOM
        case A.Base(name):
            s, mine = name, _T_ATOM
        case A.ListOf(elem):
            s, mine = f"List({print_type(elem)})", _T_ATOM
        case A.See(count):
            s, mine = f"See({print_term(count)})", _T_ATOM
        case A.At(goal):
            s, mine = f"At({print_term(goal)})", _T_ATOM
        case A.Safe(subject):
            inner = subject.name if isinstance(subject, A.Var) else print_term(subject)
            s, mine = f"Safe({inner})", _T_ATOM
        case A.Bang(body):
            s, mine = f"!{print_type(body, _T_PREFIX)}", _T_PREFIX
        case A.LinTensor(binder, left, right):
            if binder == "_":
                s = f"{print_type(left, _T_PREFIX)} * {print_type(right, _T_TENSOR)}"
            else:
                s = f"({binder} : {print_type(left)}) * {print_type(right, _T_TENSOR)}"
            mine = _T_TENSOR
        case A.Sum(left, right):
            s = f"{print_type(left, _T_TENSOR)} (+) {print_type(right, _T_SUM)}"
            mine = _T_SUM
        case A.LinPi(binder, domain, codomain):
            if binder == "_":
                s = f"{print_type(domain, _T_SUM)} -o {print_type(codomain)}"
            else:
                s = f"({binder} : {print_type(domain)}) -o {print_type(codomain)}"
            mine = _T_ARROW
        case A.ParamPi(binder, domain, codomain):
            if binder == "_":
                s = f"{print_type(domain, _T_SUM)} -> {print_type(codomain)}"
            else:
                s = f"({binder} : {print_type(domain)}) -> {print_type(codomain)}"
            mine = _T_ARROW
        case _:
            raise TypeError(f"not a type node: {t!r}")
    return f"({s})" if mine < level else s


def print_term(m: A.TermExpr, level: int = _M_TERM) -> str:
    match m:
        case A.UnitVal():
            s, mine = "unit", _M_ATOM
        case A.Var(name):
            s, mine = name, _M_ATOM
        case A.Hole(name):
            s, mine = f"?{name}", _M_ATOM
        case A.NatLit(v):
            s, mine = str(v), _M_ATOM
        case A.RealLit(v):
            s, mine = _num(v), _M_ATOM
        case A.PointLit(x, y):
            s, mine = f"<{_num(x)}, {_num(y)}>", _M_ATOM
        case A.ListLit(items):
            s, mine = "[" + ", ".join(print_term(i) for i in items) + "]", _M_ATOM
        case A.Pair(left, right):
            s, mine = f"({print_term(left)}, {print_term(right)})", _M_ATOM
        case A.Ann(term, ty):
            s, mine = f"({print_term(term)} : {print_type(ty)})", _M_ATOM
        case A.Force(body):
            s, mine = f"force {print_term(body, _M_PREFIX)}", _M_PREFIX
        case A.ForcePrime(body):
            s, mine = f"force' {print_term(body, _M_PREFIX)}", _M_PREFIX
        case A.Lift(body):
            s, mine = f"lift {print_term(body, _M_PREFIX)}", _M_PREFIX
        case A.Inl(body):
            s, mine = f"inl {print_term(body, _M_PREFIX)}", _M_PREFIX
        case A.Inr(body):
            s, mine = f"inr {print_term(body, _M_PREFIX)}", _M_PREFIX
        case A.App(fn, arg):
            s = f"{print_term(fn, _M_APP)} {print_term(arg, _M_ATOM)}"
            mine = _M_APP
        case A.AppAt(fn, arg):
            s = f"{print_term(fn, _M_APP)} @ {print_term(arg, _M_ATOM)}"
            mine = _M_APP
        case A.NatOp(op, left, right):
            s = f"{print_term(left, _M_ARITH)} {op} {print_term(right, _M_APP)}"
            mine = _M_ARITH
        case A.Lam(binder, body):
            s, mine = f"\\{binder}. {print_term(body)}", _M_TERM
        case A.LamPrime(binder, body):
            s, mine = f"\\'{binder}. {print_term(body)}", _M_TERM
        case A.LetPair(x, y, scrut, body):
            s = f"let ({x}, {y}) = {print_term(scrut)} in {print_term(body)}"
            mine = _M_TERM
        case A.Case(scrut, lx, lb, rx, rb):
            s = (f"case {print_term(scrut)} of inl {lx} -> {print_term(lb)}"
                 f" | inr {rx} -> {print_term(rb)}")
            mine = _M_TERM
        case _:
            raise TypeError(f"not a term node: {m!r}")
    return f"({s})" if mine < level else s


def print_decl(d: A.Declaration) -> str:
    if isinstance(d, A.TypeAlias):
        return f"type {d.name} = {print_type(d.body)} ;"
    lines = [f"{d.name} : {print_type(d.signature)} ;"]
    if d.body is not None:
        lines.append(f"{d.name} = {print_term(d.body)} ;")
    return "\n".join(lines)


def print_module(decls) -> str:
    return "\n".join(print_decl(d) for d in decls) + ("\n" if decls else "")


def print_ast(node) -> str:
    """Print any single AST node (type, term, or declaration)."""
    if isinstance(node, A.TypeExpr):
        return print_type(node)
    if isinstance(node, A.TermExpr):
        return print_term(node)
    return print_decl(node)
