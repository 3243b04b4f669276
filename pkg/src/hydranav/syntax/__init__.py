"""Syntax of the navigational declaration language: AST, parser, printer,
shape erasure, and the parameter/linear classification."""

from .ast import (  # noqa: F401
    Ann, App, AppAt, At, Bang, Base, Case, Context, CtxEntry, Decl,
    Declaration, Force, ForcePrime, Hole, Index, Inl, Inr, Lam, LamPrime,
    LetPair, Lift, LinPi, LinTensor, ListLit, ListOf, Loc, NatLit, NatOp,
    Pair, ParamPi, PointLit, RealLit, Safe, See, Sum, TermExpr, TypeAlias,
    TypeExpr, Unit, UnitVal, Var, is_simple,
)
from .lexer import HdtSyntaxError  # noqa: F401
from .ops import (  # noqa: F401
    LINEAR, PARAMETER, alpha_eq_term, alpha_eq_type, classify, fresh_name,
    is_param_term, is_parameter_type, shape, subst_term, subst_type,
    term_free_vars, type_free_vars,
)
from .parser import parse_module, parse_term, parse_type  # noqa: F401
from .printer import print_ast, print_decl, print_module, print_term, print_type  # noqa: F401
