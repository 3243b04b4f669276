"""Parser and translator for the supported temporal fragment.

The fragment is atoms, \\/ , /\\ , <> (eventually), and [] (always).
Translation maps disjunction to a sum, conjunction to a tensor,
eventually to a funnel out of Unit, and always to the proposition
itself (the invariance reading lives in the runtime monitors).
Anything outside the fragment (U, X, !, ->) is rejected at parse time.
"""
from __future__ import annotations

from dataclasses import dataclass

from .syntax import ast as A
from .syntax.ast import Loc

FRAGMENT = "atoms, \\/, /\\, <>, []"


class LtlSyntaxError(Exception):
    def __init__(self, msg: str, pos: int):
        self.msg = msg
        self.pos = pos
        super().__init__(f"column {pos + 1}: {msg}")


class UnknownAtom(Exception):
    def __init__(self, name: str):
        self.name = name
        super().__init__(f"unknown atom {name!r}")


@dataclass(frozen=True)
class LtlFormula:
    pass


@dataclass(frozen=True)
class Atom(LtlFormula):
    name: str


@dataclass(frozen=True)
class Or(LtlFormula):
    left: LtlFormula
    right: LtlFormula


@dataclass(frozen=True)
class And(LtlFormula):
    left: LtlFormula
    right: LtlFormula


@dataclass(frozen=True)
class Eventually(LtlFormula):
    body: LtlFormula


@dataclass(frozen=True)
class Always(LtlFormula):
    body: LtlFormula


AtomEnv = dict[str, A.TypeExpr]


# ---------------------------------------------------------------------------
# parsing
# ---------------------------------------------------------------------------

_UNSUPPORTED = {
    "!": "negation",
    "->": "implication",
    "U": "until",
    "X": "next",
}


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    toks = []
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c.isspace():
            i += 1
            continue
        if text.startswith("<>", i):
            toks.append(("EVENTUALLY", "<>", i))
            i += 2
            continue
        if text.startswith("[]", i):
            toks.append(("ALWAYS", "[]", i))
            i += 2
            continue
        if text.startswith("\\/", i):
            toks.append(("OR", "\\/", i))
            i += 2
            continue
        if text.startswith("/\\", i):
            toks.append(("AND", "/\\", i))
            i += 2
            continue
        if text.startswith("->", i):
            raise LtlSyntaxError(
                f"implication is outside the supported fragment ({FRAGMENT})", i)
        if c == "!":
            raise LtlSyntaxError(
                f"negation is outside the supported fragment ({FRAGMENT})", i)
        if c == "(":
            toks.append(("LPAREN", c, i))
            i += 1
            continue
        if c == ")":
            toks.append(("RPAREN", c, i))
            i += 1
            continue
        if c.isalpha() or c == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            toks.append(("IDENT", text[i:j], i))
            i = j
            continue
        raise LtlSyntaxError(f"unexpected character {c!r}", i)
    toks.append(("EOF", "", n))
    return toks


class _LtlParser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.pos = 0

    def peek(self):
        return self.toks[self.pos]

    def next(self):
        t = self.toks[self.pos]
        if t[0] != "EOF":
            self.pos += 1
        return t

    def parse(self) -> LtlFormula:
        f = self._or()
        kind, text, pos = self.peek()
        if kind != "EOF":
            raise LtlSyntaxError(f"unexpected {text!r} after formula", pos)
        return f

    # \/ binds loosest, /\ tighter, unary operators tightest
    def _or(self) -> LtlFormula:
        f = self._and()
        while self.peek()[0] == "OR":
            self.next()
            f = Or(f, self._and())
        return f

    def _and(self) -> LtlFormula:
        f = self._unary()
        while self.peek()[0] == "AND":
            self.next()
            f = And(f, self._unary())
        return f

    def _unary(self) -> LtlFormula:
        kind, text, pos = self.peek()
        if kind == "EVENTUALLY":
            self.next()
            return Eventually(self._unary())
        if kind == "ALWAYS":
            self.next()
            return Always(self._unary())
        if kind == "LPAREN":
            self.next()
            f = self._or()
            k, t, p = self.next()
            if k != "RPAREN":
                raise LtlSyntaxError("expected ')'", p)
            return f
        if kind == "IDENT":
            if text in ("U", "X"):
                raise LtlSyntaxError(
                    f"operator {text!r} ({_UNSUPPORTED[text]}) is outside the "
                    f"supported fragment ({FRAGMENT})", pos)
            self.next()
            # an infix U between formulas also lands here, via the operand
            nk, nt, np = self.peek()
            if nk == "IDENT" and nt in ("U", "X"):
                raise LtlSyntaxError(
                    f"operator {nt!r} ({_UNSUPPORTED[nt]}) is outside the "
                    f"supported fragment ({FRAGMENT})", np)
            return Atom(text)
        raise LtlSyntaxError(
            f"expected a formula, found {text or 'end of input'!r}", pos)


def parse_ltl(text: str) -> LtlFormula:
    return _LtlParser(text).parse()


# ---------------------------------------------------------------------------
# translation
# ---------------------------------------------------------------------------

def translate_ltl(p: LtlFormula, env: AtomEnv) -> A.TypeExpr:
    match p:
        case Atom(name):
            if name not in env:
                raise UnknownAtom(name)
            return env[name]
        case Or(left, right):
            return A.Sum(translate_ltl(left, env), translate_ltl(right, env))
        case And(left, right):
            return A.LinTensor("_", translate_ltl(left, env),
                               translate_ltl(right, env))
        case Eventually(body):
            return A.LinPi("_", A.Unit(), translate_ltl(body, env))
        case Always(body):
            return translate_ltl(body, env)
        case _:
            raise TypeError(f"not a formula node: {p!r}")


def formula_size(p: LtlFormula) -> int:
    match p:
        case Atom(_):
            return 1
        case Or(l, r) | And(l, r):
            return 1 + formula_size(l) + formula_size(r)
        case Eventually(b) | Always(b):
            return 1 + formula_size(b)
    raise TypeError(f"not a formula node: {p!r}")


def type_size(t: A.TypeExpr) -> int:
    match t:
        case A.Unit() | A.Base():
            return 1
        case A.ListOf(e) | A.Bang(e):
            return 1 + type_size(e)
        case A.See(_) | A.At(_) | A.Safe(_):
            return 1
        case A.LinPi(_, d, c) | A.ParamPi(_, d, c) | A.LinTensor(_, d, c) \
                | A.Sum(d, c):
            return 1 + type_size(d) + type_size(c)
    raise TypeError(f"not a type node: {t!r}")


def atom_env_from_decls(decls) -> AtomEnv:
    """Build an atom environment from a parsed `.hdt` module: each
    declaration's signature becomes the image of its name."""
    env: AtomEnv = {}
    for d in decls:
        if isinstance(d, A.TypeAlias):
            env[d.name] = d.body
        else:
            env[d.name] = d.signature
    return env
