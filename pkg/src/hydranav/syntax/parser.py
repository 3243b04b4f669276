"""Recursive-descent parser for `.hdt` declaration files.

Operator precedence in types, loosest first:
    -o / ->   (right associative, lowest)
    (+)
    *
    !
    atoms

so `(x:A) -o B * C` reads as `(x:A) -o (B * C)`.

Binder groups `(x, y : A, n : B)` desugar to right-nested binders and must
be followed by `-o`, `->`, or `*`.  Type aliases introduced by
`type N = T ;` are substituted away while parsing.
"""
from __future__ import annotations

from . import ast as A
from .ast import Loc
from .lexer import HdtSyntaxError, Token, tokenize

_ATOM_START = {
    "KW_unit", "IDENT", "HOLE", "NAT", "REAL", "LANGLE", "LBRACK", "LPAREN",
    "KW_force", "FORCEP", "KW_lift", "KW_inl", "KW_inr",
}

_PREFIX_KW = {
    "KW_force": A.Force,
    "FORCEP": A.ForcePrime,
    "KW_lift": A.Lift,
    "KW_inl": A.Inl,
    "KW_inr": A.Inr,
}


class Parser:
    def __init__(self, source: str, aliases: dict[str, A.TypeExpr] | None = None):
        self.toks = tokenize(source)
        self.pos = 0
        self.aliases: dict[str, A.TypeExpr] = dict(aliases or {})

    # -- token plumbing ----------------------------------------------------

    def peek(self, ahead: int = 0) -> Token:
        return self.toks[min(self.pos + ahead, len(self.toks) - 1)]

    def next(self) -> Token:
        t = self.peek()
        if t.kind != "EOF":
            self.pos += 1
        return t

    def at(self, *kinds: str) -> bool:
        return self.peek().kind in kinds

    def expect(self, kind: str, what: str | None = None) -> Token:
        t = self.peek()
        if t.kind != kind:
            want = what or kind
            got = t.text or "end of input"
            if t.kind.startswith("KW_"):
                raise HdtSyntaxError(
                    f"expected {want}, found reserved word {t.text!r}", t.loc)
            raise HdtSyntaxError(f"expected {want}, found {got!r}", t.loc)
        return self.next()

    def err(self, msg: str) -> HdtSyntaxError:
        return HdtSyntaxError(msg, self.peek().loc)

    # -- declarations ------------------------------------------------------

    def parse_module(self) -> list[A.Declaration]:
        decls: list[A.Declaration] = []
        by_name: dict[str, A.Decl] = {}
        while not self.at("EOF"):
            t = self.peek()
            if t.kind == "KW_type":
                self.next()
                name_tok = self.expect("IDENT", "alias name")
                self.expect("EQ", "'='")
                body = self.parse_type()
                self.expect("SEMI", "';'")
                if name_tok.text in self.aliases:
                    raise HdtSyntaxError(
                        f"type alias {name_tok.text!r} already defined", name_tok.loc)
                self.aliases[name_tok.text] = body
                decls.append(A.TypeAlias(name_tok.text, body, name_tok.loc))
                continue
            if t.kind != "IDENT":
                raise HdtSyntaxError(
                    f"expected a declaration name, found {t.text or 'end of input'!r}"
                    + (" (reserved word)" if t.kind.startswith("KW_") else ""),
                    t.loc)
            name_tok = self.next()
            if self.at("COLON"):
                self.next()
                sig = self.parse_type()
                self.expect("SEMI", "';'")
                if name_tok.text in by_name or name_tok.text in self.aliases:
                    raise HdtSyntaxError(
                        f"duplicate declaration of {name_tok.text!r}", name_tok.loc)
                decl = A.Decl(name_tok.text, sig, None, name_tok.loc)
                by_name[name_tok.text] = decl
                decls.append(decl)
            elif self.at("EQ"):
                self.next()
                body = self.parse_term()
                self.expect("SEMI", "';'")
                decl = by_name.get(name_tok.text)
                if decl is None:
                    raise HdtSyntaxError(
                        f"definition of {name_tok.text!r} has no preceding signature",
                        name_tok.loc)
                if decl.body is not None:
                    raise HdtSyntaxError(
                        f"{name_tok.text!r} already has a definition", name_tok.loc)
                decl.body = body
            else:
                raise self.err(f"expected ':' or '=' after {name_tok.text!r}")
        return decls

    # -- types ---------------------------------------------------------------

    def parse_type(self) -> A.TypeExpr:
        if self.at("LPAREN"):
            mark = self.pos
            binders = self._try_binder_group()
            if binders is not None:
                op = self.peek()
                if op.kind in ("LOLLI", "ARROW"):
                    self.next()
                    cod = self.parse_type()
                    ctor = A.LinPi if op.kind == "LOLLI" else A.ParamPi
                    for name, dom in reversed(binders):
                        cod = ctor(name, dom, cod, loc=op.loc)
                    return cod
                if op.kind == "STAR":
                    self.next()
                    rest = self._tensor()
                    for name, dom in reversed(binders):
                        rest = A.LinTensor(name, dom, rest, loc=op.loc)
                    return self._arrow_tail(self._sum_tail(rest))
                self.pos = mark  # plain parenthesized type after all
        t = self._sum()
        return self._arrow_tail(t)

    def _try_binder_group(self) -> list[tuple[str, A.TypeExpr]] | None:
        mark = self.pos
        try:
            self.expect("LPAREN")
            binders: list[tuple[str, A.TypeExpr]] = []
            while True:
                names = [self.expect("IDENT").text]
                while self.at("COMMA") and self.peek(1).kind == "IDENT" and \
                        self.peek(2).kind in ("COMMA", "COLON"):
                    self.next()
                    names.append(self.expect("IDENT").text)
                self.expect("COLON")
                dom = self.parse_type()
                binders.extend((n, dom) for n in names)
                if self.at("COMMA"):
                    self.next()
                    continue
                break
            self.expect("RPAREN")
            if not self.at("LOLLI", "ARROW", "STAR"):
                self.pos = mark
                return None
            return binders
        except HdtSyntaxError:
            self.pos = mark
            return None

    def _arrow_tail(self, t: A.TypeExpr) -> A.TypeExpr:
        if self.at("LOLLI"):
            loc = self.next().loc
            return A.LinPi("_", t, self.parse_type(), loc=loc)
        if self.at("ARROW"):
            loc = self.next().loc
            return A.ParamPi("_", t, self.parse_type(), loc=loc)
        return t

    def _sum(self) -> A.TypeExpr:
        return self._sum_tail(self._tensor())

    def _sum_tail(self, t: A.TypeExpr) -> A.TypeExpr:
        if self.at("OPLUS"):
            loc = self.next().loc
            return A.Sum(t, self._sum(), loc=loc)
        return t

    def _tensor(self) -> A.TypeExpr:
        if self.at("LPAREN"):
            mark = self.pos
            binders = self._try_binder_group()
            if binders is not None:
                if self.at("STAR"):
                    loc = self.next().loc
                    rest = self._tensor()
                    for name, dom in reversed(binders):
                        rest = A.LinTensor(name, dom, rest, loc=loc)
                    return rest
                # binder group followed by an arrow below tensor level:
                # needs explicit parens, let the plain read produce the error
                self.pos = mark
        t = self._type_prefix()
        if self.at("STAR"):
            loc = self.next().loc
            return A.LinTensor("_", t, self._tensor(), loc=loc)
        return t

    def _type_prefix(self) -> A.TypeExpr:
        if self.at("BANG"):
            loc = self.next().loc
            return A.Bang(self._type_prefix(), loc=loc)
        return self._type_atom()

    def _type_atom(self) -> A.TypeExpr:
        t = self.peek()
        if t.kind == "KW_Unit":
            self.next()
            return A.Unit(loc=t.loc)
        if t.kind in ("KW_Nat", "KW_Real", "KW_Point", "KW_Obstacle"):
            self.next()
            return A.Base(t.text, loc=t.loc)
        if t.kind == "KW_List":
            self.next()
            self.expect("LPAREN")
            elem = self.parse_type()
            self.expect("RPAREN")
            return A.ListOf(elem, loc=t.loc)
        if t.kind in ("KW_See", "KW_At"):
            self.next()
            self.expect("LPAREN")
            arg = self.parse_term()
            self.expect("RPAREN")
            ctor = A.See if t.kind == "KW_See" else A.At
            return ctor(arg, loc=t.loc)
        if t.kind == "KW_Safe":
            self.next()
            self.expect("LPAREN")
            name = self.expect("IDENT", "a controller name")
            self.expect("RPAREN")
            return A.Safe(A.Var(name.text, loc=name.loc), loc=t.loc)
        if t.kind == "IDENT":
            if t.text in self.aliases:
                self.next()
                return self.aliases[t.text]
            raise HdtSyntaxError(f"unknown type name {t.text!r}", t.loc)
        if t.kind == "LPAREN":
            self.next()
            inner = self.parse_type()
            self.expect("RPAREN")
            return inner
        raise self.err(f"expected a type, found {t.text or 'end of input'!r}")

    # -- terms ---------------------------------------------------------------

    def parse_term(self) -> A.TermExpr:
        t = self.peek()
        if t.kind == "LAM":
            self.next()
            name = self.expect("IDENT", "a binder")
            self.expect("DOT", "'.'")
            return A.Lam(name.text, self.parse_term(), loc=t.loc)
        if t.kind == "LAMP":
            self.next()
            name = self.expect("IDENT", "a binder")
            self.expect("DOT", "'.'")
            return A.LamPrime(name.text, self.parse_term(), loc=t.loc)
        if t.kind == "KW_let":
            self.next()
            self.expect("LPAREN")
            x = self.expect("IDENT").text
            self.expect("COMMA")
            y = self.expect("IDENT").text
            self.expect("RPAREN")
            self.expect("EQ", "'='")
            scrut = self.parse_term()
            self.expect("KW_in", "'in'")
            body = self.parse_term()
            return A.LetPair(x, y, scrut, body, loc=t.loc)
        if t.kind == "KW_case":
            self.next()
            scrut = self.parse_term()
            self.expect("KW_of", "'of'")
            self.expect("KW_inl", "'inl'")
            lx = self.expect("IDENT").text
            self.expect("ARROW", "'->'")
            lb = self.parse_term()
            self.expect("PIPE", "'|'")
            self.expect("KW_inr", "'inr'")
            rx = self.expect("IDENT").text
            self.expect("ARROW", "'->'")
            rb = self.parse_term()
            return A.Case(scrut, lx, lb, rx, rb, loc=t.loc)
        return self._arith()

    def _arith(self) -> A.TermExpr:
        t = self._app()
        while self.at("PLUS", "MINUS"):
            op = self.next()
            rhs = self._app()
            t = A.NatOp(op.text, t, rhs, loc=op.loc)
        return t

    def _app(self) -> A.TermExpr:
        t = self._term_prefix()
        while True:
            if self.at("AT"):
                loc = self.next().loc
                t = A.AppAt(t, self._term_prefix(), loc=loc)
            elif self.peek().kind in _ATOM_START:
                arg = self._term_prefix()
                t = A.App(t, arg, loc=arg.loc)
            else:
                return t

    def _term_prefix(self) -> A.TermExpr:
        t = self.peek()
        ctor = _PREFIX_KW.get(t.kind)
        if ctor is not None:
            self.next()
            return ctor(self._term_prefix(), loc=t.loc)
        return self._term_atom()

    def _term_atom(self) -> A.TermExpr:
        t = self.peek()
        if t.kind == "KW_unit":
            self.next()
            return A.UnitVal(loc=t.loc)
        if t.kind == "IDENT":
            self.next()
            return A.Var(t.text, loc=t.loc)
        if t.kind == "HOLE":
            self.next()
            return A.Hole(t.text, loc=t.loc)
        if t.kind == "NAT":
            self.next()
            return A.NatLit(int(t.text), loc=t.loc)
        if t.kind == "REAL":
            self.next()
            return A.RealLit(float(t.text), loc=t.loc)
        if t.kind == "MINUS" and self.peek(1).kind == "REAL":
            self.next()
            tok = self.next()
            return A.RealLit(-float(tok.text), loc=t.loc)
        if t.kind == "LANGLE":
            self.next()
            x = self._signed_number()
            self.expect("COMMA")
            y = self._signed_number()
            self.expect("RANGLE", "'>'")
            return A.PointLit(x, y, loc=t.loc)
        if t.kind == "LBRACK":
            self.next()
            items: list[A.TermExpr] = []
            if not self.at("RBRACK"):
                items.append(self.parse_term())
                while self.at("COMMA"):
                    self.next()
                    items.append(self.parse_term())
            self.expect("RBRACK", "']'")
            return A.ListLit(tuple(items), loc=t.loc)
        if t.kind == "LPAREN":
            self.next()
            first = self.parse_term()
            if self.at("COMMA"):
                self.next()
                second = self.parse_term()
                while self.at("COMMA"):  # (a, b, c) sugars to (a, (b, c))
                    self.next()
                    second = A.Pair(second, self.parse_term(), loc=t.loc)
                self.expect("RPAREN")
                return A.Pair(first, second, loc=t.loc)
            if self.at("COLON"):
                self.next()
                ty = self.parse_type()
                self.expect("RPAREN")
                return A.Ann(first, ty, loc=t.loc)
            self.expect("RPAREN")
            return first
        if t.kind.startswith("KW_"):
            raise HdtSyntaxError(
                f"reserved word {t.text!r} cannot appear here", t.loc)
        raise self.err(f"expected a term, found {t.text or 'end of input'!r}")

    def _signed_number(self) -> float:
        neg = False
        if self.at("MINUS"):
            self.next()
            neg = True
        tok = self.peek()
        if tok.kind not in ("NAT", "REAL"):
            raise self.err("expected a number in point literal")
        self.next()
        v = float(tok.text)
        return -v if neg else v


# -- public helpers --------------------------------------------------------

def parse_module(source: str) -> list[A.Declaration]:
    return Parser(source).parse_module()


def parse_type(source: str, aliases: dict[str, A.TypeExpr] | None = None) -> A.TypeExpr:
    p = Parser(source, aliases)
    t = p.parse_type()
    p.expect("EOF", "end of input")
    return t


def parse_term(source: str) -> A.TermExpr:
    p = Parser(source)
    t = p.parse_term()
    p.expect("EOF", "end of input")
    return t
