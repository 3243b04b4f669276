"""Tokenizer for `.hdt` declaration files.

Comments run from `--` to end of line.  `-o` lexes as the linear arrow
only when not followed by an identifier character, so `n - obs` stays a
subtraction.
"""
from __future__ import annotations

from dataclasses import dataclass

from .ast import Loc


class HdtSyntaxError(Exception):
    def __init__(self, msg: str, loc: Loc | None = None):
        self.msg = msg
        self.loc = loc
        where = f"{loc}: " if loc else ""
        super().__init__(f"{where}{msg}")


KEYWORDS = {
    "Unit", "Nat", "Real", "Point", "Obstacle", "List",
    "See", "At", "Safe",
    "unit", "force", "lift", "let", "in", "case", "of", "inl", "inr",
    "type",
}

_IDENT_START = set("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ_")
_IDENT_CONT = _IDENT_START | set("0123456789")


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    loc: Loc


def tokenize(source: str) -> list[Token]:
    toks: list[Token] = []
    i = 0
    line, col = 1, 1
    n = len(source)

    def loc() -> Loc:
        return Loc(line, col)

    def advance(k: int):
        nonlocal i, line, col
        for _ in range(k):
            if i < n and source[i] == "\n":
                line += 1
                col = 1
            else:
                col += 1
            i += 1

    while i < n:
        c = source[i]
        if c in " \t\r\n":
            advance(1)
            continue
        if source.startswith("--", i):
            while i < n and source[i] != "\n":
                advance(1)
            continue
        start = loc()
        if source.startswith("(+)", i):
            toks.append(Token("OPLUS", "(+)", start))
            advance(3)
            continue
        if source.startswith("->", i):
            toks.append(Token("ARROW", "->", start))
            advance(2)
            continue
        if source.startswith("-o", i) and (i + 2 >= n or source[i + 2] not in _IDENT_CONT):
            toks.append(Token("LOLLI", "-o", start))
            advance(2)
            continue
        if source.startswith("\\'", i):
            toks.append(Token("LAMP", "\\'", start))
            advance(2)
            continue
        if c == "\\":
            toks.append(Token("LAM", "\\", start))
            advance(1)
            continue
        if c == "?":
            advance(1)
            j = i
            if j >= n or source[j] not in _IDENT_START:
                raise HdtSyntaxError("expected identifier after '?'", start)
            while j < n and source[j] in _IDENT_CONT:
                j += 1
            name = source[i:j]
            advance(j - i)
            toks.append(Token("HOLE", name, start))
            continue
        if c.isdigit():
            j = i
            while j < n and source[j].isdigit():
                j += 1
            is_real = False
            if j < n and source[j] == "." and j + 1 < n and source[j + 1].isdigit():
                is_real = True
                j += 1
                while j < n and source[j].isdigit():
                    j += 1
            text = source[i:j]
            advance(j - i)
            toks.append(Token("REAL" if is_real else "NAT", text, start))
            continue
        if c in _IDENT_START:
            j = i
            while j < n and source[j] in _IDENT_CONT:
                j += 1
            text = source[i:j]
            advance(j - i)
            if text == "force" and i < n and source[i] == "'":
                advance(1)
                toks.append(Token("FORCEP", "force'", start))
                continue
            kind = "KW_" + text if text in KEYWORDS else "IDENT"
            toks.append(Token(kind, text, start))
            continue
        simple = {
            "(": "LPAREN", ")": "RPAREN", "[": "LBRACK", "]": "RBRACK",
            "<": "LANGLE", ">": "RANGLE", "*": "STAR", "!": "BANG",
            "@": "AT", ":": "COLON", ";": "SEMI", "=": "EQ", ",": "COMMA",
            ".": "DOT", "|": "PIPE", "+": "PLUS", "-": "MINUS",
        }
        if c in simple:
            toks.append(Token(simple[c], c, start))
            advance(1)
            continue
        raise HdtSyntaxError(f"unexpected character {c!r}", start)

    toks.append(Token("EOF", "", loc()))
    return toks
