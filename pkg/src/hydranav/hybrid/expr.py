"""Closed-form expression trees for mode vector fields.

Coordinates are `x0 .. x{d-1}` (with `x`, `y`, `z` as aliases for the
first three).  Evaluation broadcasts over numpy arrays so a whole grid
of states can be pushed through a field at once.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


class ExprError(Exception):
    pass


@dataclass(frozen=True)
class Expr:
    pass


@dataclass(frozen=True)
class Const(Expr):
    value: float


@dataclass(frozen=True)
class Coord(Expr):
    index: int


@dataclass(frozen=True)
class BinOp(Expr):
    op: str  # + - * / ^
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Neg(Expr):
    body: Expr


@dataclass(frozen=True)
class Call(Expr):
    fn: str
    arg: Expr


_FUNCS = {
    "sin": np.sin, "cos": np.cos, "tan": np.tan, "exp": np.exp,
    "log": np.log, "sqrt": np.sqrt, "abs": np.abs, "tanh": np.tanh,
}

_ALIASES = {"x": 0, "y": 1, "z": 2}


class _P:
    def __init__(self, text: str):
        self.text = text
        self.i = 0

    def skip(self):
        while self.i < len(self.text) and self.text[self.i].isspace():
            self.i += 1

    def peek(self) -> str:
        self.skip()
        return self.text[self.i] if self.i < len(self.text) else ""

    def fail(self, msg: str):
        raise ExprError(f"{msg} at offset {self.i} in {self.text!r}")

    def parse(self) -> Expr:
        e = self.sum()
        self.skip()
        if self.i < len(self.text):
            self.fail("trailing input")
        return e

    def sum(self) -> Expr:
        e = self.product()
        while self.peek() in ("+", "-"):
            op = self.text[self.i]
            self.i += 1
            e = BinOp(op, e, self.product())
        return e

    def product(self) -> Expr:
        e = self.power()
        while self.peek() in ("*", "/"):
            op = self.text[self.i]
            self.i += 1
            e = BinOp(op, e, self.power())
        return e

    def power(self) -> Expr:
        e = self.unary()
        if self.peek() == "^":
            self.i += 1
            return BinOp("^", e, self.power())
        return e

    def unary(self) -> Expr:
        if self.peek() == "-":
            self.i += 1
            return Neg(self.unary())
        if self.peek() == "+":
            self.i += 1
            return self.unary()
        return self.atom()

    def atom(self) -> Expr:
        c = self.peek()
        if c == "(":
            self.i += 1
            e = self.sum()
            if self.peek() != ")":
                self.fail("expected ')'")
            self.i += 1
            return e
        if c.isdigit() or c == ".":
            j = self.i
            while j < len(self.text) and (self.text[j].isdigit() or self.text[j] in ".eE"
                                          or (self.text[j] in "+-" and self.text[j - 1] in "eE")):
                j += 1
            try:
                v = float(self.text[self.i:j])
            except ValueError:
                self.fail("bad number")
            self.i = j
            return Const(v)
        if c.isalpha() or c == "_":
            j = self.i
            while j < len(self.text) and (self.text[j].isalnum() or self.text[j] == "_"):
                j += 1
            name = self.text[self.i:j]
            self.i = j
            if self.peek() == "(":
                if name not in _FUNCS:
                    self.fail(f"unknown function {name!r}")
                self.i += 1
                arg = self.sum()
                if self.peek() != ")":
                    self.fail("expected ')'")
                self.i += 1
                return Call(name, arg)
            if name == "pi":
                return Const(math.pi)
            if name in _ALIASES:
                return Coord(_ALIASES[name])
            if name.startswith("x") and name[1:].isdigit():
                return Coord(int(name[1:]))
            self.fail(f"unknown variable {name!r}")
        self.fail("expected an expression")


def parse_expr(text: str) -> Expr:
    return _P(text).parse()


def render_expr(e: Expr) -> str:
    """Render a tree back to parsable text (fully parenthesized)."""
    match e:
        case Const(v):
            return repr(v) if v >= 0 else f"({v!r})"
        case Coord(i):
            return f"x{i}"
        case Neg(b):
            return f"(-{render_expr(b)})"
        case BinOp(op, l, r):
            return f"({render_expr(l)} {op} {render_expr(r)})"
        case Call(fn, arg):
            return f"{fn}({render_expr(arg)})"
    raise TypeError(f"not an expression: {e!r}")


def shift_coords(e: Expr, offset: int) -> Expr:
    """Re-index every coordinate by `offset` (for product modes)."""
    match e:
        case Const(_):
            return e
        case Coord(i):
            return Coord(i + offset)
        case Neg(b):
            return Neg(shift_coords(b, offset))
        case BinOp(op, l, r):
            return BinOp(op, shift_coords(l, offset), shift_coords(r, offset))
        case Call(fn, arg):
            return Call(fn, shift_coords(arg, offset))
    raise TypeError(f"not an expression: {e!r}")


def eval_expr(e: Expr, coords):
    """Evaluate with `coords` a sequence of scalars or numpy arrays."""
    match e:
        case Const(v):
            return v
        case Coord(i):
            if i >= len(coords):
                raise ExprError(f"coordinate x{i} out of range (dim {len(coords)})")
            return coords[i]
        case Neg(b):
            return -eval_expr(b, coords)
        case BinOp(op, l, r):
            lv, rv = eval_expr(l, coords), eval_expr(r, coords)
            if op == "+":
                return lv + rv
            if op == "-":
                return lv - rv
            if op == "*":
                return lv * rv
            if op == "/":
                return lv / rv
            return lv ** rv
        case Call(fn, arg):
            return _FUNCS[fn](eval_expr(arg, coords))
    raise TypeError(f"not an expression: {e!r}")


class Field:
    """A vector field: one expression per coordinate of a mode."""

    def __init__(self, exprs: list[str]):
        self.sources = list(exprs)
        self.trees = [parse_expr(s) for s in exprs]

    @property
    def dim(self) -> int:
        return len(self.trees)

    def __call__(self, x):
        """Evaluate at a point (1-d array) or a batch (n x dim array)."""
        x = np.asarray(x, dtype=float)
        if x.ndim == 1:
            coords = [x[i] for i in range(x.shape[0])]
            return np.array([np.asarray(eval_expr(t, coords), dtype=float)
                             for t in self.trees])
        coords = [x[:, i] for i in range(x.shape[1])]
        cols = [np.broadcast_to(np.asarray(eval_expr(t, coords), dtype=float),
                                x.shape[0])
                for t in self.trees]
        return np.stack(cols, axis=1)

    def __eq__(self, other):
        return isinstance(other, Field) and self.trees == other.trees

    def __repr__(self):
        return f"Field({self.sources!r})"
