"""Abstract syntax for the navigational declaration language.

The type grammar has two layers sharing one set of constructors: linear
(state-level) types whose values are tracked as resources, and parameter
types that may be duplicated and erased freely.  Which layer a type lives
in is decided by :func:`hydranav.syntax.ops.classify`, not by separate
node classes.  Usage indices 0/1/w annotate context entries.

All nodes are frozen dataclasses; source locations are carried for
diagnostics but excluded from equality, so structural equality is exactly
"same tree".
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum


@dataclass(frozen=True)
class Loc:
    line: int
    col: int

    def __str__(self) -> str:
        return f"{self.line}:{self.col}"


def _loc_field():
    return field(default=None, compare=False, repr=False, kw_only=True)


# ---------------------------------------------------------------------------
# Types
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TypeExpr:
    loc: Loc | None = _loc_field()


@dataclass(frozen=True)
class Unit(TypeExpr):
    """The unit parameter type."""


@dataclass(frozen=True)
class Base(TypeExpr):
    """A builtin parameter base type: Nat, Real, Point, or Obstacle."""
    name: str


@dataclass(frozen=True)
class ListOf(TypeExpr):
    elem: TypeExpr


@dataclass(frozen=True)
class See(TypeExpr):
    """Simple type: exactly `count` obstacles are visible."""
    count: "TermExpr"


@dataclass(frozen=True)
class At(TypeExpr):
    """Simple type: the agent is within tolerance of `goal`."""
    goal: "TermExpr"


@dataclass(frozen=True)
class Safe(TypeExpr):
    """Simple type: clearance invariant for the controller `subject`.

    Surface syntax only admits an identifier; substitution during
    checking may put an arbitrary opaque term here.  The subject is
    never evaluated, only compared up to alpha-equivalence.
    """
    subject: "TermExpr"


@dataclass(frozen=True)
class Bang(TypeExpr):
    """!A — parameter-level reusable wrapper around any type."""
    body: TypeExpr


@dataclass(frozen=True)
class LinPi(TypeExpr):
    """(x : A) -o B — linear dependent function."""
    binder: str
    domain: TypeExpr
    codomain: TypeExpr


@dataclass(frozen=True)
class LinTensor(TypeExpr):
    """(x : A) * B — linear dependent pair."""
    binder: str
    left: TypeExpr
    right: TypeExpr


@dataclass(frozen=True)
class ParamPi(TypeExpr):
    """(x : P) -> B — parameter-level dependent function.

    The domain must be a parameter type.  The codomain is unrestricted;
    the whole type only classifies as a parameter type when the codomain
    does.
    """
    binder: str
    domain: TypeExpr
    codomain: TypeExpr


@dataclass(frozen=True)
class Sum(TypeExpr):
    """A (+) B — binary tagged sum."""
    left: TypeExpr
    right: TypeExpr


SIMPLE_TYPES = (See, At, Safe)


def is_simple(t: TypeExpr) -> bool:
    return isinstance(t, SIMPLE_TYPES)


# ---------------------------------------------------------------------------
# Terms
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TermExpr:
    loc: Loc | None = _loc_field()


@dataclass(frozen=True)
class UnitVal(TermExpr):
    pass


@dataclass(frozen=True)
class Var(TermExpr):
    name: str


@dataclass(frozen=True)
class Lam(TermExpr):
    """\\x. M — state-level abstraction (introduces -o)."""
    binder: str
    body: TermExpr


@dataclass(frozen=True)
class LamPrime(TermExpr):
    """\\'x. R — parameter-level abstraction (introduces ->)."""
    binder: str
    body: TermExpr


@dataclass(frozen=True)
class App(TermExpr):
    fn: TermExpr
    arg: TermExpr


@dataclass(frozen=True)
class AppAt(TermExpr):
    """R1 @ R2 — parameter-level application (eliminates ->)."""
    fn: TermExpr
    arg: TermExpr


@dataclass(frozen=True)
class Force(TermExpr):
    """force M — state-level elimination of !A."""
    body: TermExpr


@dataclass(frozen=True)
class ForcePrime(TermExpr):
    """force' R — parameter-level elimination of !A."""
    body: TermExpr


@dataclass(frozen=True)
class Lift(TermExpr):
    """lift M — suspend M as a reusable parameter-level thunk."""
    body: TermExpr


@dataclass(frozen=True)
class Pair(TermExpr):
    left: TermExpr
    right: TermExpr


@dataclass(frozen=True)
class LetPair(TermExpr):
    """let (x, y) = scrutinee in body."""
    left_name: str
    right_name: str
    scrutinee: TermExpr
    body: TermExpr


@dataclass(frozen=True)
class Inl(TermExpr):
    body: TermExpr


@dataclass(frozen=True)
class Inr(TermExpr):
    body: TermExpr


@dataclass(frozen=True)
class Case(TermExpr):
    """case scrutinee of inl x -> l | inr y -> r."""
    scrutinee: TermExpr
    left_name: str
    left_branch: TermExpr
    right_name: str
    right_branch: TermExpr


@dataclass(frozen=True)
class Hole(TermExpr):
    """?name — a typed hole, admitted only under --allow-holes."""
    name: str


@dataclass(frozen=True)
class NatLit(TermExpr):
    value: int


@dataclass(frozen=True)
class RealLit(TermExpr):
    value: float


@dataclass(frozen=True)
class PointLit(TermExpr):
    x: float
    y: float


@dataclass(frozen=True)
class ListLit(TermExpr):
    items: tuple[TermExpr, ...]


@dataclass(frozen=True)
class NatOp(TermExpr):
    """Builtin Nat arithmetic; '-' is truncated subtraction."""
    op: str  # '+' or '-'
    left: TermExpr
    right: TermExpr


@dataclass(frozen=True)
class Ann(TermExpr):
    """(M : A) — type annotation, the switch from checking to synthesis."""
    term: TermExpr
    type: TypeExpr


# ---------------------------------------------------------------------------
# Usage indices and contexts
# ---------------------------------------------------------------------------

class Index(Enum):
    """Usage index: erased (types only), exactly once, or unrestricted."""
    ZERO = "0"
    ONE = "1"
    MANY = "w"

    def __str__(self) -> str:
        return self.value

    def __repr__(self) -> str:
        return f"Index({self.value!r})"


@dataclass(frozen=True)
class CtxEntry:
    name: str
    type: TypeExpr
    index: Index


@dataclass(frozen=True)
class Context:
    """An ordered telescope of usage-budgeted hypotheses."""
    entries: tuple[CtxEntry, ...] = ()

    def __post_init__(self):
        names = [e.name for e in self.entries]
        if len(names) != len(set(names)):
            dup = next(n for n in names if names.count(n) > 1)
            raise ValueError(f"duplicate context entry {dup!r}")

    @staticmethod
    def of(items) -> "Context":
        return Context(tuple(CtxEntry(n, t, k) for n, t, k in items))

    def names(self) -> tuple[str, ...]:
        return tuple(e.name for e in self.entries)

    def lookup(self, name: str) -> CtxEntry | None:
        for e in self.entries:
            if e.name == name:
                return e
        return None

    def extend(self, name: str, type: TypeExpr, index: Index) -> "Context":
        if self.lookup(name) is not None:
            # Shadowing is resolved by the parser/checker via renaming;
            # reaching here is a programming error.
            raise ValueError(f"context already binds {name!r}")
        return Context(self.entries + (CtxEntry(name, type, index),))

    def __contains__(self, name: str) -> bool:
        return self.lookup(name) is not None

    def __len__(self) -> int:
        return len(self.entries)


# ---------------------------------------------------------------------------
# Declarations
# ---------------------------------------------------------------------------

@dataclass
class Decl:
    """`name : Type ;` optionally followed by `name = term ;`."""
    name: str
    signature: TypeExpr
    body: TermExpr | None = None
    loc: Loc | None = None


@dataclass
class TypeAlias:
    """`type Name = Type ;` — resolved away during parsing, but kept in
    the declaration list so tooling can report where aliases came from."""
    name: str
    body: TypeExpr
    loc: Loc | None = None


Declaration = Decl | TypeAlias
