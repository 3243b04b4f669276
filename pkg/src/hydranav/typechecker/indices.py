"""The 0/1/w usage-index semiring and usage-vector arithmetic.

Addition saturates: using something once and then once more is
unrestricted use.  Multiplication scales the usage of a subterm by how
often its surrounding context consumes it; 0 annihilates, so variables
inside an erased term stay erased.
"""
from __future__ import annotations

from ..syntax.ast import Context, Index

ZERO, ONE, MANY = Index.ZERO, Index.ONE, Index.MANY

_ADD = {
    (ZERO, ZERO): ZERO, (ZERO, ONE): ONE, (ZERO, MANY): MANY,
    (ONE, ZERO): ONE, (ONE, ONE): MANY, (ONE, MANY): MANY,
    (MANY, ZERO): MANY, (MANY, ONE): MANY, (MANY, MANY): MANY,
}

_MUL = {
    (ZERO, ZERO): ZERO, (ZERO, ONE): ZERO, (ZERO, MANY): ZERO,
    (ONE, ZERO): ZERO, (ONE, ONE): ONE, (ONE, MANY): MANY,
    (MANY, ZERO): ZERO, (MANY, ONE): MANY, (MANY, MANY): MANY,
}


def index_add(k1: Index, k2: Index) -> Index:
    return _ADD[(k1, k2)]


def index_mul(k1: Index, k2: Index) -> Index:
    return _MUL[(k1, k2)]


def index_semiring(op: str, k1: Index, k2: Index) -> Index:
    if op == "add":
        return index_add(k1, k2)
    if op == "mul":
        return index_mul(k1, k2)
    raise ValueError(f"unknown semiring operation {op!r}")


def fits(usage: Index, budget: Index) -> bool:
    """Does a computed usage comply with a declared budget?

    Zero usage fits any budget; single use fits budgets 1 and w;
    unrestricted use fits only budget w.
    """
    if usage is ZERO:
        return True
    if usage is ONE:
        return budget in (ONE, MANY)
    return budget is MANY


# ---------------------------------------------------------------------------
# usage vectors: name -> Index, domain equal to a context's name set
# ---------------------------------------------------------------------------

UsageVector = dict[str, Index]


def zero_usage(ctx: Context) -> UsageVector:
    return {name: ZERO for name in ctx.names()}


def single_usage(ctx: Context, name: str) -> UsageVector:
    u = zero_usage(ctx)
    u[name] = ONE
    return u


def ctx_add(u1: UsageVector, u2: UsageVector) -> UsageVector:
    if set(u1) != set(u2):
        raise ValueError(
            f"usage domain mismatch: {sorted(u1)} vs {sorted(u2)}")
    return {n: index_add(u1[n], u2[n]) for n in u1}


def usage_scale(k: Index, u: UsageVector) -> UsageVector:
    return {n: index_mul(k, j) for n, j in u.items()}


def usage_max(u1: UsageVector, u2: UsageVector) -> UsageVector:
    order = {ZERO: 0, ONE: 1, MANY: 2}
    return {n: (u1[n] if order[u1[n]] >= order[u2[n]] else u2[n]) for n in u1}
