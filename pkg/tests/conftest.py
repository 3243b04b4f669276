"""Shared builders: random AST strategies and small funnel systems."""
from __future__ import annotations

import random

import numpy as np
import pytest
from hypothesis import strategies as st

from hydranav.hybrid import (
    DirectedSystem, Edge, HybridSystem, Mode, Semiconjugacy, identity_affine,
)
from hydranav.syntax import ast as A

NAMES = st.sampled_from(["x", "y", "z", "f", "g", "n", "p"])
BINDERS = st.sampled_from(["_", "x", "y", "k"])


def _param_terms():
    leaves = st.one_of(
        st.just(A.UnitVal()),
        NAMES.map(A.Var),
        st.integers(0, 9).map(A.NatLit),
    )
    return st.recursive(
        leaves,
        lambda inner: st.one_of(
            st.tuples(st.sampled_from(["+", "-"]), inner, inner)
              .map(lambda t: A.NatOp(*t)),
            st.tuples(inner, inner).map(lambda t: A.AppAt(*t)),
            inner.map(A.ForcePrime),
            st.tuples(NAMES, inner).map(lambda t: A.LamPrime(*t)),
        ),
        max_leaves=4)


def type_exprs(max_depth: int = 8):
    leaves = st.one_of(
        st.just(A.Unit()),
        st.sampled_from(["Nat", "Real", "Point", "Obstacle"]).map(A.Base),
        _param_terms().map(A.See),
        _param_terms().map(A.At),
        NAMES.map(lambda n: A.Safe(A.Var(n))),
    )
    return st.recursive(
        leaves,
        lambda inner: st.one_of(
            inner.map(A.Bang),
            inner.map(A.ListOf),
            st.tuples(inner, inner).map(lambda t: A.Sum(*t)),
            st.tuples(BINDERS, inner, inner).map(lambda t: A.LinPi(*t)),
            st.tuples(BINDERS, inner, inner).map(lambda t: A.LinTensor(*t)),
            st.tuples(BINDERS, inner, inner).map(lambda t: A.ParamPi(*t)),
        ),
        max_leaves=2 ** (max_depth - 3))


def term_exprs(max_depth: int = 7):
    leaves = st.one_of(
        st.just(A.UnitVal()),
        NAMES.map(A.Var),
        st.integers(0, 99).map(A.NatLit),
        st.floats(-10, 10, allow_nan=False).map(lambda v: A.RealLit(round(v, 3))),
        st.tuples(st.floats(-5, 5, allow_nan=False),
                  st.floats(-5, 5, allow_nan=False))
          .map(lambda t: A.PointLit(round(t[0], 2), round(t[1], 2))),
        NAMES.map(A.Hole),
    )

    def extend(inner):
        return st.one_of(
            st.tuples(NAMES, inner).map(lambda t: A.Lam(*t)),
            st.tuples(NAMES, inner).map(lambda t: A.LamPrime(*t)),
            st.tuples(inner, inner).map(lambda t: A.App(*t)),
            st.tuples(inner, inner).map(lambda t: A.AppAt(*t)),
            st.tuples(inner, inner).map(lambda t: A.Pair(*t)),
            st.tuples(st.sampled_from(["+", "-"]), inner, inner)
              .map(lambda t: A.NatOp(*t)),
            inner.map(A.Force),
            inner.map(A.ForcePrime),
            inner.map(A.Lift),
            inner.map(A.Inl),
            inner.map(A.Inr),
            st.tuples(NAMES, NAMES, inner, inner)
              .map(lambda t: A.LetPair(*t)),
            st.tuples(inner, NAMES, inner, NAMES, inner)
              .map(lambda t: A.Case(*t)),
            st.lists(inner, max_size=3).map(lambda xs: A.ListLit(tuple(xs))),
        )
    return st.recursive(leaves, extend, max_leaves=2 ** (max_depth - 3))


# ---------------------------------------------------------------------------
# funnel builders
# ---------------------------------------------------------------------------

def chain_funnel(rng: random.Random, tag: str, n_modes: int,
                 entry_dom: tuple[float, float] | None = None
                 ) -> tuple[DirectedSystem, tuple[float, float]]:
    """A chain of 1-d modes flowing toward their right ends, with jump
    edges, full-copy initial/final subsystems, and identity legs."""
    ia = identity_affine(1)
    doms: list[tuple[float, float]] = []
    for i in range(n_modes):
        if i == 0 and entry_dom is not None:
            doms.append(entry_dom)
        else:
            lo = round(rng.uniform(-3, 3), 2)
            doms.append((lo, lo + round(rng.uniform(0.5, 2.0), 2)))
    verts, edges = {}, {}
    for i, (lo, hi) in enumerate(doms):
        verts[f"{tag}v{i}"] = Mode.make([(lo, hi)], [f"{hi} - x0"])
        if i:
            shift = doms[i][0] - doms[i - 1][1]
            edges[f"{tag}e{i}"] = Edge(
                f"{tag}v{i-1}", f"{tag}v{i}",
                (np.array([[1.0]]), np.array([shift])))
    apex = HybridSystem(verts, edges)
    first, last = f"{tag}v0", f"{tag}v{n_modes - 1}"
    initial = HybridSystem({"kin": verts[first]})
    final = HybridSystem({"kout": verts[last]})
    return DirectedSystem(
        apex, initial, final,
        Semiconjugacy({"kin": first}, {}, {"kin": ia}),
        Semiconjugacy({"kout": last}, {}, {"kout": ia})), doms[-1]


@pytest.fixture
def rng():
    return random.Random(12345)
