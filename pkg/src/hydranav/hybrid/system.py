"""Hybrid systems with box modes, expression-tree vector fields, and
affine reset maps; structure-preserving maps between them; and directed
(funnel) systems presented as cospans of such maps.

All maps here are affine, so the jump-compatibility squares can be
checked by exact composition of matrices, and isomorphism search stays
decidable at desk scale.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import yaml

from .expr import Field

AffineMap = tuple[np.ndarray, np.ndarray]  # (matrix, offset)


def affine(matrix, offset) -> AffineMap:
    m = np.atleast_2d(np.asarray(matrix, dtype=float))
    b = np.asarray(offset, dtype=float).reshape(-1)
    if m.shape[0] != b.shape[0]:
        raise ValueError(f"affine shape mismatch: {m.shape} vs {b.shape}")
    return (m, b)


def identity_affine(dim: int) -> AffineMap:
    return (np.eye(dim), np.zeros(dim))


def affine_apply(f: AffineMap, x) -> np.ndarray:
    m, b = f
    return m @ np.asarray(x, dtype=float) + b


def affine_compose(f2: AffineMap, f1: AffineMap) -> AffineMap:
    """f2 after f1."""
    m2, b2 = f2
    m1, b1 = f1
    return (m2 @ m1, m2 @ b1 + b2)


def affine_inverse(f: AffineMap) -> AffineMap:
    m, b = f
    if m.shape[0] != m.shape[1]:
        raise ValueError("only square affine maps can be inverted")
    minv = np.linalg.inv(m)
    return (minv, -minv @ b)


def affine_equal(f: AffineMap, g: AffineMap, tol: float = 0.0) -> bool:
    if f[0].shape != g[0].shape:
        return False
    if tol == 0.0:
        return bool(np.array_equal(f[0], g[0]) and np.array_equal(f[1], g[1]))
    return bool(np.allclose(f[0], g[0], atol=tol, rtol=0.0)
                and np.allclose(f[1], g[1], atol=tol, rtol=0.0))


@dataclass
class Mode:
    """A continuous mode: a box domain in R^dim and a vector field."""
    dim: int
    domain: list[tuple[float, float]]
    field: Field

    def __post_init__(self):
        if len(self.domain) != self.dim:
            raise ValueError("domain does not match dim")
        if self.field.dim != self.dim:
            raise ValueError("field does not match dim")
        for lo, hi in self.domain:
            if lo > hi:
                raise ValueError(f"empty interval [{lo}, {hi}]")

    @staticmethod
    def make(domain, field_exprs) -> "Mode":
        domain = [(float(lo), float(hi)) for lo, hi in domain]
        return Mode(len(domain), domain, Field(list(field_exprs)))

    def same_shape(self, other: "Mode") -> bool:
        return self.dim == other.dim and self.domain == other.domain

    def __eq__(self, other):
        return (isinstance(other, Mode) and self.dim == other.dim
                and self.domain == other.domain and self.field == other.field)


@dataclass
class Edge:
    """A discrete jump with an affine reset map src-mode -> dst-mode."""
    src: str
    dst: str
    reset: AffineMap


@dataclass
class HybridSystem:
    vertices: dict[str, Mode]
    edges: dict[str, Edge] = field(default_factory=dict)

    def __post_init__(self):
        for eid, e in self.edges.items():
            if e.src not in self.vertices or e.dst not in self.vertices:
                raise ValueError(f"edge {eid} endpoints missing")
            m, b = e.reset
            want = (self.vertices[e.dst].dim, self.vertices[e.src].dim)
            if m.shape != want:
                raise ValueError(
                    f"edge {eid} reset matrix {m.shape} != {want}")

    def edge_ids(self) -> list[str]:
        return list(self.edges)

    def out_edges(self, v: str) -> list[str]:
        return [eid for eid, e in self.edges.items() if e.src == v]


@dataclass
class Semiconjugacy:
    """A graph morphism plus one affine map per source vertex."""
    vertex_map: dict[str, str]
    edge_map: dict[str, str]
    maps: dict[str, AffineMap]

    @staticmethod
    def identity(h: HybridSystem) -> "Semiconjugacy":
        return Semiconjugacy(
            {v: v for v in h.vertices},
            {e: e for e in h.edges},
            {v: identity_affine(m.dim) for v, m in h.vertices.items()})

    def compose_after(self, inner: "Semiconjugacy") -> "Semiconjugacy":
        """self . inner (inner applied first)."""
        return Semiconjugacy(
            {v: self.vertex_map[iv] for v, iv in inner.vertex_map.items()},
            {e: self.edge_map[ie] for e, ie in inner.edge_map.items()},
            {v: affine_compose(self.maps[inner.vertex_map[v]], f)
             for v, f in inner.maps.items()})


@dataclass
class DirectedSystem:
    """A funnel: cospan initial -> apex <- final."""
    apex: HybridSystem
    initial: HybridSystem
    final: HybridSystem
    initial_leg: Semiconjugacy
    final_leg: Semiconjugacy

    @staticmethod
    def identity_cospan(k: HybridSystem) -> "DirectedSystem":
        return DirectedSystem(k, k, k, Semiconjugacy.identity(k),
                              Semiconjugacy.identity(k))


def halton(count: int, dims: int) -> np.ndarray:
    """Deterministic quasi-random points in the unit cube."""
    primes = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    if dims > len(primes):
        raise ValueError("too many dimensions for the Halton table")
    out = np.empty((count, dims))
    for d in range(dims):
        base = primes[d]
        for i in range(count):
            f, r, n = 1.0, 0.0, i + 1
            while n > 0:
                f /= base
                r += f * (n % base)
                n //= base
            out[i, d] = r
    return out


def sample_box(domain, count: int) -> np.ndarray:
    """Quasi-random points inside a box; degenerate axes collapse."""
    if not domain:
        return np.zeros((count, 0))
    pts = halton(count, len(domain))
    lo = np.array([d[0] for d in domain])
    hi = np.array([d[1] for d in domain])
    return lo + pts * (hi - lo)


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------

def _mode_to_doc(m: Mode) -> dict:
    return {"dim": m.dim,
            "domain": [[lo, hi] for lo, hi in m.domain],
            "field": list(m.field.sources)}


def _mode_from_doc(doc: dict) -> Mode:
    mode = Mode.make(doc["domain"], doc["field"])
    if "dim" in doc and doc["dim"] != mode.dim:
        raise ValueError("dim does not match domain length")
    return mode


def _system_to_doc(h: HybridSystem) -> dict:
    return {
        "vertices": {v: _mode_to_doc(m) for v, m in h.vertices.items()},
        "edges": {eid: {"src": e.src, "dst": e.dst,
                        "matrix": e.reset[0].tolist(),
                        "offset": e.reset[1].tolist()}
                  for eid, e in h.edges.items()},
    }


def _system_from_doc(doc: dict) -> HybridSystem:
    vertices = {v: _mode_from_doc(m) for v, m in (doc.get("vertices") or {}).items()}
    edges = {eid: Edge(e["src"], e["dst"], affine(e["matrix"], e["offset"]))
             for eid, e in (doc.get("edges") or {}).items()}
    return HybridSystem(vertices, edges)


def _leg_to_doc(leg: Semiconjugacy) -> dict:
    return {
        "vertices": dict(leg.vertex_map),
        "edges": dict(leg.edge_map),
        "maps": {v: {"matrix": f[0].tolist(), "offset": f[1].tolist()}
                 for v, f in leg.maps.items()},
    }


def _leg_from_doc(doc: dict) -> Semiconjugacy:
    return Semiconjugacy(
        dict(doc.get("vertices") or {}),
        dict(doc.get("edges") or {}),
        {v: affine(f["matrix"], f["offset"])
         for v, f in (doc.get("maps") or {}).items()})


def directed_to_doc(d: DirectedSystem) -> dict:
    return {
        "kind": "directed-system",
        "apex": _system_to_doc(d.apex),
        "initial": {"system": _system_to_doc(d.initial),
                    "leg": _leg_to_doc(d.initial_leg)},
        "final": {"system": _system_to_doc(d.final),
                  "leg": _leg_to_doc(d.final_leg)},
    }


def directed_from_doc(doc: dict) -> DirectedSystem:
    if doc.get("kind") != "directed-system":
        raise ValueError("not a directed-system document")
    return DirectedSystem(
        _system_from_doc(doc["apex"]),
        _system_from_doc(doc["initial"]["system"]),
        _system_from_doc(doc["final"]["system"]),
        _leg_from_doc(doc["initial"]["leg"]),
        _leg_from_doc(doc["final"]["leg"]))


def save_directed(d: DirectedSystem, path: str) -> None:
    with open(path, "w") as f:
        yaml.safe_dump(directed_to_doc(d), f, sort_keys=False)


def load_directed(path: str) -> DirectedSystem:
    with open(path) as f:
        return directed_from_doc(yaml.safe_load(f))
