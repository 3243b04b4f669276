"""Validation of structure-preserving maps and of the funnel conditions.

Jump squares are checked by exact affine composition; flow compatibility
is checked numerically at quasi-random sample points (the maps are
affine, so their derivative is just the linear part).  The funnel
recurrence condition is checked on a grid abstraction: cells flow for a
horizon T, get fattened by eps, and follow reset edges; every cell must
reach the image of the final subsystem.  A pass is approximate by
nature; a failure comes with a concrete witness cell.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .system import (
    AffineMap, DirectedSystem, HybridSystem, Semiconjugacy, affine_apply,
    affine_compose, affine_equal, sample_box,
)


@dataclass
class Failure:
    kind: str         # DimensionMismatch | SquareFailure | FlowFailure | ...
    subject: str      # vertex or edge id
    detail: str
    witness: object = None


@dataclass
class Report:
    failures: list[Failure] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def add(self, kind: str, subject: str, detail: str, witness=None):
        self.failures.append(Failure(kind, subject, detail, witness))

    def render(self) -> str:
        lines = [f"{'ok' if self.ok else 'FAILED'}"]
        for f in self.failures:
            lines.append(f"  {f.kind} at {f.subject}: {f.detail}")
        lines.extend(f"  note: {n}" for n in self.notes)
        return "\n".join(lines)


def validate_semiconjugacy(alpha: Semiconjugacy, src: HybridSystem,
                           dst: HybridSystem, samples: int = 32,
                           flow_tol: float = 1e-9,
                           square_tol: float = 0.0) -> Report:
    rep = Report()
    for v in src.vertices:
        if v not in alpha.vertex_map or alpha.vertex_map[v] not in dst.vertices:
            rep.add("DimensionMismatch", v, "vertex not mapped into the target")
            return rep
        if v not in alpha.maps:
            rep.add("DimensionMismatch", v, "vertex has no component map")
            return rep
        m, _ = alpha.maps[v]
        want = (dst.vertices[alpha.vertex_map[v]].dim, src.vertices[v].dim)
        if m.shape != want:
            rep.add("DimensionMismatch", v,
                    f"component map is {m.shape}, expected {want}")
    if not rep.ok:
        return rep

    # jump squares: alpha_u . r_e == r_alpha(e) . alpha_v, exactly
    for eid, e in src.edges.items():
        if eid not in alpha.edge_map or alpha.edge_map[eid] not in dst.edges:
            rep.add("DimensionMismatch", eid, "edge not mapped into the target")
            continue
        te = dst.edges[alpha.edge_map[eid]]
        if te.src != alpha.vertex_map[e.src] or te.dst != alpha.vertex_map[e.dst]:
            rep.add("SquareFailure", eid,
                    "edge map is incompatible with the vertex map")
            continue
        lhs = affine_compose(alpha.maps[e.dst], e.reset)
        rhs = affine_compose(te.reset, alpha.maps[e.src])
        if not affine_equal(lhs, rhs, tol=square_tol):
            rep.add("SquareFailure", eid,
                    f"reset square does not commute: {lhs} != {rhs}")

    # flow condition: D(alpha_v) F_v(x) == F_alpha(v)(alpha_v x) at samples
    for v, mode in src.vertices.items():
        if mode.dim == 0:
            continue
        a = alpha.maps[v]
        target_mode = dst.vertices[alpha.vertex_map[v]]
        pts = sample_box(mode.domain, samples)
        fv = mode.field(pts)
        mapped = pts @ a[0].T + a[1]
        lhs = fv @ a[0].T
        rhs = target_mode.field(mapped)
        err = np.abs(lhs - rhs).max(axis=1) if len(pts) else np.zeros(0)
        bad = np.nonzero(err > flow_tol)[0]
        if len(bad):
            i = int(bad[0])
            rep.add("FlowFailure", v,
                    f"flow square off by {err[i]:.3e} at {pts[i].tolist()}",
                    witness=pts[i].tolist())
    return rep


# ---------------------------------------------------------------------------
# funnel conditions
# ---------------------------------------------------------------------------

def integrate_rk4(mode, x0: np.ndarray, horizon: float, steps: int = 256,
                  clamp: bool = True) -> np.ndarray:
    """Fixed-step RK4 on a batch of states, clamped to the mode box."""
    x = np.array(x0, dtype=float)
    if mode.dim == 0 or horizon <= 0:
        return x
    lo = np.array([d[0] for d in mode.domain])
    hi = np.array([d[1] for d in mode.domain])
    h = horizon / steps
    f = mode.field
    for _ in range(steps):
        k1 = f(x)
        k2 = f(x + 0.5 * h * k1)
        k3 = f(x + 0.5 * h * k2)
        k4 = f(x + h * k3)
        x = x + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
        if clamp:
            x = np.clip(x, lo, hi)
    return x


def _injective(mapping: dict) -> bool:
    return len(set(mapping.values())) == len(mapping)


def _image_box(mode_domain, f: AffineMap):
    """Bounding box of the affine image of a box (tight for diagonal maps)."""
    if not mode_domain:
        return []
    corners = [[]]
    for lo, hi in mode_domain:
        corners = [c + [v] for c in corners for v in (lo, hi)]
    pts = np.array([affine_apply(f, np.array(c)) for c in corners])
    return list(zip(pts.min(axis=0).tolist(), pts.max(axis=0).tolist()))


class _Grid:
    """Uniform cell decomposition of one mode's box."""

    def __init__(self, mode, resolution: int):
        self.mode = mode
        self.res = 1 if mode.dim == 0 else resolution
        self.dim = mode.dim
        if self.dim == 0:
            self.centers = np.zeros((1, 0))
            self.halfdiag = 0.0
            return
        axes = []
        for lo, hi in mode.domain:
            width = (hi - lo) / self.res
            axes.append(lo + (np.arange(self.res) + 0.5) * width)
        mesh = np.meshgrid(*axes, indexing="ij")
        self.centers = np.stack([m.ravel() for m in mesh], axis=1)
        widths = np.array([(hi - lo) / self.res for lo, hi in mode.domain])
        self.halfdiag = float(np.linalg.norm(widths / 2.0))

    def __len__(self):
        return self.centers.shape[0]

    def cells_near(self, point: np.ndarray, radius: float) -> list[int]:
        if self.dim == 0:
            return [0]
        d = np.linalg.norm(self.centers - point, axis=1)
        return np.nonzero(d <= radius + self.halfdiag + 1e-12)[0].tolist()

    def cells_intersecting_box(self, box) -> list[int]:
        if self.dim == 0:
            return [0]
        lo = np.array([b[0] for b in box])
        hi = np.array([b[1] for b in box])
        half = np.array([(h - l) / self.res / 2.0
                         for (l, h) in self.mode.domain])
        ok = np.all((self.centers + half >= lo - 1e-12)
                    & (self.centers - half <= hi + 1e-12), axis=1)
        return np.nonzero(ok)[0].tolist()


def validate_directed(d: DirectedSystem, eps: float = 0.05, horizon: float = 2.0,
                      grid: int = 16, samples: int = 32) -> Report:
    """Check the four funnel conditions; (iv) via grid abstraction."""
    rep = Report()

    for name, sub, leg in (("initial", d.initial, d.initial_leg),
                           ("final", d.final, d.final_leg)):
        sub_rep = validate_semiconjugacy(leg, sub, d.apex)
        for f in sub_rep.failures:
            rep.add(f.kind, f"{name}:{f.subject}", f.detail, f.witness)
        # (i) embeddings: injective on vertices and edges, injective maps
        if not _injective(leg.vertex_map):
            rep.add("EmbeddingFailure", name, "vertex map is not injective")
        if not _injective(leg.edge_map):
            rep.add("EmbeddingFailure", name, "edge map is not injective")
        for v, (m, _) in leg.maps.items():
            if m.size and np.linalg.matrix_rank(m) < m.shape[1]:
                rep.add("EmbeddingFailure", f"{name}:{v}",
                        "component map is not injective")

    # (ii) right-leg components are invertible
    for v, (m, _) in d.final_leg.maps.items():
        if m.shape[0] != m.shape[1]:
            rep.add("RightLegFailure", v, "component map is not square")
        elif m.size and abs(np.linalg.det(m)) < 1e-12:
            rep.add("RightLegFailure", v, "component map has zero determinant")

    # (iii) the image of the final graph is a sink
    img_vertices = set(d.final_leg.vertex_map.values())
    for eid, e in d.apex.edges.items():
        if e.src in img_vertices and e.dst not in img_vertices:
            rep.add("SinkFailure", eid,
                    f"edge {e.src} -> {e.dst} leaves the final image",
                    witness=eid)

    if not rep.ok:
        return rep

    # (iv) every grid cell admits an (eps, T)-chain into the final image
    grids = {v: _Grid(mode, grid) for v, mode in d.apex.vertices.items()}
    target: set[tuple[str, int]] = set()
    for fv, mode in d.final.vertices.items():
        av = d.final_leg.vertex_map[fv]
        box = _image_box(mode.domain, d.final_leg.maps[fv])
        for c in grids[av].cells_intersecting_box(box):
            target.add((av, c))
    if not target:
        rep.add("ChainFailure", "final", "final image covers no cells")
        return rep

    succs: dict[tuple[str, int], set[tuple[str, int]]] = {}
    for v, g in grids.items():
        ends = integrate_rk4(d.apex.vertices[v], g.centers, horizon)
        out = d.apex.out_edges(v)
        for idx in range(len(g)):
            cell = (v, idx)
            nxt = {(v, j) for j in g.cells_near(ends[idx], eps)}
            for eid in out:
                e = d.apex.edges[eid]
                landing = affine_apply(e.reset, g.centers[idx])
                nxt |= {(e.dst, j)
                        for j in grids[e.dst].cells_near(landing, eps)}
            succs[cell] = nxt

    # backward reachability from the target set
    reached = set(target)
    frontier = list(target)
    preds: dict[tuple[str, int], list[tuple[str, int]]] = {}
    for cell, nxt in succs.items():
        for t in nxt:
            preds.setdefault(t, []).append(cell)
    while frontier:
        cur = frontier.pop()
        for p in preds.get(cur, ()):
            if p not in reached:
                reached.add(p)
                frontier.append(p)
    for v, g in sorted(grids.items()):
        for idx in range(len(g)):
            if (v, idx) not in reached:
                rep.add("ChainFailure", v,
                        f"cell {idx} (center {g.centers[idx].tolist()}) "
                        f"cannot reach the final image",
                        witness=(v, idx))
                rep.notes.append(
                    f"chain condition checked on a {grid}-per-axis grid, "
                    f"eps={eps}, horizon={horizon}")
                return rep
    rep.notes.append(
        f"chain condition approximately verified on a {grid}-per-axis grid, "
        f"eps={eps}, horizon={horizon}")
    return rep
