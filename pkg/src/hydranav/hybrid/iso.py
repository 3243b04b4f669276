"""Decision procedure for conjugacy of directed systems, up to the
relabelings and box re-parameterizations composition can introduce.

The search brute-forces graph isomorphisms of the apexes (node-matched by
mode dimension) and, for each, proposes the canonical axis-aligned affine
map between corresponding domain boxes as the per-vertex conjugating map.
Fields, resets, and both legs are then verified numerically.  This is
sound, and complete for systems that differ by relabeling plus per-axis
affine reparameterization; exotic conjugacies (for example coordinate
permutations inside a mode) can be verified explicitly with
`verify_conjugacy`.
"""
from __future__ import annotations

import numpy as np
from networkx import MultiDiGraph
from networkx.algorithms.isomorphism import MultiDiGraphMatcher

from .system import (
    AffineMap, DirectedSystem, HybridSystem, affine_compose, affine_equal,
    sample_box,
)

SIZE_LIMIT = 12


class SizeLimitExceeded(Exception):
    pass


def _box_affine(src_domain, dst_domain) -> AffineMap:
    """The axis-aligned affine map sending one box onto another."""
    n = len(src_domain)
    m = np.zeros((n, n))
    b = np.zeros(n)
    for i, ((slo, shi), (dlo, dhi)) in enumerate(zip(src_domain, dst_domain)):
        sw, dw = shi - slo, dhi - dlo
        scale = dw / sw if sw > 0 else 1.0
        m[i, i] = scale
        b[i] = dlo - scale * slo
    return (m, b)


def _nx_graph(h: HybridSystem) -> MultiDiGraph:
    g = MultiDiGraph()
    for v, mode in h.vertices.items():
        g.add_node(v, dim=mode.dim)
    for eid, e in h.edges.items():
        g.add_edge(e.src, e.dst, key=eid)
    return g


def _fields_match(m1, m2, phi: AffineMap, tol: float, samples: int = 16) -> bool:
    if m1.dim == 0:
        return m2.dim == 0
    pts = sample_box(m1.domain, samples)
    lhs = m1.field(pts) @ phi[0].T
    rhs = m2.field(pts @ phi[0].T + phi[1])
    return bool(np.max(np.abs(lhs - rhs)) <= tol)


def _edges_match(h1: HybridSystem, h2: HybridSystem, vmap: dict,
                 phi: dict, tol: float) -> dict | None:
    """Match edges one-to-one so the reset squares commute; returns the
    edge bijection or None."""
    remaining: dict[tuple[str, str], list[str]] = {}
    for eid, e in h2.edges.items():
        remaining.setdefault((e.src, e.dst), []).append(eid)
    emap: dict[str, str] = {}
    for eid, e in sorted(h1.edges.items()):
        key = (vmap[e.src], vmap[e.dst])
        found = None
        for cand in remaining.get(key, []):
            r2 = h2.edges[cand].reset
            lhs = affine_compose(phi[e.dst], e.reset)
            rhs = affine_compose(r2, phi[e.src])
            if affine_equal(lhs, rhs, tol=tol):
                found = cand
                break
        if found is None:
            return None
        remaining[key].remove(found)
        emap[eid] = found
    return emap


def _subsystem_match(sub1: HybridSystem, leg1, sub2: HybridSystem, leg2,
                     apex_vmap: dict, apex_phi: dict, tol: float) -> bool:
    """Check the legs commute: the apex iso must restrict to an iso of the
    subsystems (vertex correspondence forced by leg injectivity)."""
    if len(sub1.vertices) != len(sub2.vertices) or \
            len(sub1.edges) != len(sub2.edges):
        return False
    target_of = {w: k for k, w in leg2.vertex_map.items()}
    for k1, mode1 in sub1.vertices.items():
        w2 = apex_vmap.get(leg1.vertex_map[k1])
        k2 = target_of.get(w2)
        if k2 is None:
            return False
        mode2 = sub2.vertices[k2]
        if mode1.dim != mode2.dim:
            return False
        chi = _box_affine(mode1.domain, mode2.domain)
        if not _fields_match(mode1, mode2, chi, tol):
            return False
        lhs = affine_compose(apex_phi[leg1.vertex_map[k1]], leg1.maps[k1])
        rhs = affine_compose(leg2.maps[k2], chi)
        if not affine_equal(lhs, rhs, tol=tol):
            return False
    return True


def verify_conjugacy(d1: DirectedSystem, d2: DirectedSystem,
                     vmap: dict[str, str], phi: dict[str, AffineMap],
                     tol: float = 1e-9) -> bool:
    """Verify a supplied candidate: apex vertex bijection + per-vertex
    affine maps."""
    if set(vmap) != set(d1.apex.vertices) or \
            set(vmap.values()) != set(d2.apex.vertices):
        return False
    for v, mode in d1.apex.vertices.items():
        m2 = d2.apex.vertices[vmap[v]]
        if mode.dim != m2.dim or not _fields_match(mode, m2, phi[v], tol):
            return False
    if _edges_match(d1.apex, d2.apex, vmap, phi, tol) is None:
        return False
    return (_subsystem_match(d1.initial, d1.initial_leg, d2.initial,
                             d2.initial_leg, vmap, phi, tol)
            and _subsystem_match(d1.final, d1.final_leg, d2.final,
                                 d2.final_leg, vmap, phi, tol))


def conjugacy_iso_check(d1: DirectedSystem, d2: DirectedSystem,
                        tol: float = 1e-9) -> bool:
    """Search for a conjugacy; see the module docstring for completeness."""
    for d in (d1, d2):
        if len(d.apex.vertices) > SIZE_LIMIT:
            raise SizeLimitExceeded(
                f"apex has {len(d.apex.vertices)} vertices (> {SIZE_LIMIT})")
    if len(d1.apex.vertices) != len(d2.apex.vertices) or \
            len(d1.apex.edges) != len(d2.apex.edges):
        return False
    dims1 = sorted(m.dim for m in d1.apex.vertices.values())
    dims2 = sorted(m.dim for m in d2.apex.vertices.values())
    if dims1 != dims2:
        return False
    matcher = MultiDiGraphMatcher(
        _nx_graph(d1.apex), _nx_graph(d2.apex),
        node_match=lambda a, b: a["dim"] == b["dim"])
    for vmap in matcher.isomorphisms_iter():
        phi = {v: _box_affine(d1.apex.vertices[v].domain,
                              d2.apex.vertices[vmap[v]].domain)
               for v in d1.apex.vertices}
        if verify_conjugacy(d1, d2, dict(vmap), phi, tol):
            return True
    return False
