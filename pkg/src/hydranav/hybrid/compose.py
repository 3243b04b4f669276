"""Sequential composition by gluing along a shared interface, and
parallel composition by product.

Sequential gluing is a graph pushout: the final subsystem of the first
operand and the initial subsystem of the second are identified through a
vertex correspondence (by label unless supplied).  Composition is only
defined up to isomorphism; the canonical representative chosen here
keeps the first operand's vertex ids and mode data, remaps the
identified vertices of the second operand onto them, and gives the
remaining vertices fresh sequential ids.  Edges of the second operand
incident to the interface are conjugated through the identification.
"""
from __future__ import annotations

import numpy as np

from .expr import Field, render_expr, shift_coords
from .system import (
    DirectedSystem, Edge, HybridSystem, Mode, Semiconjugacy, affine_compose,
    affine_inverse, identity_affine,
)


class ComposeError(Exception):
    pass


class InterfaceMismatch(ComposeError):
    pass


class NonEmbeddingLeg(ComposeError):
    pass


def _fresh_namer(taken: set[str], prefix: str):
    counter = [0]

    def fresh() -> str:
        while True:
            cand = f"{prefix}{counter[0]}"
            counter[0] += 1
            if cand not in taken:
                taken.add(cand)
                return cand
    return fresh


def _match_interface(h1: DirectedSystem, h2: DirectedSystem,
                     correspondence: dict[str, str] | None):
    """Pair up h1.final's vertices/edges with h2.initial's."""
    k1, k2 = h1.final, h2.initial
    if correspondence is None:
        if set(k1.vertices) == set(k2.vertices):
            correspondence = {v: v for v in k1.vertices}
        elif len(k1.vertices) == 1 and len(k2.vertices) == 1:
            correspondence = {next(iter(k1.vertices)): next(iter(k2.vertices))}
        else:
            raise InterfaceMismatch(
                f"interface labels differ: {sorted(k1.vertices)} vs "
                f"{sorted(k2.vertices)}; supply a correspondence")
    if set(correspondence) != set(k1.vertices) or \
            set(correspondence.values()) != set(k2.vertices) or \
            len(set(correspondence.values())) != len(correspondence):
        raise InterfaceMismatch("correspondence is not a vertex bijection")
    for a, b in correspondence.items():
        ma, mb = k1.vertices[a], k2.vertices[b]
        if ma.dim != mb.dim:
            raise InterfaceMismatch(
                f"interface modes {a}/{b} have dims {ma.dim} != {mb.dim}")
        if ma.domain != mb.domain:
            raise InterfaceMismatch(
                f"interface modes {a}/{b} have different domain boxes")
    # edges must correspond one-to-one through endpoints
    edge_corr: dict[str, str] = {}
    by_endpoints: dict[tuple[str, str], list[str]] = {}
    for eid, e in k2.edges.items():
        by_endpoints.setdefault((e.src, e.dst), []).append(eid)
    for eid, e in k1.edges.items():
        key = (correspondence[e.src], correspondence[e.dst])
        cands = by_endpoints.get(key, [])
        if len(cands) != 1:
            raise InterfaceMismatch(
                f"interface edge {eid} has {len(cands)} counterparts; "
                f"parallel interface edges need an explicit matching")
        edge_corr[eid] = cands[0]
    if len(edge_corr) != len(k2.edges):
        raise InterfaceMismatch("interface edge sets have different sizes")
    return correspondence, edge_corr


def compose_sequential(h1: DirectedSystem, h2: DirectedSystem,
                       correspondence: dict[str, str] | None = None
                       ) -> DirectedSystem:
    vcorr, ecorr = _match_interface(h1, h2, correspondence)

    # identification of apex vertices through the interface:
    #   psi_u : I_w(apex1) -> I_u(apex2) for each glued pair (w, u)
    glue: dict[str, str] = {}         # apex2 vertex -> apex1 vertex
    psi: dict[str, tuple] = {}        # apex2 vertex -> psi_u
    for k, k2v in vcorr.items():
        w = h1.final_leg.vertex_map[k]
        u = h2.initial_leg.vertex_map[k2v]
        beta = h1.final_leg.maps[k]
        gamma = h2.initial_leg.maps[k2v]
        for name, f in (("final", beta), ("initial", gamma)):
            m = f[0]
            if m.shape[0] != m.shape[1] or (m.size and
                                            abs(np.linalg.det(m)) < 1e-12):
                raise NonEmbeddingLeg(
                    f"{name} leg component at interface vertex {k!r} is not "
                    f"invertible; cannot identify the modes")
        glue[u] = w
        psi[u] = affine_compose(gamma, affine_inverse(beta))

    dropped_edges = {h2.initial_leg.edge_map[ecorr[e]] for e in ecorr}

    # vertex ids of the composite
    taken = set(h1.apex.vertices)
    fresh_v = _fresh_namer(taken, "m")
    v2_new: dict[str, str] = {}
    for v in sorted(h2.apex.vertices):
        v2_new[v] = glue[v] if v in glue else fresh_v()

    vertices: dict[str, Mode] = dict(h1.apex.vertices)
    for v, mode in h2.apex.vertices.items():
        if v not in glue:
            vertices[v2_new[v]] = mode

    def into_h2(v1_apex: str, u: str):
        """Coordinate change I_{v1}(apex1) -> I_u(apex2) if v1 is glued."""
        return psi[u]

    # h1 edges, conjugated where an endpoint was glued (the glued vertex
    # keeps h1's mode data, so h1 edges stay as they are)
    edges: dict[str, Edge] = dict(h1.apex.edges)
    taken_e = set(edges)
    fresh_e = _fresh_namer(taken_e, "e")
    e2_new: dict[str, str] = {}
    for eid in sorted(h2.apex.edges):
        if eid in dropped_edges:
            continue
        e2_new[eid] = fresh_e()
    for k1e, k2e in ecorr.items():
        # an identified interface edge is represented by h1's copy
        e2_new[h2.initial_leg.edge_map[k2e]] = h1.final_leg.edge_map[k1e]

    for eid in sorted(h2.apex.edges):
        if eid in dropped_edges:
            continue
        e = h2.apex.edges[eid]
        reset = e.reset
        if e.src in glue:  # rebase the source onto h1's mode coordinates
            reset = affine_compose(reset, psi[e.src])
        if e.dst in glue:  # land back in h1's mode coordinates
            reset = affine_compose(affine_inverse(psi[e.dst]), reset)
        edges[e2_new[eid]] = Edge(v2_new[e.src], v2_new[e.dst], reset)

    apex = HybridSystem(vertices, edges)

    # initial leg: h1's, unchanged (h1 vertices kept their ids and data)
    initial_leg = Semiconjugacy(dict(h1.initial_leg.vertex_map),
                                dict(h1.initial_leg.edge_map),
                                dict(h1.initial_leg.maps))

    # final leg: h2's, renamed; components into glued vertices pick up the
    # coordinate change back into h1's representative mode
    fvmap, femap, fmaps = {}, {}, {}
    for v, target in h2.final_leg.vertex_map.items():
        fvmap[v] = v2_new[target]
        f = h2.final_leg.maps[v]
        if target in glue:
            f = affine_compose(affine_inverse(psi[target]), f)
        fmaps[v] = f
    for e, target in h2.final_leg.edge_map.items():
        femap[e] = e2_new[target]
    final_leg = Semiconjugacy(fvmap, femap, fmaps)

    return DirectedSystem(apex, h1.initial, h2.final, initial_leg, final_leg)


# ---------------------------------------------------------------------------
# parallel composition
# ---------------------------------------------------------------------------

def _pair(a: str, b: str) -> str:
    return f"{a}|{b}"


def _block_affine(f1, f2):
    m1, b1 = f1
    m2, b2 = f2
    r1, c1 = m1.shape
    r2, c2 = m2.shape
    m = np.zeros((r1 + r2, c1 + c2))
    m[:r1, :c1] = m1
    m[r1:, c1:] = m2
    return (m, np.concatenate([b1, b2]))


def _product_mode(m1: Mode, m2: Mode) -> Mode:
    sources = list(m1.field.sources)
    sources += [render_expr(shift_coords(t, m1.dim)) for t in m2.field.trees]
    return Mode(m1.dim + m2.dim, list(m1.domain) + list(m2.domain),
                Field(sources))


def _product_system(h1: HybridSystem, h2: HybridSystem) -> HybridSystem:
    vertices = {_pair(a, b): _product_mode(ma, mb)
                for a, ma in h1.vertices.items()
                for b, mb in h2.vertices.items()}
    edges: dict[str, Edge] = {}
    for eid, e in h1.edges.items():  # jump on the left, right coasts
        for b, mb in h2.vertices.items():
            edges[_pair(eid, b)] = Edge(
                _pair(e.src, b), _pair(e.dst, b),
                _block_affine(e.reset, identity_affine(mb.dim)))
    for a, ma in h1.vertices.items():  # jump on the right, left coasts
        for eid, e in h2.edges.items():
            edges[_pair(a, eid)] = Edge(
                _pair(a, e.src), _pair(a, e.dst),
                _block_affine(identity_affine(ma.dim), e.reset))
    return HybridSystem(vertices, edges)


def _product_leg(l1: Semiconjugacy, l2: Semiconjugacy,
                 h1: HybridSystem, h2: HybridSystem) -> Semiconjugacy:
    vmap = {_pair(a, b): _pair(l1.vertex_map[a], l2.vertex_map[b])
            for a in l1.vertex_map for b in l2.vertex_map}
    emap = {}
    for e1, te1 in l1.edge_map.items():
        for b in l2.vertex_map:
            emap[_pair(e1, b)] = _pair(te1, l2.vertex_map[b])
    for a in l1.vertex_map:
        for e2, te2 in l2.edge_map.items():
            emap[_pair(a, e2)] = _pair(l1.vertex_map[a], te2)
    maps = {_pair(a, b): _block_affine(l1.maps[a], l2.maps[b])
            for a in l1.maps for b in l2.maps}
    return Semiconjugacy(vmap, emap, maps)


def compose_parallel(h1: DirectedSystem, h2: DirectedSystem) -> DirectedSystem:
    """Product system: product modes, one jump at a time."""
    return DirectedSystem(
        _product_system(h1.apex, h2.apex),
        _product_system(h1.initial, h2.initial),
        _product_system(h1.final, h2.final),
        _product_leg(h1.initial_leg, h2.initial_leg, h1.initial, h2.initial),
        _product_leg(h1.final_leg, h2.final_leg, h1.final, h2.final))
