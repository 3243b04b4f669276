"""Planar geometry for the controller: arc detection, circle fitting,
half-plane clipping, and metric projection onto convex polygons."""
from __future__ import annotations

import math

from ..semantics import Scan, circular_components
from .world import NavParams, Point

EPS = 1e-12


class EmptyPolygon(Exception):
    pass


class DegenerateArc(Exception):
    pass


def detect_components(scan: Scan, m: float) -> tuple[int, list[list[int]]]:
    """Circular connected components of rays reading at most m."""
    arcs = circular_components([v <= m for v in scan.rays])
    return len(arcs), arcs


def _ray_point(scan: Scan, x: Point, j: int) -> Point:
    t = scan.rays[j]
    a = scan.angle(j)
    return (x[0] + t * math.cos(a), x[1] + t * math.sin(a))


def circumcircle(p1: Point, p2: Point, p3: Point) -> tuple[Point, float]:
    """Center and radius through three points; raises DegenerateArc on a
    collinear triple."""
    ax, ay = p1
    bx, by = p2
    cx, cy = p3
    d = 2.0 * (ax * (by - cy) + bx * (cy - ay) + cx * (ay - by))
    if abs(d) < 1e-9:
        raise DegenerateArc("collinear sample triple")
    a2, b2, c2 = ax * ax + ay * ay, bx * bx + by * by, cx * cx + cy * cy
    ux = (a2 * (by - cy) + b2 * (cy - ay) + c2 * (ay - by)) / d
    uy = (a2 * (cx - bx) + b2 * (ax - cx) + c2 * (bx - ax)) / d
    return (ux, uy), math.dist((ux, uy), p1)


def estimate_obstacles(scan: Scan, arcs: list[list[int]], x: Point
                       ) -> list[tuple[Point, float]]:
    """Fit one disk per visible arc.

    Arcs of three or more rays fit the circumcircle of their first,
    middle, and last hits; shorter or collinear arcs fall back to a point
    obstacle at the nearest hit.
    """
    out: list[tuple[Point, float]] = []
    for arc in arcs:
        if len(arc) >= 3:
            tri = (arc[0], arc[len(arc) // 2], arc[-1])
            pts = tuple(_ray_point(scan, x, j) for j in tri)
            try:
                center, radius = circumcircle(*pts)
                out.append((center, radius))
                continue
            except DegenerateArc:
                pass
        nearest = min(arc, key=lambda j: scan.rays[j])
        out.append((_ray_point(scan, x, nearest), 0.0))
    return out


def nearest_hit_points(scan: Scan, arcs: list[list[int]], x: Point
                       ) -> list[Point]:
    """The nearest sensed surface point of each visible arc."""
    pts = []
    for arc in arcs:
        nearest = min(arc, key=lambda j: scan.rays[j])
        pts.append(_ray_point(scan, x, nearest))
    return pts


def reliable_estimates(scan: Scan, arcs: list[list[int]], x: Point,
                       fit_tol: float = 1e-6) -> list[tuple[Point, float]]:
    """Disk fits trustworthy enough to serve as separation evidence.

    An arc qualifies only when it spans at least four rays, neither flank
    is cut off by a closer return (occlusion splits and merges arcs, so
    occluded fragments must not masquerade as whole obstacles), every hit
    lies on the fitted circle within fit_tol, and the sensor sits outside
    the fitted disk.
    """
    n = scan.n
    out: list[tuple[Point, float]] = []
    for arc in arcs:
        if len(arc) < 4 or len(arc) == n:
            continue
        before = scan.rays[(arc[0] - 1) % n]
        after = scan.rays[(arc[-1] + 1) % n]
        if before <= scan.rays[arc[0]] or after <= scan.rays[arc[-1]]:
            continue  # flank cut by something closer: partial view
        tri = (arc[0], arc[len(arc) // 2], arc[-1])
        try:
            center, radius = circumcircle(*(_ray_point(scan, x, j) for j in tri))
        except DegenerateArc:
            continue
        if radius <= 0 or math.dist(x, center) <= radius:
            continue
        if any(abs(math.dist(_ray_point(scan, x, j), center) - radius) > fit_tol
               for j in arc):
            continue  # hits disagree with one circle: merged or noisy arc
        out.append((center, radius))
    return out


# ---------------------------------------------------------------------------
# convex polygons (counter-clockwise vertex lists)
# ---------------------------------------------------------------------------

def regular_ngon(center: Point, radius: float, sides: int) -> list[Point]:
    return [(center[0] + radius * math.cos(2 * math.pi * i / sides),
             center[1] + radius * math.sin(2 * math.pi * i / sides))
            for i in range(sides)]


def clip_halfplane(poly: list[Point], p0: Point, normal: Point) -> list[Point]:
    """Keep the side where (q - p0) . normal <= 0 (Sutherland-Hodgman)."""
    if not poly:
        return []
    nx, ny = normal
    x0, y0 = p0

    def val(q: Point) -> float:
        return (q[0] - x0) * nx + (q[1] - y0) * ny

    out: list[Point] = []
    prev = poly[-1]
    pv = val(prev)
    for cur in poly:
        cv = val(cur)
        if cv <= EPS:
            if pv > EPS:
                t = pv / (pv - cv)
                out.append((prev[0] + t * (cur[0] - prev[0]),
                            prev[1] + t * (cur[1] - prev[1])))
            out.append(cur)
        elif pv <= EPS:
            t = pv / (pv - cv)
            out.append((prev[0] + t * (cur[0] - prev[0]),
                        prev[1] + t * (cur[1] - prev[1])))
        prev, pv = cur, cv
    return out


def local_free_space(x: Point, nearest_points: list[Point],
                     params: NavParams) -> list[Point]:
    """The sensing footprint clipped by one safety-margin bisector per
    sensed obstacle point.

    For an obstacle point p the boundary is the perpendicular bisector of
    x and p pulled back toward x by the safety radius: points q with
    (p - x) . (q - mid) <= 0, mid = (x + p)/2 - R (p - x)/|p - x|.
    """
    poly = regular_ngon(x, params.sensor_range / 2.0, params.footprint_sides)
    r = params.safety_radius
    for p in nearest_points:
        dx, dy = p[0] - x[0], p[1] - x[1]
        dist = math.hypot(dx, dy)
        if dist < EPS:
            raise EmptyPolygon(f"obstacle point coincides with the position {x}")
        mid = ((x[0] + p[0]) / 2.0 - r * dx / dist,
               (x[1] + p[1]) / 2.0 - r * dy / dist)
        poly = clip_halfplane(poly, mid, (dx, dy))
        if not poly:
            raise EmptyPolygon(
                f"free space vanished while clipping against {p}")
    return poly


def polygon_contains(poly: list[Point], q: Point, tol: float = 1e-9) -> bool:
    n = len(poly)
    for i in range(n):
        ax, ay = poly[i]
        bx, by = poly[(i + 1) % n]
        if (bx - ax) * (q[1] - ay) - (by - ay) * (q[0] - ax) < -tol:
            return False
    return True


def _closest_on_segment(a: Point, b: Point, q: Point) -> Point:
    ax, ay = a
    bx, by = b
    dx, dy = bx - ax, by - ay
    denom = dx * dx + dy * dy
    if denom < EPS:
        return a
    t = ((q[0] - ax) * dx + (q[1] - ay) * dy) / denom
    t = min(1.0, max(0.0, t))
    return (ax + t * dx, ay + t * dy)


def project_goal(poly: list[Point], g: Point) -> Point:
    """Euclidean projection of g onto the polygon."""
    if not poly:
        raise EmptyPolygon("cannot project onto an empty polygon")
    if polygon_contains(poly, g):
        return g
    best, best_d = None, math.inf
    for i in range(len(poly)):
        cand = _closest_on_segment(poly[i], poly[(i + 1) % len(poly)], g)
        d = math.dist(cand, g)
        if d < best_d:
            best, best_d = cand, d
    return best  # type: ignore[return-value]
