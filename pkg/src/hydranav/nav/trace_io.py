"""Trace CSV output (deterministic, reproducibility header included) and
static SVG rendering of a run."""
from __future__ import annotations

import math

from .controller import Trace
from .world import Point, World

CSV_COLUMNS = "step,x,y,n_visible,event,safe_verdict,min_clearance"


def _num(v: float) -> str:
    if v == math.inf:
        return "inf"
    return repr(float(v))


def trace_to_csv(trace: Trace, header: dict | None = None) -> str:
    lines = []
    meta = dict(trace.meta)
    meta.update(header or {})
    if trace.outcome is not None:
        meta["outcome"] = type(trace.outcome).__name__
    for key in sorted(meta):
        lines.append(f"# {key}={meta[key]}")
    lines.append(CSV_COLUMNS)
    for s in trace.steps:
        event = "+".join(s.events)
        lines.append(
            f"{s.step},{_num(s.position[0])},{_num(s.position[1])},"
            f"{s.n_visible},{event},{s.safe_verdict},{_num(s.min_clearance)}")
    return "\n".join(lines) + "\n"


def save_trace_csv(trace: Trace, path: str, header: dict | None = None) -> None:
    with open(path, "w") as f:
        f.write(trace_to_csv(trace, header))


def load_trace_positions(path: str) -> list[Point]:
    """Positions column of a trace CSV (for re-plotting)."""
    out: list[Point] = []
    with open(path) as f:
        for line in f:
            line = line.strip()
            if not line or line.startswith("#") or line.startswith("step,"):
                continue
            parts = line.split(",")
            out.append((float(parts[1]), float(parts[2])))
    return out


# ---------------------------------------------------------------------------
# SVG
# ---------------------------------------------------------------------------

def _fmt(v: float) -> str:
    return f"{v:.4f}"


def render_svg(positions: list[Point], world: World | None = None,
               polygon: list[Point] | None = None, size: int = 640) -> str:
    """A static picture: obstacles, trajectory, final free-space polygon."""
    if world is not None:
        (xlo, xhi), (ylo, yhi) = world.bounds
    else:
        xs = [p[0] for p in positions] or [0.0]
        ys = [p[1] for p in positions] or [0.0]
        xlo, xhi = min(xs) - 1, max(xs) + 1
        ylo, yhi = min(ys) - 1, max(ys) + 1
    w = xhi - xlo
    h = yhi - ylo
    scale = size / max(w, h)

    def sx(x: float) -> str:
        return _fmt((x - xlo) * scale)

    def sy(y: float) -> str:
        return _fmt((yhi - y) * scale)  # flip so +y is up

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" '
        f'width="{_fmt(w * scale)}" height="{_fmt(h * scale)}" '
        f'viewBox="0 0 {_fmt(w * scale)} {_fmt(h * scale)}">',
        f'<rect width="100%" height="100%" fill="white"/>',
    ]
    if world is not None:
        for d in world.obstacles:
            parts.append(
                f'<circle cx="{sx(d.center[0])}" cy="{sy(d.center[1])}" '
                f'r="{_fmt(d.radius * scale)}" fill="#c9c9c9" '
                f'stroke="#555555"/>')
    if polygon:
        pts = " ".join(f"{sx(p[0])},{sy(p[1])}" for p in polygon)
        parts.append(f'<polygon points="{pts}" fill="#dff2df" '
                     f'fill-opacity="0.6" stroke="#2e7d32"/>')
    if positions:
        path = "M " + " L ".join(f"{sx(p[0])} {sy(p[1])}" for p in positions)
        parts.append(f'<path d="{path}" fill="none" stroke="#1565c0" '
                     f'stroke-width="1.5"/>')
        parts.append(f'<circle cx="{sx(positions[0][0])}" '
                     f'cy="{sy(positions[0][1])}" r="4" fill="#1565c0"/>')
        parts.append(f'<circle cx="{sx(positions[-1][0])}" '
                     f'cy="{sy(positions[-1][1])}" r="4" fill="#e65100"/>')
    if world is not None:
        parts.append(f'<circle cx="{sx(world.goal[0])}" cy="{sy(world.goal[1])}" '
                     f'r="3" fill="none" stroke="#e65100" stroke-width="2"/>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def save_svg(path: str, positions: list[Point], world: World | None = None,
             polygon: list[Point] | None = None) -> None:
    with open(path, "w") as f:
        f.write(render_svg(positions, world, polygon))
