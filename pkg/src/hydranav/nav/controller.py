"""The move-to-projected-goal control loop with runtime monitors.

Each step: sense, detect arcs (emitting NewObs/LoseObs on count changes),
estimate disks, check the pairwise separation assumption (a violation
halts the run and names the pair), build the local free space, project
the goal into it, and take one Euler step toward the projection.  Every
step records the clearance monitor verdict and the ground-truth minimum
clearance; goal arrival additionally records the proximity monitor.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

from ..semantics import (
    Scan, UncertaintySet, Verdict, monitor_at, monitor_safe, monitor_see,
)
from .geometry import (
    EmptyPolygon, detect_components, estimate_obstacles, local_free_space,
    nearest_hit_points, project_goal, reliable_estimates,
)
from .sensor import open_sensor
from .world import NavParams, Point, World


@dataclass(frozen=True)
class Outcome:
    pass


@dataclass(frozen=True)
class AtGoal(Outcome):
    steps: int


@dataclass(frozen=True)
class SeparationViolation(Outcome):
    i: int
    j: int


@dataclass(frozen=True)
class Timeout(Outcome):
    pass


@dataclass(frozen=True)
class SafetyAbort(Outcome):
    reason: str


@dataclass
class TraceStep:
    step: int
    position: Point
    scan: Scan
    n_visible: int
    events: tuple[str, ...]
    safe_verdict: Verdict
    see_verdict: Verdict
    min_clearance: float
    at_verdict: Verdict | None = None


@dataclass
class Trace:
    steps: list[TraceStep] = field(default_factory=list)
    outcome: Outcome | None = None
    final_polygon: list[Point] | None = None
    estimates: list[tuple[Point, float]] = field(default_factory=list)
    meta: dict = field(default_factory=dict)

    @property
    def positions(self) -> list[Point]:
        return [s.position for s in self.steps]


def separation_check(obstacles: list[tuple[Point, float]], r: float
                     ) -> tuple[int, int] | None:
    """First pair (in index order) whose surface gap is at most 2r."""
    for i in range(len(obstacles)):
        for j in range(i + 1, len(obstacles)):
            (ci, ri), (cj, rj) = obstacles[i], obstacles[j]
            gap = math.dist(ci, cj) - ri - rj
            if gap <= 2.0 * r:
                return (i, j)
    return None


def step_dynamics(x: Point, target: Point, params: NavParams) -> Point:
    """One explicit Euler step of xdot = -gain (x - target)."""
    a = params.dt * params.gain
    return (x[0] + a * (target[0] - x[0]), x[1] + a * (target[1] - x[1]))


def nearest_surface_points(estimates: list[tuple[Point, float]],
                           x: Point) -> list[Point]:
    pts = []
    for (c, r) in estimates:
        d = math.dist(x, c)
        if r <= 0.0 or d <= r:
            pts.append(c)
        else:
            t = r / d
            pts.append((c[0] + (x[0] - c[0]) * t, c[1] + (x[1] - c[1]) * t))
    return pts


def check_initial_clearance(world: World, x0: Point, params: NavParams,
                            strict: bool = True) -> None:
    """The guarantee needs d(x0, every obstacle surface) > 2R."""
    need = 2.0 * params.safety_radius
    bad = [d for d in world.obstacles if d.clearance(x0) <= need]
    if not bad:
        return
    msg = (f"start {x0} has clearance <= 2R from {len(bad)} obstacle(s); "
           f"the goal guarantee is void")
    if strict:
        raise ValueError(msg)
    warnings.warn(msg)


def run_controller(world: World, x0: Point, g: Point, params: NavParams,
                   strict_clearance: bool = True) -> tuple[Outcome, Trace]:
    check_initial_clearance(world, x0, params, strict=strict_clearance)
    trace = Trace(meta={"goal": g, "start": x0})
    handle = open_sensor(world, params)
    x = x0
    prev_n: int | None = None
    outcome: Outcome | None = None
    try:
        for step in range(params.max_steps):
            scan = handle.read(x)
            n, arcs = detect_components(scan, params.sensor_range)
            events: tuple[str, ...] = ()
            if prev_n is not None and n != prev_n:
                events = ("NewObs",) if n > prev_n else ("LoseObs",)
            prev_n = n

            u = UncertaintySet.from_scan(scan, params.noise)
            safe_v = monitor_safe(u, params.safety_radius, params.safety_mode)
            see_v = monitor_see(u, n, params.sensor_range)
            clearance = world.min_clearance(x)
            row = TraceStep(step, x, scan, n, events, safe_v, see_v, clearance)
            trace.steps.append(row)

            estimates = estimate_obstacles(scan, arcs, x)
            trace.estimates = estimates
            # separation evidence only from whole, cleanly fitted arcs:
            # occlusion fragments of one disk must not pose as a close pair
            evidence = reliable_estimates(scan, arcs, x, params.fit_tol)
            pair = separation_check(evidence, params.safety_radius)
            if pair is not None:
                outcome = SeparationViolation(*pair)
                trace.estimates = evidence
                break

            if math.dist(x, g) < params.goal_eps:
                row.at_verdict = monitor_at(x, 0.0, g, params.goal_eps)
                outcome = AtGoal(step)
                break

            try:
                # clip against every sensed nearest point; fitted surface
                # points are added when available (strictly more clipping
                # can only shrink the cell, never grow it)
                points = nearest_hit_points(scan, arcs, x)
                points += nearest_surface_points(evidence, x)
                poly = local_free_space(x, points, params)
            except EmptyPolygon as e:
                row.safe_verdict = Verdict.FAILS
                outcome = SafetyAbort(str(e))
                break
            trace.final_polygon = poly
            target = project_goal(poly, g)
            x = step_dynamics(x, target, params)
        else:
            outcome = Timeout()
    finally:
        handle.close()
    handle.audit()
    trace.outcome = outcome
    return outcome, trace
