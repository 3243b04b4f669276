"""Disk-obstacle worlds, controller parameters, and seeded generators.

Worlds are stored as YAML with `bounds`, `start`, `goal`, and
`obstacles: [{center: [x, y], radius: r}]`.  The generators do rejection
sampling until the separation and clearance hypotheses hold (or are
deliberately broken, for the violation channel).
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field

import yaml

Point = tuple[float, float]


@dataclass(frozen=True)
class Disk:
    center: Point
    radius: float

    def __post_init__(self):
        if self.radius <= 0:
            raise ValueError("obstacle radius must be positive")

    def clearance(self, p: Point) -> float:
        """Signed distance from p to the disk surface."""
        return math.dist(p, self.center) - self.radius


def surface_gap(a: Disk, b: Disk) -> float:
    return math.dist(a.center, b.center) - a.radius - b.radius


@dataclass
class World:
    obstacles: list[Disk]
    bounds: tuple[tuple[float, float], tuple[float, float]]
    start: Point
    goal: Point

    def __post_init__(self):
        (xlo, xhi), (ylo, yhi) = self.bounds
        for d in self.obstacles:
            cx, cy = d.center
            if not (xlo <= cx - d.radius and cx + d.radius <= xhi
                    and ylo <= cy - d.radius and cy + d.radius <= yhi):
                raise ValueError(f"obstacle {d} sticks out of the bounds")

    def min_clearance(self, p: Point) -> float:
        if not self.obstacles:
            return math.inf
        return min(d.clearance(p) for d in self.obstacles)


@dataclass
class NavParams:
    safety_radius: float = 0.5      # R
    sensor_range: float = 5.0
    rays: int = 64
    goal_eps: float = 0.05
    gain: float = 1.0
    dt: float = 0.02
    max_steps: int = 100_000
    noise: float = 0.0              # per-ray interval half-width
    safety_mode: str = "conservative"
    footprint_sides: int = 32
    fit_tol: float = 1e-6   # circle-fit residual bound for separation evidence

    def __post_init__(self):
        if min(self.safety_radius, self.sensor_range, self.goal_eps,
               self.gain, self.dt) <= 0:
            raise ValueError("all controller parameters must be positive")
        if self.rays < 8:
            raise ValueError("need at least 8 rays")
        if self.max_steps <= 0:
            raise ValueError("max_steps must be positive")
        if self.goal_eps >= self.safety_radius:
            raise ValueError("goal tolerance must be below the safety radius")
        if self.dt * self.gain >= 1.0:
            raise ValueError("dt * gain must stay below 1 (no overshoot)")
        if self.noise < 0:
            raise ValueError("noise half-width cannot be negative")


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------

def world_to_doc(w: World) -> dict:
    return {
        "bounds": [list(w.bounds[0]), list(w.bounds[1])],
        "start": list(w.start),
        "goal": list(w.goal),
        "obstacles": [{"center": [d.center[0], d.center[1]],
                       "radius": d.radius} for d in w.obstacles],
    }


def world_from_doc(doc: dict) -> World:
    bounds = tuple(tuple(map(float, b)) for b in doc["bounds"])
    return World(
        obstacles=[Disk((float(o["center"][0]), float(o["center"][1])),
                        float(o["radius"]))
                   for o in doc.get("obstacles", [])],
        bounds=bounds,  # type: ignore[arg-type]
        start=tuple(map(float, doc["start"])),
        goal=tuple(map(float, doc["goal"])))


def save_world(w: World, path: str) -> None:
    with open(path, "w") as f:
        yaml.safe_dump(world_to_doc(w), f, sort_keys=False)


def load_world(path: str) -> World:
    with open(path) as f:
        return world_from_doc(yaml.safe_load(f))


# ---------------------------------------------------------------------------
# seeded generators
# ---------------------------------------------------------------------------

@dataclass
class WorldGenParams:
    bounds: tuple[tuple[float, float], tuple[float, float]] = ((-8.0, 8.0),
                                                               (-8.0, 8.0))
    n_obstacles: tuple[int, int] = (3, 6)
    radius_range: tuple[float, float] = (0.5, 1.5)
    safety_radius: float = 0.5
    margin: float = 0.2             # extra slack over the 2R hypotheses
    # The bisector cell keeps the robot two safety radii away from every
    # sensed surface point, so a corridor is passable only when its gap
    # exceeds 4R.  None = 4R + 2*margin; set it lower to study stalls.
    pairwise_gap_min: float | None = None
    start: Point = (-6.0, 0.0)
    goal: Point = (6.0, 0.0)

    def describe(self) -> dict:
        return {
            "bounds": self.bounds, "n_obstacles": self.n_obstacles,
            "radius_range": self.radius_range,
            "safety_radius": self.safety_radius, "margin": self.margin,
            "pairwise_gap_min": self.effective_pairwise_gap(),
            "start": self.start, "goal": self.goal,
        }

    def effective_pairwise_gap(self) -> float:
        if self.pairwise_gap_min is not None:
            return self.pairwise_gap_min
        return 4 * self.safety_radius + 2 * self.margin


def generate_world(seed: int, gen: WorldGenParams | None = None) -> World:
    """Rejection-sample a world satisfying the separation hypotheses:
    start/goal clearances above 2R + margin, and pairwise surface gaps
    above the passability bound (which implies the 2R + margin
    hypothesis with room to spare)."""
    gen = gen or WorldGenParams()
    rng = random.Random(seed)
    (xlo, xhi), (ylo, yhi) = gen.bounds
    need = 2 * gen.safety_radius + gen.margin
    need_pair = max(need, gen.effective_pairwise_gap())
    count = rng.randint(*gen.n_obstacles)
    for _attempt in range(10_000):
        disks: list[Disk] = []
        while len(disks) < count:
            r = rng.uniform(*gen.radius_range)
            c = (rng.uniform(xlo + r, xhi - r), rng.uniform(ylo + r, yhi - r))
            cand = Disk(c, r)
            if cand.clearance(gen.start) <= need or \
                    cand.clearance(gen.goal) <= need:
                break
            if any(surface_gap(cand, d) <= need_pair for d in disks):
                break
            disks.append(cand)
        else:
            return World(disks, gen.bounds, gen.start, gen.goal)
    raise RuntimeError(f"could not generate a valid world for seed {seed}")


def generate_violation_world(seed: int, gen: WorldGenParams | None = None
                             ) -> World:
    """A world with exactly one too-close obstacle pair straddling the
    start-goal segment; everything else satisfies the hypotheses."""
    gen = gen or WorldGenParams()
    rng = random.Random(seed)
    need = 2 * gen.safety_radius + gen.margin
    sx, sy = gen.start
    gx, gy = gen.goal
    for _attempt in range(10_000):
        # the offending pair, symmetric about the start-goal segment
        t = rng.uniform(0.35, 0.65)
        px, py = sx + t * (gx - sx), sy + t * (gy - sy)
        ux, uy = gx - sx, gy - sy
        norm = math.hypot(ux, uy)
        nx, ny = -uy / norm, ux / norm
        gap = rng.uniform(0.3 * gen.safety_radius, 2 * gen.safety_radius)
        r1 = rng.uniform(*gen.radius_range)
        r2 = rng.uniform(*gen.radius_range)
        pair = [Disk((px + (gap / 2 + r1) * nx, py + (gap / 2 + r1) * ny), r1),
                Disk((px - (gap / 2 + r2) * nx, py - (gap / 2 + r2) * ny), r2)]
        if min(d.clearance(gen.start) for d in pair) <= need or \
                min(d.clearance(gen.goal) for d in pair) <= need:
            continue
        disks = list(pair)
        extra = rng.randint(1, 3)
        ok = True
        for _ in range(extra):
            for _try in range(200):
                r = rng.uniform(*gen.radius_range)
                (xlo, xhi), (ylo, yhi) = gen.bounds
                c = (rng.uniform(xlo + r, xhi - r),
                     rng.uniform(ylo + r, yhi - r))
                cand = Disk(c, r)
                if cand.clearance(gen.start) > need and \
                        cand.clearance(gen.goal) > need and \
                        all(surface_gap(cand, d) > need for d in disks):
                    disks.append(cand)
                    break
            else:
                ok = False
                break
        if not ok:
            continue
        try:
            return World(disks, gen.bounds, gen.start, gen.goal)
        except ValueError:
            continue
    raise RuntimeError(f"could not generate a violation world for seed {seed}")
