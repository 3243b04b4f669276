"""Limited-range line-of-sight raycasting over disk obstacles, plus the
linear sensor-session discipline (open exactly once, close exactly once).
"""
from __future__ import annotations

import math

import numpy as np

from ..semantics import Scan
from .world import NavParams, World

INF = math.inf


class InsideObstacle(Exception):
    pass


class HandleReuse(Exception):
    pass


class HandleLeak(Exception):
    pass


def sense(world: World, x: tuple[float, float], params: NavParams) -> Scan:
    """Ray j at angle 2*pi*j/N returns the nearest disk intersection
    distance, or inf beyond the sensor range."""
    px, py = x
    for d in world.obstacles:
        if math.dist(x, d.center) <= d.radius:
            raise InsideObstacle(f"sensor origin {x} is inside {d}")
    n = params.rays
    theta = 2.0 * np.pi * np.arange(n) / n
    dirs = np.stack([np.cos(theta), np.sin(theta)], axis=1)
    best = np.full(n, INF)
    for d in world.obstacles:
        rel = np.array([d.center[0] - px, d.center[1] - py])
        b = dirs @ rel                      # projection of center on each ray
        c = rel @ rel - d.radius ** 2       # > 0: origin outside the disk
        disc = b * b - c
        hit = disc >= 0.0
        t = b - np.sqrt(np.where(hit, disc, 0.0))
        valid = hit & (t >= 0.0)
        best = np.where(valid & (t < best), t, best)
    best = np.where(best > params.sensor_range, INF, best)
    return Scan(tuple(float(v) for v in best))


class SensorHandle:
    """A linear resource: reading after close or double-closing raises."""

    def __init__(self, world: World, params: NavParams):
        self.world = world
        self.params = params
        self.closed = False
        self.reads = 0

    def read(self, x: tuple[float, float]) -> Scan:
        if self.closed:
            raise HandleReuse("read on a closed sensor handle")
        self.reads += 1
        return sense(self.world, x, self.params)

    def close(self) -> None:
        if self.closed:
            raise HandleReuse("sensor handle closed twice")
        self.closed = True

    def audit(self) -> None:
        """Raise at end of run when the handle was never released."""
        if not self.closed:
            raise HandleLeak("sensor handle was never closed")


def open_sensor(world: World, params: NavParams) -> SensorHandle:
    return SensorHandle(world, params)
