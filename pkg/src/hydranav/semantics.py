"""Executable denotations of the simple types.

A scan is a circular array of distance readings; an uncertainty set
bounds each ray by an interval.  Each simple type yields a hybrid-system
template and a monitor: a three-valued decision procedure over
uncertainty sets.  Verdicts are three-valued because interval
uncertainty can genuinely under-determine a quantified property; the
monitors refuse to guess.

Monitors are monotone under restriction: shrinking the uncertainty set
can never turn `holds` into anything else (for the clearance monitor
this is guaranteed in its default conservative mode; the optimistic mode
uses the most favorable reading and trades monotonicity away).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable

from .hybrid.system import HybridSystem, Mode
from .syntax import ast as A

INF = math.inf


class Verdict(Enum):
    HOLDS = "holds"
    FAILS = "fails"
    INDETERMINATE = "indeterminate"

    def __str__(self) -> str:
        return self.value


class NotASubset(Exception):
    pass


class NotDenotable(Exception):
    pass


@dataclass(frozen=True)
class Scan:
    """Distance readings at angles 2*pi*j/N; inf means no return."""
    rays: tuple[float, ...]

    def __post_init__(self):
        if len(self.rays) < 8:
            raise ValueError("a scan needs at least 8 rays")
        for v in self.rays:
            if not (v >= 0):
                raise ValueError(f"negative or NaN reading {v}")

    @property
    def n(self) -> int:
        return len(self.rays)

    def angle(self, j: int) -> float:
        return 2.0 * math.pi * j / self.n

    def rotated(self, shift: int) -> "Scan":
        n = self.n
        return Scan(tuple(self.rays[(j - shift) % n] for j in range(n)))


@dataclass(frozen=True)
class UncertaintySet:
    """Per-ray interval bounds; a scan belongs iff each ray is in range."""
    lo: tuple[float, ...]
    hi: tuple[float, ...]

    def __post_init__(self):
        if len(self.lo) != len(self.hi):
            raise ValueError("bound arrays differ in length")
        if len(self.lo) < 8:
            raise ValueError("an uncertainty set needs at least 8 rays")
        for l, h in zip(self.lo, self.hi):
            if not (0 <= l <= h):
                raise ValueError(f"bad ray interval [{l}, {h}]")

    @property
    def n(self) -> int:
        return len(self.lo)

    @staticmethod
    def from_scan(scan: Scan, eta: float = 0.0) -> "UncertaintySet":
        lo = tuple(v if v == INF else max(0.0, v - eta) for v in scan.rays)
        hi = tuple(v if v == INF else v + eta for v in scan.rays)
        return UncertaintySet(lo, hi)

    def contains(self, scan: Scan) -> bool:
        return self.n == scan.n and all(
            l <= v <= h for l, v, h in zip(self.lo, scan.rays, self.hi))

    def rotated(self, shift: int) -> "UncertaintySet":
        n = self.n
        return UncertaintySet(
            tuple(self.lo[(j - shift) % n] for j in range(n)),
            tuple(self.hi[(j - shift) % n] for j in range(n)))


def restrict(u: UncertaintySet, finer: UncertaintySet) -> UncertaintySet:
    """Restriction map of the interval model: `finer` must refine `u`."""
    if u.n != finer.n:
        raise NotASubset("ray counts differ")
    for j in range(u.n):
        if finer.lo[j] < u.lo[j] or finer.hi[j] > u.hi[j]:
            raise NotASubset(f"ray {j}: [{finer.lo[j]}, {finer.hi[j]}] is not "
                             f"inside [{u.lo[j]}, {u.hi[j]}]")
    return finer


# ---------------------------------------------------------------------------
# circular component machinery
# ---------------------------------------------------------------------------

def circular_components(mask: list[bool]) -> list[list[int]]:
    """Maximal runs of True, merged across the N-1/0 seam."""
    n = len(mask)
    if not any(mask):
        return []
    if all(mask):
        return [list(range(n))]
    # start scanning just after a False so no run is split by the seam
    start = next(j for j in range(n) if not mask[j])
    comps: list[list[int]] = []
    current: list[int] = []
    for k in range(1, n + 1):
        j = (start + k) % n
        if mask[j]:
            current.append(j)
        elif current:
            comps.append(current)
            current = []
    if current:
        comps.append(current)
    return comps


def monitor_see(u: UncertaintySet, n: int, m: float) -> Verdict:
    """Is the number of visible arcs below range `m` exactly `n`, for
    every scan compatible with `u`?

    `hi_j <= m` marks rays that are certainly below range, `lo_j <= m`
    rays that possibly are.  The verdict is `holds` only when every
    choice of the undecided rays yields exactly n circular components,
    which is decided exactly: certain components must biject with the
    possible components, and each possible component may exceed its
    certain core by at most one undecided ray on each flank.  `fails`
    needs both counts to miss n; everything else is `indeterminate`.
    """
    if not (m < INF):
        raise ValueError("range bound must be finite")
    certain = [h <= m for h in u.hi]
    possible = [l <= m for l in u.lo]
    c_comps = circular_components(certain)
    p_comps = circular_components(possible)

    def strict_holds() -> bool:
        if len(c_comps) != n or len(p_comps) != n:
            return False
        rays = u.n
        comp_of = {}
        for idx, comp in enumerate(p_comps):
            for j in comp:
                comp_of[j] = idx
        seen: dict[int, int] = {}
        for comp in c_comps:
            owner = comp_of.get(comp[0])
            if owner is None or any(comp_of.get(j) != owner for j in comp):
                return False
            seen[owner] = seen.get(owner, 0) + 1
        if len(seen) != len(p_comps) or any(v != 1 for v in seen.values()):
            return False
        core = {j for comp in c_comps for j in comp}
        for comp in p_comps:
            if len(comp) == rays:  # full circle: no undecided flank allowed
                if any(j not in core for j in comp):
                    return False
                continue
            for j in comp:
                if j in core:
                    continue
                if ((j + 1) % rays not in core) and ((j - 1) % rays not in core):
                    return False
                # an undecided ray wedged between two certain rays of the
                # same component is fine; between different cores it would
                # merge them, but bijectivity already rules that out within
                # one possible component
        return True

    if strict_holds():
        return Verdict.HOLDS
    if len(c_comps) != n and len(p_comps) != n:
        return Verdict.FAILS
    return Verdict.INDETERMINATE


def monitor_at(x_est: tuple[float, float], est_radius: float,
               g: tuple[float, float], eps: float) -> Verdict:
    """Goal proximity: the whole estimate ball must sit within eps."""
    d = math.dist(x_est, g)
    return Verdict.HOLDS if d + est_radius < eps else Verdict.FAILS


def monitor_safe(u: UncertaintySet, r: float,
                 mode: str = "conservative") -> Verdict:
    """Clearance: the minimum reading must exceed r.

    conservative: every compatible scan clears r  (inf over the set);
    optimistic:   some compatible scan clears r   (sup over the set).
    """
    if mode == "conservative":
        worst = min(u.lo)
        return Verdict.HOLDS if worst > r else Verdict.FAILS
    if mode == "optimistic":
        best = min(u.hi)
        return Verdict.HOLDS if best > r else Verdict.FAILS
    raise ValueError(f"unknown safety mode {mode!r}")


@dataclass
class MonitorPredicate:
    """A named decision procedure over uncertainty sets."""
    name: str
    fn: Callable[..., Verdict]
    description: str = ""

    def __call__(self, *args, **kwargs) -> Verdict:
        return self.fn(*args, **kwargs)


# ---------------------------------------------------------------------------
# denotation of simple types
# ---------------------------------------------------------------------------

@dataclass
class DenoteParams:
    workspace: tuple[tuple[float, float], tuple[float, float]] = ((-10.0, 10.0),
                                                                  (-10.0, 10.0))
    max_radius: float = 5.0
    range_bound: float = 5.0
    goal_eps: float = 0.05
    safe_radius: float = 0.5


def _nat_value(term: A.TermExpr) -> int:
    from .typechecker.checker import normalize_param_term
    t = normalize_param_term(term)
    if isinstance(t, A.NatLit):
        return t.value
    raise NotDenotable(f"count argument does not reduce to a literal: {t!r}")


def _point_value(term: A.TermExpr) -> tuple[float, float]:
    from .typechecker.checker import normalize_param_term
    t = normalize_param_term(term)
    if isinstance(t, A.PointLit):
        return (t.x, t.y)
    raise NotDenotable(f"goal argument does not reduce to a literal: {t!r}")


def denote(t: A.TypeExpr, params: DenoteParams | None = None
           ) -> tuple[HybridSystem, MonitorPredicate]:
    """Hybrid-system template plus monitor for a simple type (or Unit).

    Workspace positions live in the plane, so seeing n obstacles denotes
    a single 3n-dimensional mode (n centers and n radii) with zero
    dynamics; goal types denote the plane flowing down the squared
    distance; clearance types denote the one-point system.
    """
    p = params or DenoteParams()
    wx, wy = p.workspace
    match t:
        case A.See(count):
            n = _nat_value(count)
            domain = ([wx, wy] * n) + [(0.0, p.max_radius)] * n
            system = HybridSystem(
                {"mode": Mode.make(domain, ["0"] * (3 * n))})
            mon = MonitorPredicate(
                "see",
                lambda u, n=n, m=p.range_bound: monitor_see(u, n, m),
                f"exactly {n} visible arcs below range {p.range_bound}")
            return system, mon
        case A.At(goal):
            g = _point_value(goal)
            field = [f"-2*(x0 - ({g[0]!r}))", f"-2*(x1 - ({g[1]!r}))"]
            system = HybridSystem({"mode": Mode.make([wx, wy], field)})
            mon = MonitorPredicate(
                "at",
                lambda x_est, est_radius, g=g, eps=p.goal_eps:
                    monitor_at(x_est, est_radius, g, eps),
                f"within {p.goal_eps} of {g}")
            return system, mon
        case A.Safe(subject):
            tag = subject.name if isinstance(subject, A.Var) else "<term>"
            system = HybridSystem({"mode": Mode.make([], [])})
            mon = MonitorPredicate(
                "safe",
                lambda u, r=p.safe_radius, mode="conservative":
                    monitor_safe(u, r, mode),
                f"clearance of {tag} stays above {p.safe_radius}")
            return system, mon
        case A.Unit():
            system = HybridSystem({"mode": Mode.make([], [])})
            return system, MonitorPredicate(
                "unit", lambda *_a, **_k: Verdict.HOLDS, "trivial")
        case _:
            raise NotDenotable(
                "only simple types and Unit denote directly; compound types "
                "are denoted through composition of their parts")
