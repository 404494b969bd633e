"""Gateway placement solver: SNR sphere constraints and the power-sweep search.

Each FAP's demand selects an MCS index, whose minimum SNR turns into a sphere
of feasible gateway positions around the FAP.  The gateway placement subspace
is the intersection of those spheres; the solver sweeps the common transmission
power upward in 1 dBm steps until the intersection (clipped to the venue)
becomes non-empty, and returns its deepest point.
"""
from __future__ import annotations

import itertools
import math
import warnings
from dataclasses import dataclass, field

from .geometry import Cuboid, Point3
from .rf import McsEntry, McsTable, RadioConfig, max_distance

EPS_FEAS = 1e-3   # metres of allowed constraint violation
EPS_POS = 1e-3    # pattern-search position resolution, metres
EPS_SEP = 0.01    # minimum gateway/FAP separation, metres


class NoSolutionError(Exception):
    """No feasible gateway position within the allowed transmission power."""


@dataclass(frozen=True)
class FapState:
    id: str
    position: Point3
    demand_bps: float

    def __post_init__(self):
        if self.demand_bps <= 0:
            raise ValueError(f"FAP {self.id}: demand must be positive")


@dataclass(frozen=True)
class SnrConstraint:
    center: Point3
    min_snr_db: float
    demand_bps: float
    mcs_index: int


@dataclass(frozen=True)
class PlacementSolution:
    tx_power_dbm: float
    position: Point3
    slacks_m: list[float]
    required_capacity_bps: float


def build_constraints(faps: list[FapState], table: McsTable) -> list[SnrConstraint]:
    """One sphere constraint per FAP, sized by its demand-matched MCS."""
    constraints = []
    for fap in faps:
        entry = table.min_mcs_for_demand(fap.demand_bps)
        constraints.append(SnrConstraint(
            center=fap.position,
            min_snr_db=entry.min_snr_db,
            demand_bps=fap.demand_bps,
            mcs_index=entry.index,
        ))
    return constraints


def check_point(point: Point3, constraints: list[SnrConstraint],
                tx_power_dbm: float, config: RadioConfig) -> list[float]:
    """Per-constraint slack (sphere radius minus distance); all >= 0 means feasible."""
    p = point.as_tuple()
    return [max_distance(tx_power_dbm, c.min_snr_db, config) - math.dist(p, c.center.as_tuple())
            for c in constraints]


def _max_excess(p: tuple[float, float, float],
                centers: list[tuple[float, float, float]],
                radii: list[float]) -> float:
    worst = -math.inf
    for c, r in zip(centers, radii):
        g = math.dist(p, c) - r
        if g > worst:
            worst = g
    return worst


def min_max_excess(constraints: list[SnrConstraint], tx_power_dbm: float,
                   config: RadioConfig, bounds: Cuboid) -> tuple[Point3, float]:
    """Deepest point of the sphere intersection within ``bounds``.

    Minimizes g(p) = max_i(dist(p, center_i) - radius_i), a max of convex
    functions, by compass pattern search from multiple seeds: the constraint
    centers, their pairwise midpoints, and the venue center.  g(p*) <= 0 iff
    the intersection meets the venue.
    """
    if not constraints:
        raise ValueError("at least one constraint is required")
    centers = [c.center.as_tuple() for c in constraints]
    radii = [max_distance(tx_power_dbm, c.min_snr_db, config) for c in constraints]

    seeds = [bounds.clamp(*c) for c in centers]
    for a, b in itertools.combinations(centers, 2):
        seeds.append(bounds.clamp((a[0] + b[0]) / 2, (a[1] + b[1]) / 2, (a[2] + b[2]) / 2))
    seeds.append(bounds.center().as_tuple())
    seeds = list(dict.fromkeys(seeds))  # dedupe, preserving seed order

    best_p, best_g = None, math.inf
    for seed in seeds:
        p, g = _pattern_search(seed, centers, radii, bounds)
        if g < best_g:
            best_p, best_g = p, g
    return Point3(*best_p), best_g


def _pattern_search(start, centers, radii, bounds: Cuboid):
    p = start
    g = _max_excess(p, centers, radii)
    step = bounds.diagonal() / 4.0
    while step >= EPS_POS:
        improved = True
        while improved:
            improved = False
            for axis in range(3):
                for sign in (1.0, -1.0):
                    q = list(p)
                    q[axis] += sign * step
                    q = bounds.clamp(*q)
                    gq = _max_excess(q, centers, radii)
                    if gq < g:
                        p, g = q, gq
                        improved = True
        step /= 2.0
    return p, g


def required_capacity(faps: list[FapState], table: McsTable,
                      config: RadioConfig | None = None) -> float:
    """Total demanded link capacity: sum of demand-matched MCS rates."""
    total = sum(table.min_mcs_for_demand(f.demand_bps).data_rate_bps for f in faps)
    if config is not None and faps:
        demanded = sum(f.demand_bps for f in faps)
        if demanded > config.max_channel_capacity_bps:
            warnings.warn(
                f"total demanded link capacity {demanded:.3e} bit/s exceeds "
                f"the channel capacity {config.max_channel_capacity_bps:.3e} "
                "bit/s", stacklevel=2)
    return total


def _separate_from_faps(point: Point3, faps: list[FapState],
                        constraints, tx_power_dbm, config, bounds: Cuboid) -> Point3:
    """Displace the solution off any coincident FAP (strict non-colocation)."""
    if all(point.distance_to(f.position) >= EPS_SEP for f in faps):
        return point
    best, best_slack = point, -math.inf
    for axis in range(3):
        for sign in (1.0, -1.0):
            q = list(point.as_tuple())
            q[axis] += sign * EPS_SEP
            cand = Point3(*bounds.clamp(*q))
            if any(cand.distance_to(f.position) < EPS_SEP for f in faps):
                continue
            slack = min(check_point(cand, constraints, tx_power_dbm, config))
            if slack > best_slack:
                best, best_slack = cand, slack
    return best


def gwp_solve(faps: list[FapState], table: McsTable, config: RadioConfig,
              bounds: Cuboid) -> PlacementSolution:
    """Power-sweep placement: smallest integer dBm power with a non-empty subspace.

    Raises NoSolutionError when the sweep exhausts the allowed power range, and
    DemandUnsatisfiableError when a demand exceeds the top MCS rate.
    """
    if not faps:
        raise ValueError("at least one FAP is required")
    for fap in faps:
        if not bounds.contains(fap.position):
            raise ValueError(f"FAP {fap.id} lies outside the venue bounds")
    constraints = build_constraints(faps, table)

    tx_power = 0.0
    while tx_power <= config.max_tx_power_dbm:
        point, g = min_max_excess(constraints, tx_power, config, bounds)
        if g <= EPS_FEAS:
            point = _separate_from_faps(point, faps, constraints, tx_power, config, bounds)
            return PlacementSolution(
                tx_power_dbm=tx_power,
                position=point,
                slacks_m=check_point(point, constraints, tx_power, config),
                required_capacity_bps=required_capacity(faps, table, config),
            )
        tx_power += 1.0
    raise NoSolutionError(
        f"no feasible gateway position up to {config.max_tx_power_dbm} dBm")
