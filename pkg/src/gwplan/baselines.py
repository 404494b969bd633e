"""Counterpart gateway placement strategies: FAP centroid, venue center, random waypoint."""
from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Union

from .geometry import Cuboid, Point3
from .placement import FapState


@dataclass(frozen=True)
class Gwp:
    """Traffic-aware power-sweep placement."""


@dataclass(frozen=True)
class FapCentroid:
    """Three-coordinate average of the FAP positions (max-SNR baseline)."""


@dataclass(frozen=True)
class VenueCenter:
    """Midpoint of the venue cuboid."""


@dataclass(frozen=True)
class RandomWaypoint:
    speed_min: float = 0.5
    speed_max: float = 3.0
    seed: int = 0

    def __post_init__(self):
        if not (0 < self.speed_min <= self.speed_max):
            raise ValueError("need 0 < speed_min <= speed_max")


PlacementStrategy = Union[Gwp, FapCentroid, VenueCenter, RandomWaypoint]


def fap_centroid(faps: list[FapState]) -> Point3:
    """Arithmetic mean of the FAP positions per axis."""
    if not faps:
        raise ValueError("centroid of an empty FAP list is undefined")
    n = len(faps)
    return Point3(sum(f.position.x for f in faps) / n,
                  sum(f.position.y for f in faps) / n,
                  sum(f.position.z for f in faps) / n)


def venue_center(bounds: Cuboid) -> Point3:
    return bounds.center()


def random_waypoint_track(bounds: Cuboid, speed_min: float, speed_max: float,
                          duration: float, sample_period: float, seed):
    """Random-waypoint motion sampled on a fixed grid; deterministic per seed.

    Pick a uniform target in the venue and a uniform speed, fly straight,
    repeat; no pause at waypoints.
    """
    from .scenario import Trajectory  # deferred; scenario imports this module

    if duration <= 0 or sample_period <= 0:
        raise ValueError("duration and sample_period must be positive")
    if not (0 < speed_min <= speed_max):
        raise ValueError("need 0 < speed_min <= speed_max")

    rng = random.Random(f"rwp/{seed}")
    lo, hi = bounds.min_corner, bounds.max_corner
    pos = (rng.uniform(lo.x, hi.x), rng.uniform(lo.y, hi.y), rng.uniform(lo.z, hi.z))

    samples = []
    t = 0.0
    next_sample = 0.0
    n_samples = int(math.floor(duration / sample_period)) + 1
    while len(samples) < n_samples:
        target = (rng.uniform(lo.x, hi.x), rng.uniform(lo.y, hi.y), rng.uniform(lo.z, hi.z))
        dist = math.dist(pos, target)
        speed = rng.uniform(speed_min, speed_max)
        leg_time = dist / speed if speed > 0 else 0.0
        t_end = t + leg_time
        while next_sample <= t_end + 1e-12 and len(samples) < n_samples:
            frac = 0.0 if leg_time == 0 else (next_sample - t) / leg_time
            samples.append((next_sample, Point3(pos[0] + frac * (target[0] - pos[0]),
                                                pos[1] + frac * (target[1] - pos[1]),
                                                pos[2] + frac * (target[2] - pos[2]))))
            next_sample += sample_period
        pos, t = target, t_end
    return Trajectory(node_id=f"rwp-{seed}", samples=samples)
