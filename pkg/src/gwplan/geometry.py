"""Points, cuboids, and distances in venue coordinates (metres)."""
from __future__ import annotations

import math
from dataclasses import dataclass


@dataclass(frozen=True)
class Point3:
    x: float
    y: float
    z: float

    def __post_init__(self):
        for v in (self.x, self.y, self.z):
            if not math.isfinite(v):
                raise ValueError(f"non-finite coordinate in {self!r}")

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.x, self.y, self.z)

    def distance_to(self, other: "Point3") -> float:
        return math.dist(self.as_tuple(), other.as_tuple())


@dataclass(frozen=True)
class Cuboid:
    min_corner: Point3
    max_corner: Point3

    def __post_init__(self):
        lo, hi = self.min_corner, self.max_corner
        if not (hi.x > lo.x and hi.y > lo.y and hi.z > lo.z):
            raise ValueError("cuboid max corner must exceed min corner on every axis")

    @classmethod
    def from_dims(cls, x: float, y: float, z: float) -> "Cuboid":
        """Cuboid with its minimum corner at the origin."""
        return cls(Point3(0.0, 0.0, 0.0), Point3(x, y, z))

    def contains(self, p: Point3, tol: float = 0.0) -> bool:
        lo, hi = self.min_corner, self.max_corner
        return (lo.x - tol <= p.x <= hi.x + tol
                and lo.y - tol <= p.y <= hi.y + tol
                and lo.z - tol <= p.z <= hi.z + tol)

    def clamp(self, x: float, y: float, z: float) -> tuple[float, float, float]:
        lo, hi = self.min_corner, self.max_corner
        return (min(max(x, lo.x), hi.x),
                min(max(y, lo.y), hi.y),
                min(max(z, lo.z), hi.z))

    def center(self) -> Point3:
        lo, hi = self.min_corner, self.max_corner
        return Point3((lo.x + hi.x) / 2, (lo.y + hi.y) / 2, (lo.z + hi.z) / 2)

    def diagonal(self) -> float:
        return self.min_corner.distance_to(self.max_corner)
