"""Venue and scenario modeling: FAP trajectories, demands, fair-share arithmetic,
two-zone generation, waypoint file I/O, and gateway-track planning."""
from __future__ import annotations

import bisect
import json
import random
import warnings
from dataclasses import dataclass, field
from fractions import Fraction

from .baselines import (FapCentroid, Gwp, PlacementStrategy, RandomWaypoint,
                        VenueCenter, fap_centroid, random_waypoint_track,
                        venue_center)
from .geometry import Cuboid, Point3
from .placement import FapState, NoSolutionError, PlacementSolution, gwp_solve
from .rf import McsEntry, McsTable, RadioConfig

TOP_MCS_RATE_BPS = 780e6  # highest 802.11ac rate at 160 MHz / 1 SS / 800 ns GI

SCENARIO_FORMAT_VERSION = 1

# Demanded link capacity is this multiple of the offered load; 24/5 maps the
# reference offered loads (146.25 / 48.75 Mbit/s) onto the reference demanded
# capacities (702 / 234 Mbit/s) exactly.
DEFAULT_DEMAND_CAPACITY_FACTOR = Fraction(24, 5)


@dataclass(frozen=True)
class Trajectory:
    node_id: str
    samples: list[tuple[float, Point3]]

    def __post_init__(self):
        if not self.samples:
            raise ValueError(f"trajectory {self.node_id}: no samples")
        times = [t for t, _ in self.samples]
        if any(b <= a for a, b in zip(times, times[1:])):
            raise ValueError(f"trajectory {self.node_id}: times must be strictly increasing")

    @classmethod
    def static(cls, node_id: str, position: Point3, duration: float) -> "Trajectory":
        return cls(node_id, [(0.0, position), (duration, position)])

    def start_time(self) -> float:
        return self.samples[0][0]

    def end_time(self) -> float:
        return self.samples[-1][0]

    def covers(self, t0: float, t1: float) -> bool:
        return self.start_time() <= t0 and self.end_time() >= t1

    def position_at(self, t: float) -> Point3:
        """Linear interpolation; clamps to the first/last sample outside the span."""
        times = [s[0] for s in self.samples]
        if t <= times[0]:
            return self.samples[0][1]
        if t >= times[-1]:
            return self.samples[-1][1]
        i = bisect.bisect_right(times, t)
        t0, p0 = self.samples[i - 1]
        t1, p1 = self.samples[i]
        w = (t - t0) / (t1 - t0)
        return Point3(p0.x + w * (p1.x - p0.x),
                      p0.y + w * (p1.y - p0.y),
                      p0.z + w * (p1.z - p0.z))


@dataclass(frozen=True)
class ScenarioFap:
    trajectory: Trajectory
    demand_bps: float


@dataclass
class Scenario:
    name: str
    bounds: Cuboid
    faps: list[ScenarioFap]
    duration: float
    update_period: float
    sample_period: float = 1.0
    radio: RadioConfig = field(default_factory=RadioConfig)
    mcs_table: McsTable = field(default_factory=McsTable.default)
    demand_capacity_factor: Fraction = DEFAULT_DEMAND_CAPACITY_FACTOR
    fixed_positions: dict[str, Point3] = field(default_factory=dict)

    def __post_init__(self):
        if self.update_period < 1.0:
            warnings.warn(
                f"update period {self.update_period} s is below the 1 s the "
                "position-update machinery is meant for", stacklevel=2)
        for fap in self.faps:
            if not fap.trajectory.covers(0.0, self.duration):
                raise ValueError(
                    f"trajectory {fap.trajectory.node_id} does not cover "
                    f"[0, {self.duration}] s")

    def fap_states_at(self, t: float, for_constraints: bool = False) -> list[FapState]:
        """FAP snapshot at time t; with ``for_constraints`` demands are scaled
        to demanded link capacities."""
        states = []
        for fap in self.faps:
            demand = fap.demand_bps
            if for_constraints:
                demand = float(Fraction(demand) * self.demand_capacity_factor)
            states.append(FapState(fap.trajectory.node_id,
                                   fap.trajectory.position_at(t), demand))
        return states


def fair_share(n_uavs: int, top_rate_bps: float = TOP_MCS_RATE_BPS) -> float:
    """Reference per-FAP offered load: top PHY rate split across the N-1 FAPs."""
    if n_uavs < 2:
        raise ValueError("fair share needs at least one FAP plus the gateway")
    return float(Fraction(top_rate_bps) / (n_uavs - 1))


def _demand_pair(n_uavs: int, high_fraction: Fraction, ratio: int) -> tuple[float, float]:
    lam2 = Fraction(TOP_MCS_RATE_BPS) / (n_uavs - 1) * high_fraction
    lam1 = lam2 / ratio
    return float(lam1), float(lam2)


def scenario_a(demand_high_fraction: Fraction = Fraction(3, 4),
               ratio: int = 3, duration: float = 130.0) -> Scenario:
    """Four static FAPs on a 30 m square at 10 m altitude; the right side
    demands ``ratio`` times the left side's load.

    Ships the seven corridor candidate gateway positions (7.5 m spacing,
    approximate geometry, 10 m altitude) as named fixed placements.
    """
    lam1, lam2 = _demand_pair(5, Fraction(demand_high_fraction), ratio)
    bounds = Cuboid.from_dims(30.0, 30.0, 20.0)
    positions = {
        "left-front": Point3(0.0, 0.0, 10.0),
        "left-back": Point3(0.0, 30.0, 10.0),
        "right-front": Point3(30.0, 0.0, 10.0),
        "right-back": Point3(30.0, 30.0, 10.0),
    }
    faps = []
    for name, pos in positions.items():
        demand = lam2 if name.startswith("right") else lam1
        faps.append(ScenarioFap(Trajectory.static(name, pos, duration), demand))
    candidates = {
        "position-1": Point3(7.5, 15.0, 10.0),
        "position-2": Point3(22.5, 15.0, 10.0),
        "position-3": Point3(15.0, 7.5, 10.0),
        "position-4": Point3(15.0, 22.5, 10.0),
        "position-5": Point3(15.0, 15.0, 10.0),  # FAP centroid
        "position-6": Point3(15.0, 0.0, 10.0),
        "position-7": Point3(15.0, 30.0, 10.0),
    }
    return Scenario(name="scenario-a", bounds=bounds, faps=faps,
                    duration=duration, update_period=duration,
                    fixed_positions=candidates)


def generate_two_zone(n_faps: int, bounds: Cuboid, zone_split: float,
                      lambda1_bps: float, lambda2_bps: float,
                      duration: float, seed, name: str = "two-zone") -> Scenario:
    """Random static scenario with a low-demand and a high-demand zone.

    The venue is split along x at ``zone_split``; the low-demand FAPs are
    placed uniformly in the left part, the high-demand FAPs in the right part.
    Deterministic per seed.
    """
    if n_faps < 2:
        raise ValueError("need at least two FAPs for two zones")
    if lambda1_bps <= 0 or lambda2_bps <= 0:
        raise ValueError("zone demands must be positive")
    rng = random.Random(f"two-zone/{seed}")
    lo, hi = bounds.min_corner, bounds.max_corner
    split_x = lo.x + zone_split * (hi.x - lo.x)
    n_low = n_faps // 2
    faps = []
    for i in range(n_faps):
        low = i < n_low
        x0, x1 = (lo.x, split_x) if low else (split_x, hi.x)
        pos = Point3(rng.uniform(x0, x1), rng.uniform(lo.y, hi.y),
                     rng.uniform(max(lo.z, 1.0), hi.z))
        demand = lambda1_bps if low else lambda2_bps
        faps.append(ScenarioFap(
            Trajectory.static(f"fap-{i}", pos, duration), demand))
    return Scenario(name=name, bounds=bounds, faps=faps,
                    duration=duration, update_period=duration)


def scenario_b(l2_fraction: Fraction, ratio: int, seed,
               n_faps: int = 10, duration: float = 130.0) -> Scenario:
    """Ten FAPs in an 80 x 80 x 20 m venue forming two demand zones."""
    lam1, lam2 = _demand_pair(n_faps + 1, Fraction(l2_fraction), ratio)
    pct = int(round(float(l2_fraction) * 100))
    return generate_two_zone(
        n_faps, Cuboid.from_dims(80.0, 80.0, 20.0), 0.5, lam1, lam2,
        duration, seed, name=f"scenario-b-{pct}-{100 - pct}")


# --- waypoint files: one line per node of whitespace-separated t x y z quadruples ---

def save_waypoints(trajectories: list[Trajectory], path) -> None:
    with open(path, "w") as f:
        for traj in trajectories:
            fields = []
            for t, p in traj.samples:
                fields.extend(f"{v:.6f}" for v in (t, p.x, p.y, p.z))
            f.write(" ".join(fields) + "\n")


def load_waypoints(path) -> list[Trajectory]:
    trajectories = []
    with open(path) as f:
        for lineno, line in enumerate(f, start=1):
            tokens = line.split()
            if not tokens:
                continue
            if len(tokens) % 4 != 0:
                raise ValueError(
                    f"{path}:{lineno}: expected t x y z quadruples, "
                    f"got {len(tokens)} fields")
            try:
                values = [float(tok) for tok in tokens]
            except ValueError as exc:
                raise ValueError(f"{path}:{lineno}: {exc}") from exc
            samples = [(values[i], Point3(values[i + 1], values[i + 2], values[i + 3]))
                       for i in range(0, len(values), 4)]
            trajectories.append(Trajectory(f"node-{len(trajectories)}", samples))
    return trajectories


# --- scenario files (JSON) ---

def save_scenario(scenario: Scenario, path) -> None:
    doc = {
        "format_version": SCENARIO_FORMAT_VERSION,
        "name": scenario.name,
        "bounds": {"min": list(scenario.bounds.min_corner.as_tuple()),
                   "max": list(scenario.bounds.max_corner.as_tuple())},
        "duration_s": scenario.duration,
        "update_period_s": scenario.update_period,
        "sample_period_s": scenario.sample_period,
        "demand_capacity_factor": str(scenario.demand_capacity_factor),
        "radio": {
            "carrier_frequency_hz": scenario.radio.carrier_frequency_hz,
            "noise_floor_dbm": scenario.radio.noise_floor_dbm,
            "max_tx_power_dbm": scenario.radio.max_tx_power_dbm,
            "speed_of_light": scenario.radio.speed_of_light,
            "max_channel_capacity_bps": scenario.radio.max_channel_capacity_bps,
        },
        "mcs_table": [[e.index, e.data_rate_bps, e.min_snr_db]
                      for e in scenario.mcs_table],
        "faps": [{
            "id": fap.trajectory.node_id,
            "demand_bps": fap.demand_bps,
            "waypoints": [[t, p.x, p.y, p.z] for t, p in fap.trajectory.samples],
        } for fap in scenario.faps],
        "fixed_positions": {name: list(p.as_tuple())
                            for name, p in scenario.fixed_positions.items()},
    }
    with open(path, "w") as f:
        json.dump(doc, f, indent=2)
        f.write("\n")


def load_scenario(path) -> Scenario:
    with open(path) as f:
        doc = json.load(f)
    version = doc.get("format_version")
    if version != SCENARIO_FORMAT_VERSION:
        raise ValueError(f"{path}: unsupported scenario format version {version!r}")
    bounds = Cuboid(Point3(*doc["bounds"]["min"]), Point3(*doc["bounds"]["max"]))
    faps = [ScenarioFap(
        Trajectory(f["id"], [(w[0], Point3(w[1], w[2], w[3])) for w in f["waypoints"]]),
        f["demand_bps"]) for f in doc["faps"]]
    return Scenario(
        name=doc["name"],
        bounds=bounds,
        faps=faps,
        duration=doc["duration_s"],
        update_period=doc["update_period_s"],
        sample_period=doc["sample_period_s"],
        radio=RadioConfig(**doc["radio"]),
        mcs_table=McsTable([McsEntry(int(i), r, s) for i, r, s in doc["mcs_table"]]),
        demand_capacity_factor=Fraction(doc["demand_capacity_factor"]),
        fixed_positions={name: Point3(*xyz)
                         for name, xyz in doc.get("fixed_positions", {}).items()},
    )


def plan_gateway_track(scenario: Scenario, strategy: PlacementStrategy,
                       ) -> tuple[Trajectory, list[PlacementSolution | None]]:
    """Gateway trajectory under a placement strategy.

    Placements are computed at each update instant and sampled on the scenario
    grid with linear interpolation in between (constant-velocity transfer).
    """
    if isinstance(strategy, RandomWaypoint):
        track = random_waypoint_track(
            scenario.bounds, strategy.speed_min, strategy.speed_max,
            scenario.duration, scenario.sample_period, strategy.seed)
        return track, [None] * _n_updates(scenario)

    instants = [k * scenario.update_period for k in range(_n_updates(scenario))]
    anchors: list[tuple[float, Point3]] = []
    solutions: list[PlacementSolution | None] = []
    for t_k in instants:
        if isinstance(strategy, Gwp):
            states = scenario.fap_states_at(t_k, for_constraints=True)
            try:
                sol = gwp_solve(states, scenario.mcs_table, scenario.radio,
                                scenario.bounds)
            except NoSolutionError as exc:
                raise NoSolutionError(f"at t_k = {t_k} s: {exc}") from exc
            anchors.append((t_k, sol.position))
            solutions.append(sol)
        elif isinstance(strategy, FapCentroid):
            anchors.append((t_k, fap_centroid(scenario.fap_states_at(t_k))))
            solutions.append(None)
        elif isinstance(strategy, VenueCenter):
            anchors.append((t_k, venue_center(scenario.bounds)))
            solutions.append(None)
        else:
            raise TypeError(f"unknown placement strategy: {strategy!r}")

    anchor_traj = Trajectory("gw", anchors) if len(anchors) > 1 else None
    samples = []
    t = 0.0
    while t <= scenario.duration + 1e-9:
        pos = anchor_traj.position_at(t) if anchor_traj else anchors[0][1]
        samples.append((t, pos))
        t += scenario.sample_period
    return Trajectory("gw", samples), solutions


def _n_updates(scenario: Scenario) -> int:
    return int(scenario.duration // scenario.update_period) + 1
