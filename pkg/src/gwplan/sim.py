"""Desk-scale discrete-event simulator of a single-collision-domain flying network.

Each FAP offers Poisson UDP traffic of fixed-size packets into its own CoDel
queue; a single shared medium serves one frame at a time, picking uniformly at
random among backlogged FAPs with a usable link (long-run CSMA/CA fairness
abstraction, no collision or backoff timing).  Link rates follow the SNR at
the current positions, refreshed on the scenario sampling grid.
"""
from __future__ import annotations

import heapq
import json
import math
import random
from collections import deque
from dataclasses import dataclass, field

from .rf import snr_db
from .scenario import Scenario, Trajectory

_INF = math.inf


class ConfigurationError(ValueError):
    pass


@dataclass(frozen=True)
class CodelConfig:
    # ns-3 style defaults; configuration, not reference values
    target_sojourn_s: float = 0.005
    interval_s: float = 0.100
    queue_limit_pkts: int = 1000

    def __post_init__(self):
        if self.target_sojourn_s <= 0 or self.interval_s <= 0 or self.queue_limit_pkts <= 0:
            raise ValueError("CoDel parameters must be positive")


@dataclass(frozen=True)
class SimConfig:
    packet_size_bits: int = 11200  # 1400 bytes
    warmup_s: float = 30.0
    duration_s: float = 130.0
    codel: CodelConfig = field(default_factory=CodelConfig)
    seed: int | str = 1
    tx_power_dbm: float = 20.0
    frame_overhead_s: float = 0.0  # fixed per-frame MAC overhead for sensitivity runs

    def __post_init__(self):
        if self.packet_size_bits <= 0:
            raise ValueError("packet size must be positive")
        if not self.warmup_s < self.duration_s:
            raise ValueError("warmup must be shorter than the total duration")


@dataclass
class SimResult:
    warmup_s: float
    duration_s: float
    throughput_series_bps: list[float]
    delays_s: list[float]
    flow_offered_bps: dict[str, float]
    flow_received_bps: dict[str, float]
    flow_generated: dict[str, int]
    flow_delivered: dict[str, int]
    flow_codel_drops: dict[str, int]
    flow_tail_drops: dict[str, int]
    flow_residual: dict[str, int]  # queued or in flight at the end

    @property
    def measure_time_s(self) -> float:
        return self.duration_s - self.warmup_s

    @property
    def aggregate_throughput_bps(self) -> float:
        return sum(self.flow_received_bps.values())

    @property
    def mean_delay_s(self) -> float:
        if not self.delays_s:
            raise ValueError("no delivered packets, mean delay undefined")
        return sum(self.delays_s) / len(self.delays_s)


class CodelQueue:
    """Single CoDel queue over packet generation timestamps."""

    def __init__(self, config: CodelConfig):
        self.q: deque[float] = deque()
        self.target = config.target_sojourn_s
        self.interval = config.interval_s
        self.limit = config.queue_limit_pkts
        self.first_above_time = 0.0
        self.drop_next = 0.0
        self.count = 0
        self.dropping = False
        self.codel_drops = 0
        self.tail_drops = 0

    def __len__(self):
        return len(self.q)

    def enqueue(self, now: float) -> bool:
        if len(self.q) >= self.limit:
            self.tail_drops += 1
            return False
        self.q.append(now)
        return True

    def _dodeque(self, now: float) -> tuple[float | None, bool]:
        if not self.q:
            self.first_above_time = 0.0
            return None, False
        gen = self.q.popleft()
        if now - gen < self.target:
            self.first_above_time = 0.0
            return gen, False
        if self.first_above_time == 0.0:
            self.first_above_time = now + self.interval
        elif now >= self.first_above_time:
            return gen, True
        return gen, False

    def dequeue(self, now: float) -> float | None:
        gen, ok_to_drop = self._dodeque(now)
        if gen is None:
            self.dropping = False
            return None
        if self.dropping:
            if not ok_to_drop:
                self.dropping = False
            elif now >= self.drop_next:
                while now >= self.drop_next and self.dropping:
                    self.codel_drops += 1
                    self.count += 1
                    gen, ok_to_drop = self._dodeque(now)
                    if not ok_to_drop:
                        self.dropping = False
                    else:
                        # drop spacing shrinks with the inverse square root of count
                        self.drop_next += self.interval / math.sqrt(self.count)
                if gen is None:
                    return None
        elif ok_to_drop:
            self.codel_drops += 1
            gen, ok_to_drop = self._dodeque(now)
            self.dropping = True
            # re-entering shortly after the last episode resumes near the
            # drop rate that controlled the queue, instead of restarting
            if now - self.drop_next < 16 * self.interval:
                self.count = self.count - 2 if self.count > 2 else 1
            else:
                self.count = 1
            self.drop_next = now + self.interval / math.sqrt(self.count)
            if gen is None:
                self.dropping = False
                return None
        return gen


def analytic_single_link_oracle(link_rate_bps: float, offered_bps: float,
                                packet_size_bits: int) -> tuple[float, float | None]:
    """M/D/1 throughput and mean sojourn time for a single stable link.

    Returns (throughput, mean_delay); mean_delay is None when the offered load
    saturates the link and the delay is queue-limited rather than bounded.
    """
    if link_rate_bps <= 0:
        raise ValueError("link rate must be positive")
    service = packet_size_bits / link_rate_bps
    if offered_bps >= link_rate_bps:
        return link_rate_bps, None
    rho = offered_bps / link_rate_bps
    return offered_bps, service + rho * service / (2.0 * (1.0 - rho))


def run_sim(scenario: Scenario, gw_track: Trajectory, config: SimConfig) -> SimResult:
    """Event-driven run over [0, duration); traffic starts after the warmup.

    Deterministic per (scenario, gw_track, config): per-flow Poisson streams
    use independent substreams keyed by (seed, flow id), and the medium's
    station selection uses its own substream.
    """
    duration = config.duration_s
    warmup = config.warmup_s
    if not gw_track.covers(0.0, duration):
        raise ConfigurationError(
            f"gateway track spans [{gw_track.start_time()}, {gw_track.end_time()}] s "
            f"but the simulation needs [0, {duration}] s")

    flows = scenario.faps
    n = len(flows)
    ids = [f.trajectory.node_id for f in flows]
    packet_bits = config.packet_size_bits
    pkt_rate = [f.demand_bps / packet_bits for f in flows]
    queues = [CodelQueue(config.codel) for _ in flows]
    flow_rng = [random.Random(f"{config.seed}/flow/{fid}") for fid in ids]
    medium_rng = random.Random(f"{config.seed}/medium")

    airtime: list[float | None] = [None] * n

    def refresh_rates(t: float) -> None:
        gw = gw_track.position_at(t).as_tuple()
        for i, flow in enumerate(flows):
            d = max(math.dist(flow.trajectory.position_at(t).as_tuple(), gw), 1e-6)
            entry = scenario.mcs_table.rate_for_snr(
                snr_db(config.tx_power_dbm, d, scenario.radio))
            airtime[i] = (None if entry is None
                          else packet_bits / entry.data_rate_bps + config.frame_overhead_s)

    generated = [0] * n
    delivered = [0] * n
    bits = [0] * n
    delays: list[float] = []
    n_bins = int(math.floor(duration - warmup + 1e-9))
    bins = [0] * n_bins

    arrivals: list[tuple[float, int]] = []
    for i in range(n):
        if pkt_rate[i] > 0:
            heapq.heappush(arrivals, (warmup + flow_rng[i].expovariate(pkt_rate[i]), i))

    busy = False
    serving_flow = -1
    serving_gen = 0.0
    completion = _INF
    next_update = 0.0
    refresh_pending = True

    def try_start(now: float) -> None:
        nonlocal busy, serving_flow, serving_gen, completion
        candidates = [i for i in range(n) if airtime[i] is not None and queues[i].q]
        while candidates:
            k = medium_rng.randrange(len(candidates))
            i = candidates[k]
            gen = queues[i].dequeue(now)
            if gen is None:
                del candidates[k]
                continue
            busy = True
            serving_flow = i
            serving_gen = gen
            completion = now + airtime[i]
            return

    while True:
        t_arr = arrivals[0][0] if arrivals else _INF
        t_up = next_update if next_update <= duration else _INF
        t = min(t_up, completion, t_arr)
        if t >= duration:
            break
        if t_up <= completion and t_up <= t_arr:
            refresh_rates(t_up)
            next_update += scenario.sample_period
            if not busy:
                try_start(t_up)
        elif completion <= t_arr:
            tc = completion
            i = serving_flow
            delivered[i] += 1
            bits[i] += packet_bits
            delays.append(tc - serving_gen)
            idx = int(tc - warmup)
            if 0 <= idx < n_bins:
                bins[idx] += packet_bits
            busy = False
            completion = _INF
            try_start(tc)
        else:
            ta, i = heapq.heappop(arrivals)
            generated[i] += 1
            queues[i].enqueue(ta)
            heapq.heappush(arrivals, (ta + flow_rng[i].expovariate(pkt_rate[i]), i))
            if not busy:
                try_start(ta)

    measure = duration - warmup
    residual = [len(queues[i]) + (1 if busy and serving_flow == i else 0)
                for i in range(n)]
    return SimResult(
        warmup_s=warmup,
        duration_s=duration,
        throughput_series_bps=[float(b) for b in bins],
        delays_s=delays,
        flow_offered_bps={ids[i]: flows[i].demand_bps for i in range(n)},
        flow_received_bps={ids[i]: bits[i] / measure for i in range(n)},
        flow_generated={ids[i]: generated[i] for i in range(n)},
        flow_delivered={ids[i]: delivered[i] for i in range(n)},
        flow_codel_drops={ids[i]: queues[i].codel_drops for i in range(n)},
        flow_tail_drops={ids[i]: queues[i].tail_drops for i in range(n)},
        flow_residual={ids[i]: residual[i] for i in range(n)},
    )


def write_throughput_csv(result: SimResult, path) -> None:
    with open(path, "w") as f:
        f.write("t_s,R_bps\n")
        for k, bps in enumerate(result.throughput_series_bps):
            f.write(f"{result.warmup_s + k},{bps}\n")


def write_delays_csv(result: SimResult, path) -> None:
    with open(path, "w") as f:
        f.write("delay_s\n")
        for d in result.delays_s:
            f.write(f"{d}\n")


def write_summary_json(result: SimResult, path) -> None:
    from .analysis import percentile

    summary = {
        "aggregate_throughput_bps": result.aggregate_throughput_bps,
        "mean_delay_s": result.mean_delay_s if result.delays_s else None,
        "delay_percentiles_s": (
            {f"p{int(p * 100)}": percentile(result.delays_s, p)
             for p in (0.5, 0.9, 0.99)} if result.delays_s else {}),
        "flows": {fid: {
            "offered_bps": result.flow_offered_bps[fid],
            "received_bps": result.flow_received_bps[fid],
            "generated": result.flow_generated[fid],
            "delivered": result.flow_delivered[fid],
            "codel_drops": result.flow_codel_drops[fid],
            "tail_drops": result.flow_tail_drops[fid],
            "residual": result.flow_residual[fid],
        } for fid in result.flow_offered_bps},
    }
    with open(path, "w") as f:
        json.dump(summary, f, indent=2)
        f.write("\n")
