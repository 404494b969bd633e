"""Free-space link-budget arithmetic and the MCS index / SNR / data-rate table.

All powers are in dBm, SNRs in dB, distances in metres, rates in bit/s.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from importlib import resources

FOUR_PI = 4.0 * math.pi


class DemandUnsatisfiableError(ValueError):
    """Raised when an offered demand exceeds the highest MCS data rate."""


@dataclass(frozen=True)
class RadioConfig:
    carrier_frequency_hz: float = 5250e6
    noise_floor_dbm: float = -85.0
    max_tx_power_dbm: float = 30.0
    speed_of_light: float = 3e8  # exact 3e8 reproduces the textbook constant K
    max_channel_capacity_bps: float = 780e6

    def __post_init__(self):
        if self.carrier_frequency_hz <= 0:
            raise ValueError("carrier frequency must be positive")
        if self.max_tx_power_dbm < 0:
            raise ValueError("max TX power must be >= 0 dBm")
        if self.speed_of_light <= 0:
            raise ValueError("speed of light must be positive")
        if self.max_channel_capacity_bps <= 0:
            raise ValueError("max channel capacity must be positive")

    @property
    def k_constant_db(self) -> float:
        """Link-budget constant: SNR at 1 m for 0 dBm TX power."""
        return (-20.0 * math.log10(self.carrier_frequency_hz)
                - 20.0 * math.log10(FOUR_PI / self.speed_of_light)
                - self.noise_floor_dbm)


def fspl_db(distance_m: float, config: RadioConfig) -> float:
    """Free-space path loss in dB at the configured carrier frequency."""
    if distance_m <= 0:
        raise ValueError(f"distance must be positive, got {distance_m}")
    return (20.0 * math.log10(distance_m)
            + 20.0 * math.log10(config.carrier_frequency_hz)
            + 20.0 * math.log10(FOUR_PI / config.speed_of_light))


def snr_db(tx_power_dbm: float, distance_m: float, config: RadioConfig) -> float:
    """Received SNR over a line-of-sight link of the given length."""
    return tx_power_dbm - fspl_db(distance_m, config) - config.noise_floor_dbm


def max_distance(tx_power_dbm: float, min_snr_db: float, config: RadioConfig) -> float:
    """Largest link length that still meets ``min_snr_db``; inverse of snr_db.

    May exceed any venue of interest; callers clamp.
    """
    return 10.0 ** ((config.k_constant_db + tx_power_dbm - min_snr_db) / 20.0)


@dataclass(frozen=True)
class McsEntry:
    index: int
    data_rate_bps: float
    min_snr_db: float

    def __post_init__(self):
        if self.index < 0:
            raise ValueError("MCS index must be >= 0")
        if self.data_rate_bps <= 0:
            raise ValueError("MCS data rate must be positive")


class McsTable:
    """Ordered MCS entries, jointly monotone in index, rate, and SNR threshold."""

    def __init__(self, entries: list[McsEntry]):
        if not entries:
            raise ValueError("MCS table must not be empty")
        for prev, cur in zip(entries, entries[1:]):
            if not (cur.index > prev.index
                    and cur.data_rate_bps > prev.data_rate_bps
                    and cur.min_snr_db > prev.min_snr_db):
                raise ValueError(
                    f"MCS table not jointly monotone between indexes "
                    f"{prev.index} and {cur.index}")
        self.entries = list(entries)

    def __iter__(self):
        return iter(self.entries)

    def __len__(self):
        return len(self.entries)

    @property
    def max_rate_bps(self) -> float:
        return self.entries[-1].data_rate_bps

    def min_mcs_for_demand(self, demand_bps: float) -> McsEntry:
        """Lowest-index entry whose data rate covers ``demand_bps``."""
        if demand_bps <= 0:
            raise ValueError("demand must be positive")
        for entry in self.entries:
            if entry.data_rate_bps >= demand_bps:
                return entry
        raise DemandUnsatisfiableError(
            f"demand {demand_bps:.3e} bit/s exceeds top MCS rate "
            f"{self.max_rate_bps:.3e} bit/s")

    def rate_for_snr(self, snr: float) -> McsEntry | None:
        """Highest entry usable at ``snr``; None when no link is possible."""
        best = None
        for entry in self.entries:
            if entry.min_snr_db <= snr:
                best = entry
            else:
                break
        return best

    @classmethod
    def from_csv(cls, path) -> "McsTable":
        """Load from CSV columns index,data_rate_bps,min_snr_db; '#' comments allowed."""
        entries = []
        with open(path, newline="") as f:
            for lineno, row in enumerate(csv.reader(f), start=1):
                if not row or row[0].lstrip().startswith("#"):
                    continue
                if len(row) != 3:
                    raise ValueError(f"{path}:{lineno}: expected 3 columns, got {len(row)}")
                try:
                    entries.append(McsEntry(int(row[0]), float(row[1]), float(row[2])))
                except ValueError as exc:
                    raise ValueError(f"{path}:{lineno}: {exc}") from exc
        return cls(entries)

    @classmethod
    def default(cls) -> "McsTable":
        """802.11ac table for 160 MHz, one spatial stream, 800 ns GI.

        The MCS 3 and MCS 8 rows carry the reference rate/SNR pairs
        (234 Mbit/s @ 20 dB, 702 Mbit/s @ 35 dB); the remaining rows are
        configuration defaults taken from public 802.11ac rate tables.
        """
        ref = resources.files("gwplan") / "data" / "mcs_80211ac_160mhz_1ss_gi800.csv"
        with resources.as_file(ref) as path:
            return cls.from_csv(path)
