"""Wing-root fatigue damage per flight from a scaled TWIST spectrum.

Stresses scale linearly with takeoff weight (the design mean stress is reached
at the design weight), flight-segment cycle counts scale with flight time and
ground-segment counts with total taxi time. The ground-air-ground cycle occurs
once per flight.
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import numpy as np

from fdi.errors import ValidationError
from fdi.fatigue import SEGMENTS, LoadCycleBin, LoadSpectrum, damage_per_cycle, miner_damage

TWIST_COLUMNS = ("segment", "relative_mean", "relative_amplitude", "cycles_per_block")


@dataclass(frozen=True)
class TwistRow:
    segment: str
    relative_mean: float
    relative_amplitude: float
    cycles_per_block: float


@dataclass(frozen=True)
class TwistTable:
    rows: tuple
    block_flights: int = 40000

    def __post_init__(self):
        for i, row in enumerate(self.rows, 1):
            if row.segment not in SEGMENTS:
                raise ValidationError(f"row {i}: unknown segment {row.segment!r}")
            if not row.relative_amplitude > 0:
                raise ValidationError(f"row {i}: relative_amplitude must be > 0")
            if not row.cycles_per_block > 0:
                raise ValidationError(f"row {i}: cycles_per_block must be > 0")
            if row.segment == "ground" and not row.relative_mean < 0:
                raise ValidationError(f"row {i}: ground rows need a negative relative_mean")
        gag = [r for r in self.rows if r.segment == "gag"]
        if len(gag) != 1:
            raise ValidationError(f"exactly one gag row required, found {len(gag)}")
        if gag[0].cycles_per_block != self.block_flights:
            raise ValidationError("gag row must occur once per flight "
                                  f"(cycles_per_block = {self.block_flights})")
        if not any(r.segment == "flight" for r in self.rows):
            raise ValidationError("at least one flight row required")

    def segment_arrays(self, segment):
        """(relative_mean, relative_amplitude, cycles_per_flight) for one segment."""
        rows = [r for r in self.rows if r.segment == segment]
        return (np.array([r.relative_mean for r in rows]),
                np.array([r.relative_amplitude for r in rows]),
                np.array([r.cycles_per_block for r in rows]) / self.block_flights)


@dataclass(frozen=True)
class WingScalingRules:
    design_mean_stress: float = 100.0  # MPa
    design_flight_time: float = 2.0  # h
    design_taxi_time: float = 25.0  # min
    design_weight: float = 73500.0  # kg

    @classmethod
    def from_config(cls, cfg):
        d = cfg.design
        return cls(d.design_mean_stress, d.design_flight_time, d.design_taxi_time,
                   cfg.aircraft.mtow)


def parse_twist(text, block_flights=40000):
    lines = [ln for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    reader = csv.reader(io.StringIO("\n".join(lines)))
    header = next(reader, None)
    if header is None or tuple(h.strip() for h in header) != TWIST_COLUMNS:
        raise ValidationError(f"TWIST header must be {','.join(TWIST_COLUMNS)}")
    rows = []
    for lineno, rec in enumerate(reader, 2):
        if len(rec) != 4:
            raise ValidationError(f"TWIST row {lineno}: expected 4 columns, got {len(rec)}")
        try:
            rows.append(TwistRow(rec[0].strip(), float(rec[1]), float(rec[2]), float(rec[3])))
        except ValueError:
            raise ValidationError(f"TWIST row {lineno}: non-numeric value") from None
    return TwistTable(tuple(rows), block_flights)


def load_twist(path=None, block_flights=40000):
    """Read a TWIST CSV; ``None`` loads the shipped table."""
    if path is None:
        text = resources.files("fdi").joinpath("data/twist.csv").read_text(encoding="utf-8")
    else:
        text = Path(path).read_text(encoding="utf-8")
    return parse_twist(text, block_flights)


def _stress_scale(weight, rules):
    return rules.design_mean_stress * np.asarray(weight, dtype=float) / rules.design_weight


def _count_factors(flight_time, taxi_time, rules):
    return {
        "flight": np.asarray(flight_time, dtype=float) / rules.design_flight_time,
        "ground": np.asarray(taxi_time, dtype=float) / rules.design_taxi_time,
        "gag": np.ones_like(np.asarray(flight_time, dtype=float)),
    }


def scale_spectrum(twist, loads, rules):
    """One flight's load spectrum for the given :class:`FlightLoadsInput`."""
    stress = float(_stress_scale(loads.takeoff_weight, rules))
    factors = _count_factors(loads.flight_time, loads.total_taxi_time, rules)
    bins = []
    for row in twist.rows:
        count = row.cycles_per_block / twist.block_flights * float(factors[row.segment])
        bins.append(LoadCycleBin(row.relative_mean * stress, row.relative_amplitude * stress,
                                 count, row.segment))
    return LoadSpectrum(tuple(bins))


def wing_damage_components(weight, flight_time, taxi_time, twist, rules, mat):
    """Per-flight damage split into flight, ground and gag parts (vectorized)."""
    weight, flight_time, taxi_time = np.broadcast_arrays(
        np.asarray(weight, dtype=float), np.asarray(flight_time, dtype=float),
        np.asarray(taxi_time, dtype=float))
    shape = weight.shape
    stress = _stress_scale(weight, rules).ravel()
    factors = {k: v.ravel() for k, v in _count_factors(flight_time, taxi_time, rules).items()}
    out = {}
    for segment in SEGMENTS:
        rel_mean, rel_amp, per_flight = twist.segment_arrays(segment)
        dpc = damage_per_cycle(np.outer(stress, rel_mean), np.outer(stress, rel_amp), mat)
        unit = np.sum(dpc.astype(np.longdouble) * per_flight, axis=1)
        out[segment] = (unit * factors[segment]).astype(float).reshape(shape)
    return out


def wing_damage_array(weight, flight_time, taxi_time, twist, rules, mat):
    parts = wing_damage_components(weight, flight_time, taxi_time, twist, rules, mat)
    total = parts["flight"].astype(np.longdouble) + parts["ground"] + parts["gag"]
    return total.astype(float)


def wing_damage_per_flight(loads, twist, rules, mat):
    """Miner damage of one flight's scaled TWIST spectrum."""
    return miner_damage(scale_spectrum(twist, loads, rules), mat)
