"""Fleet CSV ingestion, synthetic fleet generation and report emission.

Fleet CSV layout (header required, one flight per row, aircraft histories in
flight order)::

    aircraft_id,distance_km,flight_time_h,seat_load_factor,taxi_origin_min,taxi_dest_min
"""
from __future__ import annotations

import configparser
import csv
import dataclasses
import io
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy import stats

from fdi.errors import ValidationError
from fdi.performance import FlightRecord, distance_for_flight_time

FLEET_COLUMNS = ("aircraft_id", "distance_km", "flight_time_h", "seat_load_factor",
                 "taxi_origin_min", "taxi_dest_min")
_RECORD_FIELDS = ("distance", "flight_time", "seat_load_factor", "taxi_time_origin",
                  "taxi_time_dest")


@dataclass
class FleetDataset:
    histories: dict  # aircraft_id -> list[FlightRecord]
    provenance: str = ""

    def __len__(self):
        return len(self.histories)

    @property
    def flight_count(self):
        return sum(len(h) for h in self.histories.values())


def parse_fleet_text(text, source="<string>"):
    reader = csv.reader(io.StringIO(text))
    header = next(reader, None)
    if header is None:
        raise ValidationError(f"{source}: no records")
    if tuple(h.strip() for h in header) != FLEET_COLUMNS:
        raise ValidationError(f"{source}: line 1: header must be {','.join(FLEET_COLUMNS)}")
    histories = {}
    for row in reader:
        line = reader.line_num
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) != len(FLEET_COLUMNS):
            raise ValidationError(f"{source}: line {line}: expected {len(FLEET_COLUMNS)} "
                                  f"columns, got {len(row)}")
        values = []
        for name, raw in zip(FLEET_COLUMNS[1:], row[1:]):
            try:
                values.append(float(raw))
            except ValueError:
                raise ValidationError(f"{source}: line {line}: {name}: not a number: "
                                      f"{raw!r}") from None
        try:
            record = FlightRecord(row[0].strip(), *values)
        except ValidationError as exc:
            name = str(exc).split(":", 1)[0]
            column = dict(zip(_RECORD_FIELDS, FLEET_COLUMNS[1:])).get(name, name)
            raise ValidationError(f"{source}: line {line}: {column}: "
                                  f"{str(exc).split(':', 1)[-1].strip()}") from None
        histories.setdefault(record.aircraft_id, []).append(record)
    if not histories:
        raise ValidationError(f"{source}: no records")
    return FleetDataset(histories, provenance=f"parsed from {source}")


def parse_fleet_csv(path):
    path = Path(path)
    return parse_fleet_text(path.read_text(encoding="utf-8"), str(path))


def format_fleet_csv(dataset):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(FLEET_COLUMNS)
    for history in dataset.histories.values():
        for r in history:
            writer.writerow([r.aircraft_id, repr(r.distance), repr(r.flight_time),
                             repr(r.seat_load_factor), repr(r.taxi_time_origin),
                             repr(r.taxi_time_dest)])
    return buf.getvalue()


def write_fleet_csv(dataset, path):
    Path(path).write_text(format_fleet_csv(dataset), encoding="utf-8")


# --- synthetic fleet ------------------------------------------------------------

@dataclass(frozen=True)
class SyntheticFleetSpec:
    """Distributions of per-aircraft averages and of per-flight scatter.

    Flight time and taxi time are symmetric truncated normals drawn in
    antithetic pairs, so sample means sit on the requested means. Seat load
    factor is Beta distributed. Distance follows flight time through the
    climb/cruise/descent schedule, optionally with relative scatter
    ``distance_jitter`` (routing, winds).
    """

    seed: int
    aircraft_count: int = 1000
    flights_per_aircraft: int = 100
    flight_time_mean: float = 2.0  # h
    flight_time_sd: float = 0.6  # h, between aircraft
    flight_time_within: float = 0.3  # relative sd between flights of one aircraft
    min_flight_time: float = 0.3  # h
    lf_mean: float = 0.8
    lf_sd: float = 0.08  # between aircraft
    lf_within_sd: float = 0.1  # between flights
    taxi_mean: float = 25.0  # min, origin + destination
    taxi_sd: float = 5.0  # min, between aircraft
    distance_jitter: float = 0.0

    def validate(self):
        checks = [
            (self.aircraft_count >= 1, "aircraft_count", "must be >= 1"),
            (self.flights_per_aircraft >= 1, "flights_per_aircraft", "must be >= 1"),
            (self.flight_time_mean > self.min_flight_time > 0, "flight_time_mean",
             "must exceed min_flight_time > 0"),
            (self.flight_time_sd >= 0 and self.flight_time_within >= 0, "flight_time_sd",
             "spreads must be >= 0"),
            (0 < self.lf_mean < 1, "lf_mean", "must lie in (0, 1)"),
            (self.taxi_mean > 0 and self.taxi_sd >= 0, "taxi_mean", "must be > 0"),
            (0 <= self.distance_jitter < 0.5, "distance_jitter", "must lie in [0, 0.5)"),
        ]
        for sd_name in ("lf_sd", "lf_within_sd"):
            sd = getattr(self, sd_name)
            checks.append((0 <= sd and sd ** 2 < self.lf_mean * (1 - self.lf_mean), sd_name,
                           "too large for a Beta distribution with this mean"))
        for ok, name, msg in checks:
            if not ok:
                raise ValidationError(f"{name}: {msg}")
        return self


def load_synthetic_spec(path):
    parser = configparser.ConfigParser(inline_comment_prefixes=("#",), interpolation=None)
    try:
        parser.read_string("[spec]\n" + Path(path).read_text(encoding="utf-8"))
    except configparser.Error as exc:
        raise ValidationError(f"synthetic spec parse error: {exc}") from None
    values = dict(parser["spec"])
    kwargs = {}
    for f in dataclasses.fields(SyntheticFleetSpec):
        if f.name in values:
            raw = values.pop(f.name)
            try:
                kwargs[f.name] = int(raw) if f.type == "int" else float(raw)
            except ValueError:
                raise ValidationError(f"{f.name}: cannot parse {raw!r}") from None
    if values:
        raise ValidationError(f"unknown synthetic spec keys: {', '.join(sorted(values))}")
    if "seed" not in kwargs:
        raise ValidationError("seed: required")
    return SyntheticFleetSpec(**kwargs).validate()


def _antithetic_truncnorm(rng, mean, sd, lower, size):
    """Symmetric truncated normal around ``mean``, drawn as +/- pairs."""
    if sd == 0 or size == 0:
        return np.full(size, float(mean))
    k = min(3.0, (mean - lower) / sd)
    half = stats.truncnorm.rvs(-k, k, size=(size + 1) // 2, random_state=rng)
    z = np.concatenate([half, -half])[:size]
    return mean + sd * rng.permutation(z)


def _beta(rng, mean, sd, size):
    mean = np.asarray(mean, dtype=float)
    if sd == 0:
        return np.broadcast_to(mean, (size,)).copy()
    conc = mean * (1 - mean) / sd ** 2 - 1.0
    conc = np.maximum(conc, 1e-3)
    return rng.beta(mean * conc, (1 - mean) * conc, size=size)


def generate_synthetic_fleet(spec, profile):
    """Deterministic synthetic fleet (numpy PCG64 seeded with ``spec.seed``)."""
    spec.validate()
    rng = np.random.Generator(np.random.PCG64(spec.seed))
    n_ac, n_fl = spec.aircraft_count, spec.flights_per_aircraft
    ac_time = _antithetic_truncnorm(rng, spec.flight_time_mean, spec.flight_time_sd,
                                    spec.min_flight_time, n_ac)
    ac_lf = _beta(rng, spec.lf_mean, spec.lf_sd, n_ac)
    ac_taxi = _antithetic_truncnorm(rng, spec.taxi_mean, spec.taxi_sd, 0.0, n_ac)
    times = np.empty((n_ac, n_fl))
    lfs = np.empty((n_ac, n_fl))
    for i in range(n_ac):
        times[i] = _antithetic_truncnorm(rng, ac_time[i], spec.flight_time_within * ac_time[i],
                                         spec.min_flight_time, n_fl)
        lfs[i] = _beta(rng, ac_lf[i], min(spec.lf_within_sd,
                                          0.99 * math.sqrt(ac_lf[i] * (1 - ac_lf[i]))), n_fl)
    distances = np.atleast_1d(distance_for_flight_time(times.ravel(), profile)).reshape(times.shape)
    if spec.distance_jitter:
        distances = distances * (1.0 + spec.distance_jitter
                                 * np.clip(rng.standard_normal(times.shape), -2, 2))
    width = len(str(n_ac))
    histories = {}
    for i in range(n_ac):
        aid = f"AC{i + 1:0{width}d}"
        half = float(ac_taxi[i]) / 2.0
        histories[aid] = [
            FlightRecord(aid, float(distances[i, j]), float(times[i, j]),
                         float(np.clip(lfs[i, j], 0.0, 1.0)), half, half)
            for j in range(n_fl)
        ]
    return FleetDataset(histories, provenance=f"synthetic, {spec!r}")


# --- reports --------------------------------------------------------------------

def scenario_slug(label):
    return label.replace(":", "_")


def _write_csv(path, header, rows):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


def emit_reports(result, out_dir):
    """Write summary, scatter, histogram and lifetime-bar CSVs; return the paths."""
    if not result.outcomes:
        raise ValidationError("no outcomes to report")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []

    path = out / "summary.csv"
    _write_csv(path, ("criterion", "mean_fc", "fc_ratio_pct", "mean_fh", "fh_ratio_pct"),
               [(r.label, repr(r.mean_fc), repr(r.fc_ratio), repr(r.mean_fh), repr(r.fh_ratio))
                for r in result.summary.rows])
    written.append(path)

    path = out / "lifetime_bars.csv"
    _write_csv(path, ("criterion", "goal", "mean_fc", "mean_fh"),
               [(r.label, r.label.split(":")[0].rsplit("-", 1)[-1], repr(r.mean_fc),
                 repr(r.mean_fh)) for r in result.summary.rows])
    written.append(path)

    by_label = {}
    for o in result.outcomes:
        by_label.setdefault(o.scenario, []).append(o)
    for label, group in by_label.items():
        path = out / f"scatter_{scenario_slug(label)}.csv"
        _write_csv(path, ("aircraft_id", "wing_fdi", "fuselage_fdi", "flight_cycles",
                          "flight_hours", "retired_because"),
                   [(o.aircraft_id, repr(o.state.wing_fdi), repr(o.state.fuselage_fdi),
                     o.state.flight_cycles, repr(o.state.flight_hours), o.retired_because)
                    for o in group])
        written.append(path)

    for (label, axis), (edges, counts) in result.summary.histograms.items():
        path = out / f"hist_{scenario_slug(label)}_{axis}.csv"
        _write_csv(path, ("bin_lo", "bin_hi", "count"),
                   [(repr(float(lo)), repr(float(hi)), int(c))
                    for lo, hi, c in zip(edges[:-1], edges[1:], counts)])
        written.append(path)
    return written


def read_table(path):
    """Read an emitted CSV back as a list of dicts, numbers converted to float."""
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.DictReader(fh))
    for row in rows:
        for key, value in row.items():
            try:
                row[key] = float(value)
            except ValueError:
                pass
    return rows
