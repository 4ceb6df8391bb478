"""Fleet lifetime simulation under service-goal and FDI retirement criteria.

FDIs are normalized so that an aircraft flying design flights until the
Extended Service Goal ends at exactly 1.0 for both wing and fuselage. Each
aircraft repeats its recorded history, in order, until the first flight after
which any limit of its criterion is met.
"""
from __future__ import annotations

import dataclasses
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from fdi.errors import ValidationError
from fdi.fuselage import fuselage_damage_array
from fdi.performance import (FlightRecord, distance_for_flight_time, flight_time,
                             max_altitude, takeoff_weight)
from fdi.wing import WingScalingRules, wing_damage_array

QUANTITIES = ("fc", "fh", "wing_fdi", "fuselage_fdi")


@dataclass(frozen=True)
class FdiState:
    wing_fdi: float = 0.0
    fuselage_fdi: float = 0.0
    flight_cycles: int = 0
    flight_hours: float = 0.0


@dataclass(frozen=True)
class ServiceGoal:
    fc_limit: float
    fh_limit: float

    def limits(self):
        return (self.fc_limit, self.fh_limit, math.inf, math.inf)


@dataclass(frozen=True)
class FdiThreshold:
    wing_limit: float
    fuselage_limit: float

    def limits(self):
        return (math.inf, math.inf, self.wing_limit, self.fuselage_limit)


@dataclass(frozen=True)
class MonitoringMask:
    use_load_factor: bool = False
    use_altitude: bool = False
    use_taxi: bool = False

    NAMES = {
        "none": (False, False, False),
        "taxi": (False, False, True),
        "alt": (False, True, False),
        "lf": (True, False, False),
        "alt+lf": (True, True, False),
        "all": (True, True, True),
    }

    @classmethod
    def from_name(cls, name):
        try:
            return cls(*cls.NAMES[name])
        except KeyError:
            raise ValidationError(f"unknown monitoring mask {name!r}; "
                                  f"choose from {', '.join(cls.NAMES)}") from None

    @property
    def name(self):
        flags = (self.use_load_factor, self.use_altitude, self.use_taxi)
        for name, value in self.NAMES.items():
            if value == flags:
                return name
        return "+".join(n for n, f in zip(("lf", "alt", "taxi"), flags) if f)


@dataclass(frozen=True)
class FdiNormalization:
    design_wing_damage_esg: float
    design_fuselage_damage_esg: float
    dsg_wing_threshold: float
    dsg_fuselage_threshold: float


@dataclass(frozen=True)
class Scenario:
    """A retirement criterion name (dsg, esg, fdi-dsg, fdi-esg) plus a monitoring mask."""

    criterion: str
    mask: str = "none"

    CRITERIA = ("dsg", "esg", "fdi-dsg", "fdi-esg")

    def __post_init__(self):
        if self.criterion not in self.CRITERIA:
            raise ValidationError(f"unknown criterion {self.criterion!r}; "
                                  f"choose from {', '.join(self.CRITERIA)}")
        MonitoringMask.from_name(self.mask)

    @classmethod
    def parse(cls, text):
        criterion, _, mask = text.partition(":")
        return cls(criterion, mask or "none")

    @property
    def label(self):
        if self.criterion in ("dsg", "esg"):
            return self.criterion
        return f"{self.criterion}:{self.mask}"

    @property
    def goal(self):
        return self.criterion.rsplit("-", 1)[-1]

    def resolve(self, cfg, norm):
        d = cfg.design
        if self.criterion == "dsg":
            crit = ServiceGoal(d.dsg_fc, d.dsg_fh)
        elif self.criterion == "esg":
            crit = ServiceGoal(d.esg_fc, d.esg_fh)
        elif self.criterion == "fdi-dsg":
            crit = FdiThreshold(norm.dsg_wing_threshold, norm.dsg_fuselage_threshold)
        else:
            crit = FdiThreshold(1.0, 1.0)
        return crit, MonitoringMask.from_name(self.mask)


@dataclass(frozen=True)
class AircraftOutcome:
    aircraft_id: str
    scenario: str
    criterion: object
    state: FdiState
    retired_because: str
    flights_flown: int


# --- per-flight damage ----------------------------------------------------------

def design_record(cfg, hours=None, aircraft_id="design"):
    """Design flight: full cabin, design taxi time split evenly, design altitude."""
    d = cfg.design
    hours = d.design_flight_time if hours is None else hours
    half_taxi = d.design_taxi_time / 2.0
    return FlightRecord(aircraft_id, distance_for_flight_time(hours, cfg.profile), hours,
                        1.0, half_taxi, half_taxi, d.design_max_altitude)


def apply_monitoring_mask(record, mask, cfg):
    """Replace unmonitored drivers of ``record`` with their design values."""
    d = cfg.design
    changes = {}
    if not mask.use_load_factor:
        changes["seat_load_factor"] = 1.0
    if not mask.use_taxi:
        changes["taxi_time_origin"] = changes["taxi_time_dest"] = d.design_taxi_time / 2.0
    if not mask.use_altitude:
        changes["max_altitude_ft"] = d.design_max_altitude
    return dataclasses.replace(record, **changes)


def _columns(history):
    cols = np.array([(r.distance, r.flight_time, r.seat_load_factor, r.taxi_time_origin,
                      r.taxi_time_dest,
                      np.nan if r.max_altitude_ft is None else r.max_altitude_ft)
                     for r in history], dtype=float)
    return dict(zip(("distance", "flight_time", "lf", "taxi_origin", "taxi_dest", "altitude"),
                    cols.T))


def raw_damages(cols, mask, cfg, twist):
    """Unnormalized per-flight (wing, fuselage) damages for record columns."""
    d = cfg.design
    lf = cols["lf"] if mask.use_load_factor else np.ones_like(cols["lf"])
    if mask.use_taxi:
        taxi_origin, taxi_dest = cols["taxi_origin"], cols["taxi_dest"]
    else:
        taxi_origin = taxi_dest = np.full_like(cols["lf"], d.design_taxi_time / 2.0)
    if mask.use_altitude:
        altitude = cols["altitude"].copy()
        missing = np.isnan(altitude)
        if missing.any():
            # altitude depends on distance only; solve once per distinct distance
            uniq, inv = np.unique(cols["distance"][missing], return_inverse=True)
            altitude[missing] = np.atleast_1d(max_altitude(uniq, cfg.profile))[inv]
    else:
        altitude = np.full_like(cols["lf"], d.design_max_altitude)
    weight = takeoff_weight(cols["distance"], cfg.aircraft, lf, taxi_dest)
    wing = wing_damage_array(weight, cols["flight_time"], taxi_origin + taxi_dest, twist,
                             WingScalingRules.from_config(cfg), cfg.material)
    fus = fuselage_damage_array(altitude, cfg.fuselage, cfg.atmosphere, cfg.material)
    return np.atleast_1d(wing), np.atleast_1d(fus)


def record_damage(record, cfg, twist):
    """(wing, fuselage) raw damage of one record taken as is."""
    wing, fus = raw_damages(_columns([record]), MonitoringMask(True, True, True), cfg, twist)
    return float(wing[0]), float(fus[0])


def compute_normalization(cfg, twist):
    d = cfg.design
    w_esg, f_esg = record_damage(design_record(cfg), cfg, twist)
    w_dsg, f_dsg = record_damage(design_record(cfg, d.dsg_design_flight_time), cfg, twist)
    if not (w_esg > 0 and f_esg > 0):
        raise ValidationError("design flight produces no damage; normalization undefined")
    ratio = d.dsg_fc / d.esg_fc
    return FdiNormalization(
        design_wing_damage_esg=d.esg_fc * w_esg,
        design_fuselage_damage_esg=d.esg_fc * f_esg,
        dsg_wing_threshold=ratio * (w_dsg / w_esg),
        dsg_fuselage_threshold=ratio * (f_dsg / f_esg),
    )


def increments(history_or_cols, mask, cfg, twist, norm):
    """Per-flight increments as a (4, n) array: FC, FH, wing FDI, fuselage FDI."""
    cols = history_or_cols if isinstance(history_or_cols, dict) else _columns(history_or_cols)
    wing, fus = raw_damages(cols, mask, cfg, twist)
    return np.vstack([np.ones_like(wing), cols["flight_time"],
                      wing / norm.design_wing_damage_esg,
                      fus / norm.design_fuselage_damage_esg])


# --- retirement search ----------------------------------------------------------

def _first_crossing(inc, limit):
    """Smallest n >= 1 with the cyclic cumulative sum of ``inc`` reaching ``limit``."""
    if not math.isfinite(limit):
        return math.inf
    prefix = np.concatenate([[0.0], np.cumsum(inc, dtype=np.longdouble)])
    total = prefix[-1]
    if total <= 0:
        return math.inf
    m = len(inc)
    q = max(int(np.longdouble(limit) // total) - 2, 0)
    while True:
        target = np.longdouble(limit) - q * total
        i = int(np.searchsorted(prefix[1:], target, side="left"))
        if i < m:
            return q * m + i + 1
        q += 1


def _state_after(inc, n):
    m = inc.shape[1]
    q, r = divmod(n, m)
    sums = q * inc.sum(axis=1, dtype=np.longdouble) + inc[:, :r].sum(axis=1, dtype=np.longdouble)
    return FdiState(float(sums[2]), float(sums[3]), int(n), float(sums[1]))


def retire(inc, criterion):
    """(flights_flown, retired_because, final FdiState) for increments ``inc``."""
    limits = criterion.limits()
    firsts = [_first_crossing(inc[k], limits[k]) for k in range(4)]
    n = min(firsts)
    if not math.isfinite(n):
        raise ValidationError("retirement criterion can never be met by this history")
    reason = QUANTITIES[firsts.index(n)]
    return n, reason, _state_after(inc, n)


def retire_stepwise(inc, criterion, max_flights=10_000_000):
    """Flight-by-flight reference for :func:`retire`."""
    limits = [np.longdouble(x) for x in criterion.limits()]
    acc = [np.longdouble(0.0)] * 4
    m = inc.shape[1]
    cols = [tuple(np.longdouble(v) for v in inc[:, j]) for j in range(m)]
    for n in range(1, max_flights + 1):
        step = cols[(n - 1) % m]
        acc = [a + s for a, s in zip(acc, step)]
        fired = [k for k in range(4) if acc[k] >= limits[k]]
        if fired:
            state = FdiState(float(acc[2]), float(acc[3]), n, float(acc[1]))
            return n, QUANTITIES[fired[0]], state
    raise ValidationError(f"no retirement within {max_flights} flights")


def simulate_aircraft(history, criterion, mask, cfg, twist, norm=None, method="fast"):
    """Fly ``history`` cyclically until ``criterion`` fires."""
    if not history:
        raise ValidationError("history is empty")
    norm = norm or compute_normalization(cfg, twist)
    inc = increments(history, mask, cfg, twist, norm)
    if method == "step":
        n, reason, state = retire_stepwise(inc, criterion)
    else:
        n, reason, state = retire(inc, criterion)
    aircraft_id = history[0].aircraft_id
    return AircraftOutcome(aircraft_id, _criterion_label(criterion), criterion, state, reason, n)


def _criterion_label(criterion):
    if isinstance(criterion, ServiceGoal):
        return f"goal({criterion.fc_limit:g}FC,{criterion.fh_limit:g}FH)"
    return f"fdi({criterion.wing_limit:g},{criterion.fuselage_limit:g})"


# --- fleet ----------------------------------------------------------------------

@dataclass(frozen=True)
class SummaryRow:
    label: str
    mean_fc: float
    fc_ratio: float  # percent of the matching service goal
    mean_fh: float
    fh_ratio: float


@dataclass
class FleetSummary:
    rows: list
    scatter: dict  # label -> (n, 2) array of (wing FDI, fuselage FDI)
    histograms: dict  # (label, "wing"|"fuselage") -> (edges, counts)


@dataclass
class FleetResult:
    outcomes: list
    summary: FleetSummary
    normalization: FdiNormalization


def _with_references(scenarios):
    scenarios = list(dict.fromkeys(scenarios))
    missing = [Scenario(goal) for goal in ("dsg", "esg")
               if any(s.goal == goal for s in scenarios) and Scenario(goal) not in scenarios]
    return missing + scenarios


def _simulate_chunk(args):
    items, scenarios, cfg, twist, norm = args
    histories = [h for _, h in items]
    sizes = np.cumsum([len(h) for h in histories])[:-1]
    cols = _columns([r for h in histories for r in h])
    resolved = [s.resolve(cfg, norm) for s in scenarios]
    per_mask = {}
    for _, mask in resolved:
        if mask not in per_mask:
            per_mask[mask] = np.split(increments(cols, mask, cfg, twist, norm), sizes, axis=1)
    out = []
    for scenario, (criterion, mask) in zip(scenarios, resolved):
        for i, (aid, _) in enumerate(items):
            try:
                n, reason, state = retire(per_mask[mask][i], criterion)
            except ValidationError as exc:
                raise ValidationError(f"aircraft {aid}: {exc}") from exc
            out.append(AircraftOutcome(aid, scenario.label, criterion, state, reason, n))
    return out


def simulate_fleet(fleet, scenarios, cfg, twist, workers=1, chunk_size=None):
    """Simulate every aircraft of ``fleet`` (id -> history) under every scenario.

    Service-goal reference scenarios are added when a matching FDI scenario is
    requested without one. Results do not depend on ``workers``.
    """
    if not fleet:
        raise ValidationError("fleet is empty")
    for aid, history in fleet.items():
        if not history:
            raise ValidationError(f"aircraft {aid}: history is empty")
    scenarios = _with_references([s if isinstance(s, Scenario) else Scenario.parse(s)
                                  for s in scenarios])
    norm = compute_normalization(cfg, twist)
    items = list(fleet.items())
    workers = max(1, int(workers))
    chunk_size = chunk_size or max(1, math.ceil(len(items) / (4 * workers)))
    chunks = [items[i:i + chunk_size] for i in range(0, len(items), chunk_size)]
    jobs = [(chunk, scenarios, cfg, twist, norm) for chunk in chunks]
    if workers == 1:
        parts = [_simulate_chunk(job) for job in jobs]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_simulate_chunk, jobs))
    order = {s.label: i for i, s in enumerate(scenarios)}
    outcomes = sorted((o for part in parts for o in part), key=lambda o: order[o.scenario])
    return FleetResult(outcomes, summarize(outcomes, scenarios), norm)


def summarize(outcomes, scenarios, bins=50):
    by_label = {}
    for o in outcomes:
        by_label.setdefault(o.scenario, []).append(o)
    means = {}
    for label, group in by_label.items():
        means[label] = (math.fsum(o.state.flight_cycles for o in group) / len(group),
                        math.fsum(o.state.flight_hours for o in group) / len(group))
    rows, scatter, hists = [], {}, {}
    for s in scenarios:
        group = by_label.get(s.label)
        if not group:
            continue
        fc, fh = means[s.label]
        ref_fc, ref_fh = means.get(s.goal, (math.nan, math.nan))
        rows.append(SummaryRow(s.label, fc, 100.0 * fc / ref_fc, fh, 100.0 * fh / ref_fh))
        pts = np.array([(o.state.wing_fdi, o.state.fuselage_fdi) for o in group])
        scatter[s.label] = pts
        for k, axis in enumerate(("wing", "fuselage")):
            top = float(pts[:, k].max())
            counts, edges = np.histogram(pts[:, k], bins=bins, range=(0.0, top if top > 0 else 1.0))
            hists[(s.label, axis)] = (edges, counts)
    return FleetSummary(rows, scatter, hists)


# --- sensitivity sweeps ---------------------------------------------------------

SWEEP_PARAMETERS = ("lf", "taxi", "alt", "distance")


@dataclass(frozen=True)
class SweepPoint:
    value: float
    wing_fdi: float
    fuselage_fdi: float


def sweep_fdi(parameter, values, cfg, twist, norm=None):
    """Vary one driver of the design flight, everything else at design.

    ``lf``, ``taxi`` (total minutes) and ``alt`` (ft) report the FDI after an
    ESG number of flights. ``distance`` (km) flies that distance, with its
    own flight time and attainable altitude, until the ESG and reports the
    FDIs at retirement.
    """
    if parameter not in SWEEP_PARAMETERS:
        raise ValidationError(f"unknown sweep parameter {parameter!r}")
    norm = norm or compute_normalization(cfg, twist)
    base = design_record(cfg)
    values = [float(v) for v in values]
    out = []
    if parameter == "distance":
        goal = ServiceGoal(cfg.design.esg_fc, cfg.design.esg_fh)
        everything = MonitoringMask(True, True, True)
        for v in values:
            record = dataclasses.replace(base, distance=v, flight_time=flight_time(v, cfg.profile),
                                         max_altitude_ft=None)
            o = simulate_aircraft([record], goal, everything, cfg, twist, norm)
            out.append(SweepPoint(v, o.state.wing_fdi, o.state.fuselage_fdi))
        return out
    for v in values:
        if parameter == "lf":
            record = dataclasses.replace(base, seat_load_factor=v)
        elif parameter == "taxi":
            record = dataclasses.replace(base, taxi_time_origin=v / 2.0, taxi_time_dest=v / 2.0)
        else:
            record = dataclasses.replace(base, max_altitude_ft=v)
        wing, fus = record_damage(record, cfg, twist)
        esg = cfg.design.esg_fc
        out.append(SweepPoint(v, esg * wing / norm.design_wing_damage_esg,
                              esg * fus / norm.design_fuselage_damage_esg))
    return out
