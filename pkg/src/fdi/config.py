"""Aircraft, material and design-reference constants plus config-file loading.

The config file is flat ``key = value`` text, ``#`` starts a comment. Every key
is optional; omitted keys take the A320 defaults below. Climb profile entries
use ``profile_<phase>_<field>`` keys, speeds are written ``IAS 290`` or
``MACH 0.78``.
"""
from __future__ import annotations

import configparser
import dataclasses
from dataclasses import dataclass, field, fields
from pathlib import Path

from fdi.errors import ValidationError

# g/(kN s) -> kg/(N s)
SFC_G_PER_KN_S = 1.0e-6


@dataclass(frozen=True)
class AircraftParams:
    """Performance and weight constants (masses in kg, SFC in kg/(N s))."""

    fuel_reserve_weight: float = 2500.0
    cruise_mach: float = 0.79
    taxi_fuel_rate: float = 0.1  # kg/s
    fuel_reserve_factor: float = 1.05
    gravity: float = 9.81
    lift_to_drag: float = 15.0
    max_payload: float = 16600.0
    mtow: float = 73500.0
    max_fuel: float = 20000.0
    misc_payload: float = 600.0
    min_prop_fuel: float = 5000.0
    seat_count: int = 160
    oew: float = 42200.0
    sfc_cruise: float = 16.88 * SFC_G_PER_KN_S
    speed_of_sound_cruise: float = 295.0  # m/s
    pax_weight: float = 100.0

    def validate(self):
        for name in ("fuel_reserve_weight", "taxi_fuel_rate", "max_payload", "mtow",
                     "max_fuel", "misc_payload", "min_prop_fuel", "oew", "pax_weight",
                     "gravity", "sfc_cruise", "speed_of_sound_cruise", "seat_count"):
            _require(getattr(self, name) > 0, name, f"{name} must be > 0")
        _require(self.fuel_reserve_factor >= 1.0, "fuel_reserve_factor",
                 "fuel_reserve_factor must be >= 1")
        _require(0 < self.cruise_mach < 1, "cruise_mach", "0 < cruise_mach < 1 required")
        _require(self.lift_to_drag > 0, "lift_to_drag", "lift_to_drag must be > 0")
        _require(self.oew + self.misc_payload + self.max_payload <= self.mtow, "mtow",
                 "oew + misc_payload + max_payload <= mtow required")
        _require(self.min_prop_fuel <= self.max_fuel, "min_prop_fuel",
                 "min_prop_fuel <= max_fuel required")


@dataclass(frozen=True)
class Speed:
    kind: str  # "ias" (knots) or "mach"
    value: float

    def __str__(self):
        return f"{self.kind.upper()} {self.value:g}"

    @classmethod
    def parse(cls, text):
        parts = text.split()
        if len(parts) != 2 or parts[0].lower() not in ("ias", "mach"):
            raise ValueError(f"speed must look like 'IAS 290' or 'MACH 0.78', got {text!r}")
        return cls(parts[0].lower(), float(parts[1]))


@dataclass(frozen=True)
class ClimbSegment:
    """One row of the climb/cruise/descent schedule.

    ``to_ft`` is the altitude the segment ends at: the segment ceiling for
    climb phases, the cruise level for cruise, the bottom for descent phases.
    """

    phase: str
    to_ft: float
    rate_fpm: float
    speed: Speed

    @property
    def kind(self):
        if self.rate_fpm == 0:
            return "cruise"
        return "descent" if "descent" in self.phase or self.phase == "approach" else "climb"


def _default_segments():
    return (
        ClimbSegment("initial_climb", 5000.0, 2500.0, Speed("ias", 175.0)),
        ClimbSegment("climb_fl150", 15000.0, 2000.0, Speed("ias", 290.0)),
        ClimbSegment("climb_fl240", 24000.0, 1400.0, Speed("ias", 290.0)),
        ClimbSegment("mach_climb", 39000.0, 1000.0, Speed("mach", 0.78)),
        ClimbSegment("cruise", 39000.0, 0.0, Speed("mach", 0.79)),
        ClimbSegment("initial_descent", 24000.0, 1000.0, Speed("mach", 0.78)),
        ClimbSegment("descent_fl100", 10000.0, 3500.0, Speed("ias", 290.0)),
        ClimbSegment("approach", 0.0, 1500.0, Speed("ias", 250.0)),
    )


@dataclass(frozen=True)
class ClimbProfile:
    segments: tuple = field(default_factory=_default_segments)

    @property
    def climb(self):
        return [s for s in self.segments if s.kind == "climb"]

    @property
    def cruise(self):
        return next(s for s in self.segments if s.kind == "cruise")

    @property
    def descent(self):
        return [s for s in self.segments if s.kind == "descent"]

    @property
    def ceiling_ft(self):
        return self.cruise.to_ft

    def validate(self):
        cruise = [s for s in self.segments if s.rate_fpm == 0]
        _require(len(cruise) == 1, "profile", "exactly one cruise segment (rate 0) required")
        for s in self.segments:
            _require(s.rate_fpm >= 0, f"profile_{s.phase}_rate_fpm", "rates must be >= 0")
            _require(s.speed.value > 0, f"profile_{s.phase}_speed", "speed must be > 0")
        climbs = [s.to_ft for s in self.climb]
        _require(all(a < b for a, b in zip(climbs, climbs[1:])), "profile",
                 "climb ceilings must be strictly increasing")
        _require(bool(climbs) and climbs[-1] == self.ceiling_ft, "profile",
                 "last climb ceiling must equal the cruise level")
        descents = [s.to_ft for s in self.descent]
        _require(all(a > b for a, b in zip(descents, descents[1:])) and descents[-1] == 0,
                 "profile", "descent levels must strictly decrease down to 0 ft")


@dataclass(frozen=True)
class MaterialParams:
    """Haigh slope and S-N constants; Al 2024-T3 at Kt = 2.5 by default."""

    m_sigma: float = 0.4
    c1: float = 63.0
    c2: float = 470.0
    c3: float = 3.50
    c4: float = 2.07
    kt: float = 2.5

    def validate(self):
        _require(self.c1 > 0, "c1", "c1 must be > 0")
        _require(self.c1 < self.c2, "c1", "c1 < c2 required")
        _require(self.c3 > 0, "c3", "c3 must be > 0")
        _require(self.c4 > 0, "c4", "c4 must be > 0")
        _require(0 <= self.m_sigma < 1, "m_sigma", "0 <= m_sigma < 1 required")


@dataclass(frozen=True)
class AtmosphereParams:
    p0: float = 1013.25  # hPa
    h0: float = 8435.0  # m

    def validate(self):
        _require(self.p0 > 0, "p0", "p0 must be > 0")
        _require(self.h0 > 0, "h0", "h0 must be > 0")


@dataclass(frozen=True)
class FuselageGeometry:
    diameter_mean: float = 4.14  # m
    skin_thickness: float = 0.001  # m

    def validate(self):
        _require(self.diameter_mean > 0, "diameter_mean", "diameter_mean must be > 0")
        _require(self.skin_thickness > 0, "skin_thickness", "skin_thickness must be > 0")
        _require(self.skin_thickness < 0.05 * self.diameter_mean, "skin_thickness",
                 "thin-wall model needs skin_thickness << diameter_mean")


@dataclass(frozen=True)
class DesignReference:
    design_mean_stress: float = 100.0  # MPa at MTOW
    design_flight_time: float = 2.0  # h
    design_taxi_time: float = 25.0  # min, origin + destination
    design_max_altitude: float = 39100.0  # ft
    twist_block_flights: int = 40000
    dsg_fc: int = 48000
    dsg_fh: float = 60000.0
    esg_fc: int = 60000
    esg_fh: float = 120000.0
    dsg_design_flight_time: float = 1.25  # h

    def validate(self):
        for f in fields(self):
            _require(getattr(self, f.name) > 0, f.name, f"{f.name} must be > 0")
        _require(self.dsg_fc < self.esg_fc, "dsg_fc", "dsg_fc < esg_fc required")
        _require(self.dsg_fh < self.esg_fh, "dsg_fh", "dsg_fh < esg_fh required")


@dataclass(frozen=True)
class FdiConfig:
    aircraft: AircraftParams = field(default_factory=AircraftParams)
    profile: ClimbProfile = field(default_factory=ClimbProfile)
    material: MaterialParams = field(default_factory=MaterialParams)
    atmosphere: AtmosphereParams = field(default_factory=AtmosphereParams)
    fuselage: FuselageGeometry = field(default_factory=FuselageGeometry)
    design: DesignReference = field(default_factory=DesignReference)

    def validate(self):
        for part in (self.aircraft, self.profile, self.material, self.atmosphere,
                     self.fuselage, self.design):
            part.validate()
        return self


def _require(cond, name, message):
    if not cond:
        raise ValidationError(f"{name}: {message}")


_SECTIONS = ("aircraft", "material", "atmosphere", "fuselage", "design")
_UNITS = {
    "fuel_reserve_weight": "kg", "taxi_fuel_rate": "kg/s", "gravity": "m/s^2",
    "max_payload": "kg", "mtow": "kg", "max_fuel": "kg", "misc_payload": "kg",
    "min_prop_fuel": "kg", "oew": "kg", "sfc_cruise": "kg/(N s)",
    "speed_of_sound_cruise": "m/s", "pax_weight": "kg", "c1": "MPa", "c2": "MPa",
    "p0": "hPa", "h0": "m", "diameter_mean": "m", "skin_thickness": "m",
    "design_mean_stress": "MPa", "design_flight_time": "h", "design_taxi_time": "min",
    "design_max_altitude": "ft", "dsg_fh": "h", "esg_fh": "h", "dsg_design_flight_time": "h",
}


def _coerce(name, raw, default):
    try:
        if isinstance(default, int) and not isinstance(default, bool):
            value = float(raw)
            if value != int(value):
                raise ValueError
            return int(value)
        return float(raw)
    except ValueError:
        raise ValidationError(f"{name}: cannot parse {raw!r} as a number") from None


def parse_config(text):
    """Parse config text into a validated :class:`FdiConfig`."""
    parser = configparser.ConfigParser(inline_comment_prefixes=("#",), interpolation=None)
    try:
        parser.read_string("[fdi]\n" + text)
    except configparser.Error as exc:
        raise ValidationError(f"config parse error: {exc}") from None
    values = dict(parser["fdi"])

    if "sfc_cruise_g_per_kn_s" in values:
        raw = values.pop("sfc_cruise_g_per_kn_s")
        values.setdefault("sfc_cruise", str(_coerce("sfc_cruise_g_per_kn_s", raw, 0.0)
                                            * SFC_G_PER_KN_S))

    defaults = FdiConfig()
    parts = {}
    for section in _SECTIONS:
        obj = getattr(defaults, section)
        changes = {}
        for f in fields(obj):
            if f.name in values:
                changes[f.name] = _coerce(f.name, values.pop(f.name), getattr(obj, f.name))
        parts[section] = dataclasses.replace(obj, **changes)

    segments = []
    for seg in defaults.profile.segments:
        prefix = f"profile_{seg.phase}_"
        to_ft, rate, speed = seg.to_ft, seg.rate_fpm, seg.speed
        if prefix + "to_ft" in values:
            to_ft = _coerce(prefix + "to_ft", values.pop(prefix + "to_ft"), 0.0)
        if prefix + "rate_fpm" in values:
            rate = _coerce(prefix + "rate_fpm", values.pop(prefix + "rate_fpm"), 0.0)
        if prefix + "speed" in values:
            try:
                speed = Speed.parse(values.pop(prefix + "speed"))
            except ValueError as exc:
                raise ValidationError(f"{prefix}speed: {exc}") from None
        segments.append(ClimbSegment(seg.phase, to_ft, rate, speed))
    parts["profile"] = ClimbProfile(tuple(segments))

    if values:
        raise ValidationError(f"unknown config keys: {', '.join(sorted(values))}")
    return FdiConfig(**parts).validate()


def load_config(path=None):
    """Load a config file; ``None`` returns the validated defaults."""
    if path is None:
        return FdiConfig().validate()
    return parse_config(Path(path).read_text(encoding="utf-8"))


def dump_config(cfg):
    """Serialize every key of ``cfg``; the output re-parses to an equal bundle."""
    lines = ["# fdi configuration; one 'key = value' per line, units after '#'"]
    for section in _SECTIONS:
        obj = getattr(cfg, section)
        lines.append(f"\n# {section}")
        for f in fields(obj):
            unit = _UNITS.get(f.name, "-")
            lines.append(f"{f.name} = {getattr(obj, f.name)!r}  # {unit}")
    lines.append("\n# profile: to_ft in ft, rate_fpm in ft/min, speed 'IAS <kt>' or 'MACH <M>'")
    for seg in cfg.profile.segments:
        p = f"profile_{seg.phase}_"
        lines.append(f"{p}to_ft = {seg.to_ft!r}")
        lines.append(f"{p}rate_fpm = {seg.rate_fpm!r}")
        lines.append(f"{p}speed = {seg.speed.kind.upper()} {seg.speed.value!r}")
    return "\n".join(lines) + "\n"
