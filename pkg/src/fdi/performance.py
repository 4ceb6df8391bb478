"""Per-flight takeoff weight, attainable altitude, block time and cabin differential pressure.

Functions taking distances, altitudes or load factors accept scalars or numpy
arrays; scalar input gives a float back.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from fdi import atmosphere
from fdi.atmosphere import FT, KT
from fdi.errors import ValidationError


@dataclass(frozen=True)
class FlightRecord:
    """Operational inputs of one flight.

    ``max_altitude_ft`` is normally left ``None`` and derived from the
    distance; it is set when a monitoring mask forces the design altitude or
    when a measured top of climb is available.
    """

    aircraft_id: str
    distance: float  # km
    flight_time: float  # h
    seat_load_factor: float
    taxi_time_origin: float  # min
    taxi_time_dest: float  # min
    max_altitude_ft: float | None = None

    def __post_init__(self):
        if not self.distance >= 0:
            raise ValidationError(f"distance: must be >= 0, got {self.distance}")
        if not self.flight_time >= 0 or (self.distance > 0 and self.flight_time <= 0):
            raise ValidationError(f"flight_time: must be > 0 for a non-zero distance, "
                                  f"got {self.flight_time}")
        if not 0.0 <= self.seat_load_factor <= 1.0:
            raise ValidationError(f"seat_load_factor: must lie in [0, 1], got "
                                  f"{self.seat_load_factor}")
        for name in ("taxi_time_origin", "taxi_time_dest"):
            if not getattr(self, name) >= 0:
                raise ValidationError(f"{name}: must be >= 0, got {getattr(self, name)}")
        if self.max_altitude_ft is not None and not self.max_altitude_ft >= 0:
            raise ValidationError(f"max_altitude_ft: must be >= 0, got {self.max_altitude_ft}")

    @property
    def total_taxi_time(self):
        return self.taxi_time_origin + self.taxi_time_dest


@dataclass(frozen=True)
class FlightLoadsInput:
    """The four fatigue drivers of a flight."""

    takeoff_weight: float  # kg
    max_altitude: float  # ft
    flight_time: float  # h
    total_taxi_time: float  # min


def _ret(x):
    x = np.asarray(x, dtype=float)
    return float(x) if x.ndim == 0 else x


def _nonneg(x, name):
    x = np.asarray(x, dtype=float)
    if np.any(x < 0) or np.any(np.isnan(x)):
        raise ValidationError(f"{name}: must be >= 0")
    return x


def taxi_fuel(taxi_time_dest, params):
    """Fuel [kg] burnt taxiing at the destination, ``taxi_time_dest`` in minutes."""
    t = _nonneg(taxi_time_dest, "taxi_time_dest")
    return _ret(t * 60.0 * params.taxi_fuel_rate)


def zero_fuel_takeoff_weight(seat_load_factor, taxi_time_dest, params):
    """Takeoff weight without propulsion fuel [kg]."""
    lf = np.asarray(seat_load_factor, dtype=float)
    return _ret(params.oew + params.misc_payload
                + lf * params.seat_count * params.pax_weight
                + taxi_fuel(taxi_time_dest, params))


def propulsion_fuel(zero_fuel_tow, distance, params):
    """Breguet trip fuel [kg] for ``distance`` km, floored at the airline minimum.

    The exponent is the usual Breguet term; the ``- 1`` is applied outside the
    exponential so that zero distance burns zero trip fuel before the floor.
    """
    d = _nonneg(distance, "distance") * 1000.0
    cruise_speed = params.speed_of_sound_cruise * params.cruise_mach
    x = (d / cruise_speed) * params.gravity * params.sfc_cruise / params.lift_to_drag
    fuel = ((np.asarray(zero_fuel_tow, dtype=float) + params.fuel_reserve_weight)
            * np.expm1(x) * params.fuel_reserve_factor)
    return _ret(np.maximum(fuel, params.min_prop_fuel))


def takeoff_weight(record_or_distance, params, seat_load_factor=None, taxi_time_dest=None):
    """Total takeoff weight [kg], capped at MTOW.

    Call with a :class:`FlightRecord`, or with ``(distance, params,
    seat_load_factor, taxi_time_dest)`` arrays for vectorized use.
    """
    if isinstance(record_or_distance, FlightRecord):
        r = record_or_distance
        distance, seat_load_factor, taxi_time_dest = (r.distance, r.seat_load_factor,
                                                      r.taxi_time_dest)
    else:
        distance = record_or_distance
    zfw = zero_fuel_takeoff_weight(seat_load_factor, taxi_time_dest, params)
    return _ret(np.minimum(zfw + propulsion_fuel(zfw, distance, params), params.mtow))


# --- trajectory ---------------------------------------------------------------

def _segment_tas(seg, h_mid_m):
    if seg.speed.kind == "mach":
        return atmosphere.mach_to_tas(seg.speed.value, h_mid_m)
    return atmosphere.cas_to_tas(seg.speed.value * KT, h_mid_m)


def _bands(profile):
    """(segment, bottom_ft, top_ft) for climb and descent phases."""
    climb, lo = [], 0.0
    for seg in profile.climb:
        climb.append((seg, lo, seg.to_ft))
        lo = seg.to_ft
    descent, hi = [], profile.ceiling_ft
    for seg in profile.descent:
        descent.append((seg, seg.to_ft, hi))
        hi = seg.to_ft
    return climb, descent


def climb_descent(top_ft, profile):
    """Ground distance [m] and time [s] to climb to ``top_ft`` and descend back.

    Each segment flies at its true airspeed evaluated at the mid-altitude of
    the part of the segment actually flown.
    """
    top = np.asarray(top_ft, dtype=float)
    dist = np.zeros_like(top)
    time = np.zeros_like(top)
    climb, descent = _bands(profile)
    for seg, bottom, seg_top in climb + descent:
        upper = np.clip(top, bottom, seg_top)
        dh = upper - bottom
        t = dh / seg.rate_fpm * 60.0
        tas = _segment_tas(seg, 0.5 * (bottom + upper) * FT)
        dist += tas * t
        time += t
    return dist, time


def _cruise_tas(top_ft, profile):
    return _segment_tas(profile.cruise, np.asarray(top_ft, dtype=float) * FT)


def max_altitude(distance, profile, tol_ft=1e-3):
    """Highest altitude [ft] whose climb plus descent fits into ``distance`` km."""
    d = _nonneg(distance, "distance") * 1000.0
    shape = d.shape
    d = np.atleast_1d(d)
    ceiling = profile.ceiling_ft
    full, _ = climb_descent(ceiling, profile)
    out = np.full_like(d, ceiling)
    short = d < full
    if np.any(short):
        target = d[short]
        lo = np.zeros_like(target)
        hi = np.full_like(target, ceiling)
        for _ in range(int(np.ceil(np.log2(ceiling / tol_ft)))):
            mid = 0.5 * (lo + hi)
            fits = climb_descent(mid, profile)[0] <= target
            lo = np.where(fits, mid, lo)
            hi = np.where(fits, hi, mid)
        out[short] = lo
    return _ret(out.reshape(shape))


def flight_time(distance, profile):
    """Airborne time [h] for a flight of ``distance`` km flown at its maximum altitude."""
    d = _nonneg(distance, "distance") * 1000.0
    top = max_altitude(d / 1000.0, profile)
    climb_dist, climb_time = climb_descent(top, profile)
    cruise = np.maximum(d - climb_dist, 0.0) / _cruise_tas(top, profile)
    return _ret((climb_time + cruise) / 3600.0)


def distance_for_flight_time(hours, profile, tol_km=1e-6):
    """Inverse of :func:`flight_time` [km]."""
    h = _nonneg(hours, "flight_time")
    shape = h.shape
    h = np.atleast_1d(h)
    ceiling = profile.ceiling_ft
    full_dist, full_time = climb_descent(ceiling, profile)
    cruise_tas = _cruise_tas(ceiling, profile)
    # beyond the top of the profile time grows linearly with distance
    out = (full_dist + (h * 3600.0 - full_time) * cruise_tas) / 1000.0
    short = h * 3600.0 < full_time
    if np.any(short):
        target = h[short]
        lo = np.zeros_like(target)
        hi = np.full_like(target, float(full_dist) / 1000.0)
        while np.max(hi - lo) > tol_km:
            mid = 0.5 * (lo + hi)
            below = flight_time(mid, profile) < target
            lo = np.where(below, mid, lo)
            hi = np.where(below, hi, mid)
        out[short] = np.where(target > 0, 0.5 * (lo + hi), 0.0)
    return _ret(out.reshape(shape))


def differential_pressure(altitude_ft, atmos):
    """Cabin-to-ambient pressure difference [hPa] at ``altitude_ft``."""
    h = _nonneg(altitude_ft, "altitude") * FT
    return _ret(-atmos.p0 * np.expm1(-h / atmos.h0))


def flight_loads(record, cfg):
    """Takeoff weight, maximum altitude, flight time and taxi time of ``record``."""
    altitude = record.max_altitude_ft
    if altitude is None:
        altitude = max_altitude(record.distance, cfg.profile)
    return FlightLoadsInput(
        takeoff_weight=takeoff_weight(record, cfg.aircraft),
        max_altitude=float(altitude),
        flight_time=record.flight_time,
        total_taxi_time=record.total_taxi_time,
    )
