"""Fuselage skin fatigue from one pressurization cycle per flight.

Hoop stress follows the thin-wall formula ``p d / (2 t)``; the cycle from an
unpressurized to a pressurized cabin is a pure swelling load, so mean and
amplitude are both half the hoop stress.
"""
from dataclasses import dataclass

import numpy as np

from fdi.fatigue import damage_per_cycle
from fdi.performance import differential_pressure

HPA_TO_MPA = 1.0e-4


@dataclass(frozen=True)
class FuselageStressState:
    tangential_stress: float
    axial_stress: float
    mean: float
    amplitude: float


def hoop_stress(altitude_ft, geom, atmos):
    """Tangential skin stress [MPa]; scalar or array."""
    p = np.asarray(differential_pressure(altitude_ft, atmos)) * HPA_TO_MPA
    return p * geom.diameter_mean / (2.0 * geom.skin_thickness)


def fuselage_stress(altitude_ft, geom, atmos):
    s_tan = float(hoop_stress(altitude_ft, geom, atmos))
    return FuselageStressState(s_tan, s_tan / 2.0, s_tan / 2.0, s_tan / 2.0)


def fuselage_damage_array(altitude_ft, geom, atmos, mat):
    half = hoop_stress(altitude_ft, geom, atmos) / 2.0
    return damage_per_cycle(half, half, mat)


def fuselage_damage_per_flight(altitude_ft, geom, atmos, mat):
    """Miner damage of the single pressurization cycle of a flight."""
    return float(fuselage_damage_array(altitude_ft, geom, atmos, mat))
