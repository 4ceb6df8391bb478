"""Fatigue damage index (FDI) of wing and fuselage from airline usage data."""
from fdi.config import FdiConfig, load_config
from fdi.errors import ValidationError
from fdi.fleet import (FdiThreshold, MonitoringMask, Scenario, ServiceGoal,
                       compute_normalization, record_damage, simulate_aircraft, simulate_fleet,
                       sweep_fdi)
from fdi.performance import FlightRecord
from fdi.wing import load_twist

__all__ = [
    "FdiConfig", "FdiThreshold", "FlightRecord", "MonitoringMask", "Scenario", "ServiceGoal",
    "ValidationError", "compute_normalization", "load_config", "load_twist",
    "record_damage", "simulate_aircraft", "simulate_fleet", "sweep_fdi",
]
