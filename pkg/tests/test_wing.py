import dataclasses

import numpy as np
import pytest

from fdi.errors import ValidationError
from fdi.fatigue import miner_damage
from fdi.performance import FlightLoadsInput
from fdi.wing import (load_twist, parse_twist, scale_spectrum, wing_damage_array,
                      wing_damage_components, wing_damage_per_flight)


def loads(weight=73500.0, hours=2.0, taxi=25.0, altitude=39100.0):
    return FlightLoadsInput(weight, altitude, hours, taxi)


def test_shipped_table(twist):
    assert twist.block_flights == 40000
    means, amps, per_flight = twist.segment_arrays("flight")
    assert len(means) == 10 and np.all(means == 1.0)
    assert np.all(np.diff(amps) < 0)
    assert twist.segment_arrays("gag")[2].tolist() == [1.0]
    assert np.all(twist.segment_arrays("ground")[0] < 0)


def test_identity_scaling_reproduces_table(twist, rules):
    spec = scale_spectrum(twist, loads(), rules)
    for b, row in zip(spec, twist.rows):
        assert b.mean_stress == pytest.approx(100.0 * row.relative_mean)
        assert b.amplitude_stress == pytest.approx(100.0 * row.relative_amplitude)
        assert b.cycle_count == pytest.approx(row.cycles_per_block / 40000)


def test_four_hours_double_flight_counts(twist, rules):
    base = scale_spectrum(twist, loads(), rules)
    long = scale_spectrum(twist, loads(hours=4.0), rules)
    for b0, b1 in zip(base, long):
        factor = 2.0 if b0.segment == "flight" else 1.0
        assert b1.cycle_count == pytest.approx(factor * b0.cycle_count)
        assert b1.amplitude_stress == b0.amplitude_stress


def test_taxi_scales_ground_counts_only(twist, rules):
    base = scale_spectrum(twist, loads(), rules)
    long = scale_spectrum(twist, loads(taxi=50.0), rules)
    for b0, b1 in zip(base, long):
        factor = 2.0 if b0.segment == "ground" else 1.0
        assert b1.cycle_count == pytest.approx(factor * b0.cycle_count)


def test_lighter_aircraft_less_damage(twist, rules, cfg):
    full = wing_damage_per_flight(loads(), twist, rules, cfg.material)
    light = wing_damage_per_flight(loads(weight=0.8 * 73500.0), twist, rules, cfg.material)
    assert 0 < light < full
    assert scale_spectrum(twist, loads(weight=0.8 * 73500), rules).bins[0].mean_stress == \
        pytest.approx(80.0)


def test_altitude_is_not_an_input(twist, rules, cfg):
    a = wing_damage_per_flight(loads(altitude=10000.0), twist, rules, cfg.material)
    b = wing_damage_per_flight(loads(altitude=41000.0), twist, rules, cfg.material)
    assert a == b


def test_vectorized_matches_scalar(twist, rules, cfg):
    rng = np.random.default_rng(3)
    w = rng.uniform(45000, 73500, 25)
    t = rng.uniform(0.3, 6.0, 25)
    x = rng.uniform(0.0, 60.0, 25)
    vec = wing_damage_array(w, t, x, twist, rules, cfg.material)
    for i in range(25):
        ref = wing_damage_per_flight(loads(w[i], t[i], x[i]), twist, rules, cfg.material)
        assert vec[i] == pytest.approx(ref, rel=1e-12)


def test_components_sum(twist, rules, cfg):
    parts = wing_damage_components(70000.0, 2.5, 30.0, twist, rules, cfg.material)
    spec = scale_spectrum(twist, loads(70000.0, 2.5, 30.0), rules)
    for seg in ("flight", "ground", "gag"):
        assert float(parts[seg]) == pytest.approx(miner_damage(spec.select(seg), cfg.material),
                                                  rel=1e-12, abs=1e-300)


HEADER = "segment,relative_mean,relative_amplitude,cycles_per_block\n"
FLIGHT = "flight,1.0,0.5,100\n"
GAG = "gag,0.25,0.75,40000\n"


@pytest.mark.parametrize("text, match", [
    ("seg,mean\n", "header"),
    (HEADER + FLIGHT, "exactly one gag"),
    (HEADER + FLIGHT + GAG + GAG, "exactly one gag"),
    (HEADER + FLIGHT + "gag,0.25,0.75,100\n", "once per flight"),
    (HEADER + FLIGHT + GAG + "ground,0.5,0.1,10\n", "negative"),
    (HEADER + "flight,1.0,-0.5,100\n" + GAG, "relative_amplitude"),
    (HEADER + "flight,1.0,0.5,0\n" + GAG, "cycles_per_block"),
    (HEADER + "flight,1.0,x,1\n" + GAG, "non-numeric"),
    (HEADER + "climb,1.0,0.5,1\n" + GAG, "unknown segment"),
    (HEADER + GAG, "flight row"),
])
def test_parse_errors(text, match):
    with pytest.raises(ValidationError, match=match):
        parse_twist(text)


def test_load_from_file(tmp_path, twist):
    path = tmp_path / "t.csv"
    path.write_text("# comment\n" + HEADER + FLIGHT + GAG)
    table = load_twist(path)
    assert len(table.rows) == 2
    assert load_twist() == twist
