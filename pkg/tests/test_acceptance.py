"""Acceptance criteria, each checked at its stated tolerance.

Every test records one PASS/FAIL line, printed in the pytest terminal summary
under "acceptance criteria".
"""
import math
import os
import time

import numpy as np

from fdi.config import MaterialParams
from fdi.fatigue import (LoadCycleBin, LoadSpectrum, cycles_to_failure,
                         equivalent_amplitude_array, miner_damage)
from fdi.fleet import (FdiThreshold, MonitoringMask, ServiceGoal, compute_normalization,
                       design_record, increments, simulate_aircraft, simulate_fleet, sweep_fdi)
from fdi.performance import FlightRecord, distance_for_flight_time, flight_time
from fdi.reporting import SyntheticFleetSpec, generate_synthetic_fleet

NONE = MonitoringMask()
ALL = MonitoringMask(True, True, True)


def test_1_normalization_identity(cfg, twist, criterion):
    t0 = time.perf_counter()
    norm = compute_normalization(cfg, twist)
    record = design_record(cfg)
    o = simulate_aircraft([record], FdiThreshold(1.0, 1.0), NONE, cfg, twist, norm)
    elapsed = time.perf_counter() - t0
    inc = increments([record], NONE, cfg, twist, norm)[:, 0]
    s = o.state
    ok = (abs(o.flights_flown - 60000) <= 1 and abs(s.flight_hours - 120000) <= 2
          and 1.0 <= s.wing_fdi <= 1.0 + inc[2] and 1.0 <= s.fuselage_fdi <= 1.0 + inc[3]
          and elapsed < 5.0)
    criterion(1, "normalization identity", ok,
              f"{o.flights_flown} FC, {s.flight_hours:.1f} FH, wing {s.wing_fdi:.12f}, "
              f"fuselage {s.fuselage_fdi:.12f}, {elapsed:.2f} s")


def test_2_dsg_flight_hour_binding(cfg, twist, norm, criterion):
    goal = ServiceGoal(cfg.design.dsg_fc, cfg.design.dsg_fh)
    o = simulate_aircraft([design_record(cfg)], goal, NONE, cfg, twist, norm)
    ok = (o.flights_flown == 30000 and o.state.flight_hours == 60000.0
          and o.retired_because == "fh")
    criterion(2, "DSG flight-hour binding", ok,
              f"{o.flights_flown} FC, {o.state.flight_hours:.1f} FH, bound by {o.retired_because}")


def test_3_taxi_insensitivity(cfg, twist, norm, criterion):
    t0 = time.perf_counter()
    taxi = np.linspace(0.0, 60.0, 21)
    pts = sweep_fdi("taxi", taxi, cfg, twist, norm)
    elapsed = time.perf_counter() - t0
    base = sweep_fdi("taxi", [cfg.design.design_taxi_time], cfg, twist, norm)[0]
    wing = np.array([p.wing_fdi for p in pts])
    fus = np.array([p.fuselage_fdi for p in pts])
    wing_change = float(np.max(np.abs(wing / base.wing_fdi - 1.0)))
    ok = bool(np.all(fus == base.fuselage_fdi)) and wing_change < 0.01 and elapsed < 10.0
    criterion(3, "taxi insensitivity", ok,
              f"fuselage spread {fus.max() - fus.min():g}, wing max change "
              f"{100 * wing_change:.2f}% (limit 1%), wing {wing[0]:.4f}..{wing[-1]:.4f}, "
              f"{elapsed:.2f} s")


def test_4_sensitivity_directions(cfg, twist, norm, criterion):
    lf = sweep_fdi("lf", np.linspace(0.0, 1.0, 20), cfg, twist, norm)
    # cruise levels; below ~15,500 ft the pressurization cycle is under the fatigue limit
    alt = sweep_fdi("alt", np.linspace(20000.0, cfg.design.design_max_altitude, 20), cfg, twist,
                    norm)
    taxi = sweep_fdi("taxi", np.linspace(0.0, 60.0, 20), cfg, twist, norm)
    w_lf = np.array([p.wing_fdi for p in lf])
    f_lf = np.array([p.fuselage_fdi for p in lf])
    w_alt = np.array([p.wing_fdi for p in alt])
    f_alt = np.array([p.fuselage_fdi for p in alt])
    f_taxi = np.array([p.fuselage_fdi for p in taxi])
    checks = {
        "wing increasing in LF": bool(np.all(np.diff(w_lf) > 0)),
        "wing invariant in altitude": bool(np.all(w_alt == w_alt[0])),
        "fuselage increasing in altitude": bool(np.all(np.diff(f_alt) > 0)),
        "fuselage invariant in LF": bool(np.all(f_lf == f_lf[0])),
        "fuselage invariant in taxi": bool(np.all(f_taxi == f_taxi[0])),
    }
    failed = [k for k, v in checks.items() if not v]
    criterion(4, "sensitivity directions", not failed,
              "all five hold" if not failed else "broken: " + ", ".join(failed))


def test_5_distance_effect(cfg, twist, norm, criterion):
    t0 = time.perf_counter()
    d_design = distance_for_flight_time(cfg.design.design_flight_time, cfg.profile)
    distances = np.linspace(d_design, 6000.0, 10)
    pts = sweep_fdi("distance", distances, cfg, twist, norm)
    elapsed = time.perf_counter() - t0
    wing = np.array([p.wing_fdi for p in pts])
    fus = np.array([p.fuselage_fdi for p in pts])
    wing_ok = bool(np.all(np.diff(wing) <= 0))
    fus_ok = bool(np.all(np.diff(fus) <= 0))
    ok = wing_ok and fus_ok and elapsed < 60.0
    criterion(5, "distance effect", ok,
              f"wing non-increasing {wing_ok} ({', '.join(f'{w:.3f}' for w in wing)}), "
              f"fuselage non-increasing {fus_ok} ({fus[0]:.3f}..{fus[-1]:.3f}), {elapsed:.2f} s")


def test_6_haigh_sn_properties(criterion):
    mat = MaterialParams()
    rng = np.random.default_rng(2024)
    n = 10_000
    amp = rng.uniform(0.5, 400.0, n)
    k = rng.uniform(0.0, 0.95, n)
    worst = 0.0
    for factor in (1.0, 3.0):  # R = 0 at S_m = S_a, R = 0.5 at S_m = 3 S_a
        mean = factor * amp
        on = equivalent_amplitude_array(mean, amp, k)
        for side in (-np.inf, np.inf):
            near = equivalent_amplitude_array(np.nextafter(mean, side), amp, k)
            worst = max(worst, float(np.max(np.abs(near / on - 1.0))))
    continuity = worst <= 1e-12
    n_c2 = cycles_to_failure(mat.c2, mat)
    s = np.linspace(mat.c1, mat.c2, 100_002)[1:-1]
    monotone = bool(np.all(np.diff(cycles_to_failure(s, mat)) < 0))
    miner_ok = True
    for _ in range(200):
        size = int(rng.integers(1, 40))
        bins = [LoadCycleBin(float(m), float(a), float(c))
                for m, a, c in zip(rng.uniform(-300, 300, size), rng.uniform(1, 300, size),
                                   rng.uniform(0, 1e5, size))]
        cut = int(rng.integers(0, size + 1))
        whole = miner_damage(LoadSpectrum(tuple(bins)), mat)
        parts = (miner_damage(LoadSpectrum(tuple(bins[:cut])), mat)
                 + miner_damage(LoadSpectrum(tuple(bins[cut:])), mat))
        perm = miner_damage(LoadSpectrum(tuple(bins[i] for i in rng.permutation(size))), mat)
        miner_ok &= math.isclose(whole, parts, rel_tol=1e-12, abs_tol=1e-300)
        miner_ok &= math.isclose(whole, perm, rel_tol=1e-12, abs_tol=1e-300)
    ok = continuity and n_c2 == 1.0 and monotone and miner_ok
    criterion(6, "Haigh/S-N properties", ok,
              f"max boundary jump {worst:.2e}, N(C2) = {n_c2:g}, S-N strictly decreasing "
              f"{monotone}, Miner additive/permutation invariant {miner_ok}")


def test_7_oracle_equivalence(cfg, twist, norm, criterion):
    rng = np.random.default_rng(77)
    quantities = ("fc", "fh", "wing_fdi", "fuselage_fdi")
    mismatches = []
    for trial in range(100):
        d = float(rng.uniform(100.0, 5000.0))
        record = FlightRecord("H", d, flight_time(d, cfg.profile), float(rng.uniform(0, 1)),
                              float(rng.uniform(0, 30)), float(rng.uniform(0, 30)))
        mask = MonitoringMask(*(bool(b) for b in rng.integers(0, 2, 3)))
        inc = increments([record], mask, cfg, twist, norm)[:, 0]
        if rng.random() < 0.5:
            crit = ServiceGoal(float(rng.integers(1, 1001)),
                               float(inc[1] * rng.uniform(1.0, 1000.0)))
        else:
            crit = FdiThreshold(float(inc[2] * rng.uniform(1.0, 1000.0)),
                                float(inc[3] * rng.uniform(1.0, 1000.0)))
        limits = crit.limits()
        closed = [math.ceil(limits[q] / inc[q]) if math.isfinite(limits[q]) else math.inf
                  for q in range(4)]
        expected = min(closed)
        o = simulate_aircraft([record], crit, mask, cfg, twist, norm, method="step")
        if (o.flights_flown, o.retired_because) != (expected, quantities[closed.index(expected)]):
            mismatches.append((trial, o.flights_flown, expected))
        assert expected <= 1000
    criterion(7, "oracle equivalence", not mismatches,
              f"{100 - len(mismatches)}/100 step-by-step runs equal ceil(limit / increment)")


def _ratios(result):
    rows = {r.label: r for r in result.summary.rows}
    return rows["fdi-dsg:alt+lf"].fc_ratio, rows["fdi-esg:alt+lf"].fc_ratio


def test_8_lifetime_gain_direction(cfg, twist, criterion):
    t0 = time.perf_counter()
    data = generate_synthetic_fleet(SyntheticFleetSpec(seed=1), cfg.profile)
    result = simulate_fleet(data.histories, ["fdi-dsg:alt+lf", "fdi-esg:alt+lf"], cfg, twist)
    elapsed = time.perf_counter() - t0
    dsg_ratio, esg_ratio = _ratios(result)
    ok = dsg_ratio > 100.0 and esg_ratio > 100.0 and dsg_ratio > esg_ratio and elapsed < 600
    criterion(8, "lifetime gain direction on synthetic fleet", ok,
              f"FDI+LF+alt vs DSG {dsg_ratio:.1f}%, vs ESG {esg_ratio:.1f}% "
              f"({len(data)} aircraft, {elapsed:.1f} s)")


def test_9_performance_envelope(cfg, twist, criterion):
    data = generate_synthetic_fleet(SyntheticFleetSpec(seed=3), cfg.profile)
    scenarios = ["dsg", "esg", "fdi-dsg:alt+lf", "fdi-esg:alt+lf"]
    t0 = time.perf_counter()
    serial = simulate_fleet(data.histories, scenarios, cfg, twist, workers=1)
    t_serial = time.perf_counter() - t0
    t0 = time.perf_counter()
    parallel = simulate_fleet(data.histories, scenarios, cfg, twist, workers=4)
    t_parallel = time.perf_counter() - t0
    identical = serial.outcomes == parallel.outcomes
    speedup = t_serial / t_parallel
    flights = np.mean([o.flights_flown for o in serial.outcomes])
    ok = identical and t_serial < 600 and speedup >= 2.0
    criterion(9, "performance envelope", ok,
              f"serial {t_serial:.2f} s, 4 workers {t_parallel:.2f} s, speedup {speedup:.2f}x "
              f"(need >= 2x) on {os.cpu_count()} CPU(s), identical outputs {identical}, "
              f"mean lifetime {flights:.0f} flights")
