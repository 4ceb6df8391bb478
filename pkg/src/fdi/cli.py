"""Command line entry point ``fdi``.

Exit status: 0 on success, 1 on invalid input, 2 on file system errors.
"""
import argparse
import dataclasses
import sys

import numpy as np

from fdi.config import load_config
from fdi.errors import ValidationError
from fdi.fleet import (SWEEP_PARAMETERS, MonitoringMask, Scenario, compute_normalization,
                       record_damage, simulate_aircraft, simulate_fleet, sweep_fdi)
from fdi.performance import FlightRecord, flight_loads, flight_time
from fdi.reporting import (emit_reports, generate_synthetic_fleet, load_synthetic_spec,
                           parse_fleet_csv, write_fleet_csv)
from fdi.wing import load_twist

DEFAULT_SCENARIOS = [f"{goal}" if mask is None else f"fdi-{goal}:{mask}"
                    for goal in ("dsg", "esg")
                    for mask in (None, "none", "taxi", "alt", "lf", "alt+lf", "all")]
MONITOR_CHOICES = tuple(MonitoringMask.NAMES)


def _global_options(parser, suppress):
    default = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    parser.add_argument("--config", default=default(None), help="key = value config file")
    parser.add_argument("--twist", default=default(None), help="TWIST spectrum CSV")
    parser.add_argument("--seed", type=int, default=default(None),
                        help="override the synthetic fleet seed")
    parser.add_argument("--threads", type=int, default=default(1),
                        help="worker processes for fleet simulation")


def build_parser():
    parser = argparse.ArgumentParser(prog="fdi", description=__doc__.splitlines()[0])
    _global_options(parser, suppress=False)
    common = argparse.ArgumentParser(add_help=False)
    _global_options(common, suppress=True)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("single-flight", parents=[common], help="per-flight damages")
    p.add_argument("--distance", type=float, required=True, help="km")
    p.add_argument("--lf", type=float, required=True, help="seat load factor 0..1")
    p.add_argument("--taxi-origin", type=float, default=12.5, help="min")
    p.add_argument("--taxi-dest", type=float, default=12.5, help="min")
    p.add_argument("--flight-time", type=float, help="h, derived from distance if omitted")
    p.add_argument("--altitude", type=float, help="ft, derived from distance if omitted")

    p = sub.add_parser("aircraft", parents=[common], help="simulate aircraft of a fleet CSV")
    p.add_argument("--fleet-csv", required=True)
    p.add_argument("--criterion", choices=Scenario.CRITERIA, required=True)
    p.add_argument("--monitor", choices=MONITOR_CHOICES, default="none")
    p.add_argument("--aircraft-id", help="only this aircraft")

    p = sub.add_parser("fleet", parents=[common], help="fleet scenarios and reports")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--fleet-csv")
    src.add_argument("--synthetic-spec")
    p.add_argument("--scenarios", nargs="+", default=DEFAULT_SCENARIOS,
                   help="criterion[:monitor], e.g. esg fdi-esg:alt+lf")
    p.add_argument("--out-dir", required=True)

    p = sub.add_parser("sweep", parents=[common], help="one-parameter FDI sweep")
    p.add_argument("--param", choices=SWEEP_PARAMETERS, required=True)
    p.add_argument("--from", dest="start", type=float, required=True)
    p.add_argument("--to", dest="stop", type=float, required=True)
    p.add_argument("--steps", type=int, default=20)

    p = sub.add_parser("synth", parents=[common], help="write a synthetic fleet CSV")
    p.add_argument("--synthetic-spec", required=True)
    p.add_argument("--out", required=True)
    return parser


def _synthetic(args, cfg):
    spec = load_synthetic_spec(args.synthetic_spec)
    if args.seed is not None:
        spec = dataclasses.replace(spec, seed=args.seed)
    return generate_synthetic_fleet(spec, cfg.profile)


def cmd_single_flight(args, cfg, twist):
    ft = args.flight_time if args.flight_time is not None else flight_time(args.distance,
                                                                           cfg.profile)
    record = FlightRecord("cli", args.distance, ft, args.lf, args.taxi_origin, args.taxi_dest,
                          args.altitude)
    loads = flight_loads(record, cfg)
    wing, fus = record_damage(record, cfg, twist)
    norm = compute_normalization(cfg, twist)
    print(f"takeoff_weight_kg      {loads.takeoff_weight:.1f}")
    print(f"max_altitude_ft        {loads.max_altitude:.0f}")
    print(f"flight_time_h          {loads.flight_time:.4f}")
    print(f"total_taxi_min         {loads.total_taxi_time:.2f}")
    print(f"wing_damage            {wing:.6e}")
    print(f"fuselage_damage        {fus:.6e}")
    print(f"wing_fdi_increment     {wing / norm.design_wing_damage_esg:.6e}")
    print(f"fuselage_fdi_increment {fus / norm.design_fuselage_damage_esg:.6e}")


def cmd_aircraft(args, cfg, twist):
    data = parse_fleet_csv(args.fleet_csv)
    histories = data.histories
    if args.aircraft_id is not None:
        if args.aircraft_id not in histories:
            raise ValidationError(f"aircraft {args.aircraft_id!r} not in {args.fleet_csv}")
        histories = {args.aircraft_id: histories[args.aircraft_id]}
    norm = compute_normalization(cfg, twist)
    criterion, mask = Scenario(args.criterion, args.monitor).resolve(cfg, norm)
    print("aircraft_id,flights_flown,flight_hours,wing_fdi,fuselage_fdi,retired_because")
    for aid, history in histories.items():
        o = simulate_aircraft(history, criterion, mask, cfg, twist, norm)
        print(f"{aid},{o.flights_flown},{o.state.flight_hours:.2f},{o.state.wing_fdi:.6f},"
              f"{o.state.fuselage_fdi:.6f},{o.retired_because}")


def cmd_fleet(args, cfg, twist):
    data = parse_fleet_csv(args.fleet_csv) if args.fleet_csv else _synthetic(args, cfg)
    scenarios = [Scenario.parse(s) for s in args.scenarios]
    result = simulate_fleet(data.histories, scenarios, cfg, twist, workers=args.threads)
    paths = emit_reports(result, args.out_dir)
    print(f"{'criterion':<16}{'mean FC':>12}{'FC %':>8}{'mean FH':>12}{'FH %':>8}")
    for r in result.summary.rows:
        print(f"{r.label:<16}{r.mean_fc:>12.0f}{r.fc_ratio:>8.1f}{r.mean_fh:>12.0f}"
              f"{r.fh_ratio:>8.1f}")
    print(f"wrote {len(paths)} files to {args.out_dir}")


def cmd_sweep(args, cfg, twist):
    if args.steps < 1:
        raise ValidationError("steps: must be >= 1")
    values = np.linspace(args.start, args.stop, args.steps) if args.steps > 1 else [args.start]
    print(f"{args.param},wing_fdi,fuselage_fdi")
    for pt in sweep_fdi(args.param, values, cfg, twist):
        print(f"{pt.value!r},{pt.wing_fdi!r},{pt.fuselage_fdi!r}")


def cmd_synth(args, cfg, twist):
    data = _synthetic(args, cfg)
    write_fleet_csv(data, args.out)
    print(f"wrote {len(data)} aircraft, {data.flight_count} flights to {args.out}")


COMMANDS = {
    "single-flight": cmd_single_flight,
    "aircraft": cmd_aircraft,
    "fleet": cmd_fleet,
    "sweep": cmd_sweep,
    "synth": cmd_synth,
}


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config)
        twist = load_twist(args.twist, cfg.design.twist_block_flights)
        COMMANDS[args.command](args, cfg, twist)
    except ValidationError as exc:
        print(f"fdi: error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"fdi: I/O error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
