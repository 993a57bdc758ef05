"""Command-line surface: single-point analysis, cycle runs, switched validation.

Subcommands:
    analyze   analytical loss breakdown at one fuel-cell power and speed
    cycle     run a drive cycle and write per-sample CSV plus a JSON summary
    simulate  switched-waveform validation at one operating point
    compare   both topologies over drive cycles, efficiency summary

Exit codes: 0 success, 1 computation error, 2 configuration or I/O error.
All results come straight from the library calls; the CLI only formats.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .config import build_topology_configs
from .cycle import bundled_cycle, load_cycle, run_cycle, write_result_csv, write_result_json
from .errors import ConfigError, DrivetrainError
from .switched import (
    compare_to_analytical,
    count_voltage_levels,
    run_switched,
    sim_config_for,
    write_waveform_csv,
)
from .topology import DEFAULT_VALIDATION_SPEED, analyze_point

_TOPOLOGY_CHOICES = ("dual", "conventional", "both")


def _write_json(payload: dict, path: Path) -> None:
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")


def _analysis_payload(analysis) -> dict:
    return {
        "topology": analysis.kind,
        "fc_power_w": analysis.fc_power,
        "electrical_speed_rad_s": analysis.electrical_speed,
        "fc_voltage_v": analysis.fc_voltage,
        "operating_point": {
            "i_d_a": analysis.op.i_d,
            "i_q_a": analysis.op.i_q,
            "v_d_v": analysis.op.v_d,
            "v_q_v": analysis.op.v_q,
            "current_peak_a": analysis.op.current_peak,
            "voltage_peak_v": analysis.op.voltage_peak,
        },
        "losses_w": analysis.breakdown.as_dict(),
    }


def _analysis_csv(payloads: list[dict], path: Path) -> None:
    lines = ["topology,converter,category,power_w"]
    for payload in payloads:
        losses = payload["losses_w"]
        for conv, cats in losses["converters"].items():
            for cat, value in cats.items():
                lines.append(f"{payload['topology']},{conv},{cat},{value:.10g}")
        lines.append(f"{payload['topology']},motor,copper,{losses['motor_copper']:.10g}")
        lines.append(f"{payload['topology']},all,total,{losses['total']:.10g}")
    path.write_text("\n".join(lines) + "\n")


def _resolve_cycle(spec: str):
    path = Path(spec)
    if path.is_file():
        return load_cycle(path)
    try:
        return bundled_cycle(spec)
    except FileNotFoundError:
        raise ConfigError(
            f"cycle {spec!r} is neither a file nor a bundled cycle (udds, hwfet)"
        ) from None


def cmd_analyze(args) -> int:
    configs = build_topology_configs(args.config)
    kinds = ("dual", "conventional") if args.topology == "both" else (args.topology,)
    payloads = [
        _analysis_payload(analyze_point(configs[kind], args.fc_power, args.speed))
        for kind in kinds
    ]
    report: dict = {"points": payloads}
    if len(payloads) == 2:
        dual_total = payloads[0]["losses_w"]["total"]
        conv_total = payloads[1]["losses_w"]["total"]
        if dual_total > 0:
            report["boosted_over_dual_loss_ratio"] = conv_total / dual_total
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    _write_json(report, out / "analyze.json")
    if args.format == "csv":
        _analysis_csv(payloads, out / "analyze.csv")
    for payload in payloads:
        print(
            f"{payload['topology']:12s} fc_power={payload['fc_power_w']:.0f} W "
            f"speed={payload['electrical_speed_rad_s']:.0f} rad/s "
            f"total_loss={payload['losses_w']['total']:.1f} W"
        )
    if "boosted_over_dual_loss_ratio" in report:
        print(f"boosted/dual loss ratio: {report['boosted_over_dual_loss_ratio']:.4f}")
    print(f"wrote {out / 'analyze.json'}")
    return 0


def cmd_cycle(args) -> int:
    configs = build_topology_configs(args.config)
    cycle = _resolve_cycle(args.cycle)
    kinds = ("dual", "conventional") if args.topology == "both" else (args.topology,)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    results = {}
    for kind in kinds:
        result = run_cycle(cycle, configs[kind])
        results[kind] = result
        csv_path = out / f"{cycle.name}_{kind}.csv"
        json_path = out / f"{cycle.name}_{kind}.json"
        write_result_csv(result, csv_path)
        write_result_json(result, json_path)
        print(
            f"{kind:12s} {cycle.name}: eta={100 * result.energy_efficiency:.2f}% "
            f"output={result.output_energy / 1e6:.3f} MJ -> {csv_path}"
        )
    if len(results) == 2:
        delta = {
            "cycle": cycle.name,
            "dual_efficiency": results["dual"].energy_efficiency,
            "conventional_efficiency": results["conventional"].energy_efficiency,
            "efficiency_gain": results["dual"].energy_efficiency
            - results["conventional"].energy_efficiency,
        }
        _write_json(delta, out / f"{cycle.name}_comparison.json")
        print(f"efficiency gain (dual - conventional): {100 * delta['efficiency_gain']:.2f} pts")
    return 0


def cmd_simulate(args) -> int:
    configs = build_topology_configs(args.config)
    cfg = configs[args.topology]
    sim, analysis = sim_config_for(
        cfg, args.fc_power, args.speed,
        dt=args.dt, measure_periods=args.periods,
    )
    waveforms = run_switched(sim)
    levels = count_voltage_levels(waveforms, args.level_tolerance)
    report = compare_to_analytical(waveforms.loss_breakdown(), analysis.breakdown)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    wave_path = out / f"waveform_{args.topology}.csv"
    write_waveform_csv(waveforms, wave_path)
    payload = {
        "topology": args.topology,
        "fc_power_w": args.fc_power,
        "electrical_speed_rad_s": args.speed,
        "voltage_levels": levels,
        "level_tolerance_v": args.level_tolerance,
        "fundamental_current_peak_a": waveforms.fundamental_current_peak(),
        "commanded_current_peak_a": analysis.op.current_peak,
        "comparison": report.as_dict(),
    }
    _write_json(payload, out / f"simulate_{args.topology}.json")
    print(
        f"{args.topology}: {levels} voltage levels, "
        f"sim/analytical total {report.total_simulated:.1f}/{report.total_analytical:.1f} W "
        f"({100 * report.total_relative:+.1f}%), comparison "
        + ("passed" if report.passed else "FAILED")
    )
    print(f"wrote {wave_path}")
    return 0


def cmd_compare(args) -> int:
    configs = build_topology_configs(args.config)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    rows = []
    for spec in args.cycles:
        cycle = _resolve_cycle(spec)
        entry = {"cycle": cycle.name}
        for kind in ("dual", "conventional"):
            result = run_cycle(cycle, configs[kind])
            entry[f"{kind}_efficiency"] = result.energy_efficiency
            entry[f"{kind}_output_mj"] = result.output_energy / 1e6
            entry[f"{kind}_loss_mj"] = (
                result.inverter_loss_energy + result.motor_loss_energy
            ) / 1e6
        entry["efficiency_gain"] = (
            entry["dual_efficiency"] - entry["conventional_efficiency"]
        )
        rows.append(entry)
        print(
            f"{cycle.name:8s} dual={100 * entry['dual_efficiency']:.2f}% "
            f"conventional={100 * entry['conventional_efficiency']:.2f}% "
            f"gain={100 * entry['efficiency_gain']:+.2f} pts"
        )
    _write_json({"comparison": rows}, out / "compare.json")
    print(f"wrote {out / 'compare.json'}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fcdrive",
        description="Fuel-cell EV drivetrain loss analysis: boosted vs dual-inverter.",
    )
    parser.add_argument("--config", default=None, help="INI file overriding defaults")
    parser.add_argument("--out", default="fcdrive-out", help="output directory")
    parser.add_argument(
        "--format", choices=("csv", "json"), default="json",
        help="extra tabular output for analyze",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_an = sub.add_parser("analyze", help="analytical loss breakdown at one point")
    p_an.add_argument("--topology", choices=_TOPOLOGY_CHOICES, default="both")
    p_an.add_argument("--fc-power", type=float, dest="fc_power", default=50e3,
                      help="fuel-cell power in W (default 50 kW)")
    p_an.add_argument("--speed", type=float, default=DEFAULT_VALIDATION_SPEED,
                      help="electrical speed in rad/s (default %(default)s)")
    p_an.set_defaults(func=cmd_analyze)

    p_cy = sub.add_parser("cycle", help="run a drive cycle")
    p_cy.add_argument("--cycle", required=True,
                      help="cycle CSV path or bundled name (udds, hwfet)")
    p_cy.add_argument("--topology", choices=_TOPOLOGY_CHOICES, default="both")
    p_cy.set_defaults(func=cmd_cycle)

    p_si = sub.add_parser("simulate", help="switched-waveform validation")
    p_si.add_argument("--topology", choices=("dual", "conventional"), required=True)
    p_si.add_argument("--fc-power", type=float, dest="fc_power", default=50e3)
    p_si.add_argument("--speed", type=float, default=DEFAULT_VALIDATION_SPEED)
    p_si.add_argument("--dt", type=float, default=None,
                      help="integration step in s (default 1/(200*f_sw))")
    p_si.add_argument("--periods", type=int, default=2,
                      help="fundamental periods to measure after settling")
    p_si.add_argument("--level-tolerance", type=float, default=25.0,
                      help="voltage-level clustering tolerance in V")
    p_si.set_defaults(func=cmd_simulate)

    p_co = sub.add_parser("compare", help="both topologies over drive cycles")
    p_co.add_argument("--cycle", action="append", dest="cycles",
                      help="cycle path or bundled name; repeatable "
                           "(default: udds and hwfet)")
    p_co.set_defaults(func=cmd_compare)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "compare" and not args.cycles:
        args.cycles = ["udds", "hwfet"]
    try:
        return args.func(args)
    except ConfigError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    except FileNotFoundError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    except DrivetrainError as err:
        print(f"error: {err}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
