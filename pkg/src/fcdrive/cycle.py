"""Quasi-static drive-cycle evaluation of either drivetrain topology.

Each cycle sample is treated as an independent electrical steady state
(1 Hz cycle data against millisecond electrical dynamics). Per sample the
engine chains road load -> motor operating point -> converter losses, with
the fuel-cell power reference shaped once over the whole horizon from the
motor electrical-power demand. DC-side power follows the loss bookkeeping

    P_dc = P_shaft + P_losses        (losses: converters + motor copper)

and during regenerative braking the losses are paid out of the recovered
energy. Cycle energy efficiency is

    eta = E_out / (E_out + E_loss_converters + E_loss_motor)

with the output power taken at the shaft while motoring and at the DC link
while braking. All integrals are trapezoidal.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import IO, Iterable

import numpy as np

from .errors import DrivetrainError, NonMonotonicTime, ParseError, ZeroEnergy
from .motor import copper_loss_at_peak, solve_operating_point
from .sharing import fc_power_reference, validate_fc_constraints
from .topology import (
    TopologyConfig,
    conventional_sample_losses,
    dual_sample_losses,
    solve_conventional_point,
    solve_dual_point,
)
from .vehicle import acceleration_from_trace, mech_power, motor_shaft_speed

MPH_TO_MPS = 0.44704

_CSV_COLUMNS = (
    "t_s", "speed_mps", "p_shaft_w", "p_dc_w", "p_fc_w", "p_bat_w",
    "loss_motor_w", "loss_fc_inverter_w", "loss_battery_inverter_w",
    "loss_traction_inverter_w", "loss_boost_w", "loss_total_w",
)


@dataclass(frozen=True)
class DriveCycle:
    """Timestamped vehicle speed trace."""

    name: str
    times: np.ndarray = field(repr=False)
    speeds: np.ndarray = field(repr=False)  # m/s

    def __post_init__(self) -> None:
        t = np.asarray(self.times, dtype=float)
        v = np.asarray(self.speeds, dtype=float)
        if t.ndim != 1 or t.shape != v.shape or t.size < 2:
            raise ValueError("cycle needs matching 1-D time/speed arrays, >= 2 samples")
        if np.any(np.diff(t) <= 0):
            raise NonMonotonicTime(f"cycle {self.name!r}: time must strictly increase")
        if np.any(v < 0):
            raise ValueError(f"cycle {self.name!r}: speeds must be nonnegative")
        object.__setattr__(self, "times", t)
        object.__setattr__(self, "speeds", v)

    @property
    def duration(self) -> float:
        return float(self.times[-1] - self.times[0])

    @property
    def max_speed_mph(self) -> float:
        return float(self.speeds.max()) / MPH_TO_MPS


def _parse_cycle_lines(lines: Iterable[str], name: str) -> DriveCycle:
    header = None
    times: list[float] = []
    speeds: list[float] = []
    mph = False
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if header is None:
            header = line.replace(" ", "").lower()
            if header == "time_s,speed_mph":
                mph = True
            elif header == "time_s,speed_mps":
                mph = False
            else:
                raise ParseError(
                    f"{name}: line {lineno}: header must be "
                    f"'time_s,speed_mph' or 'time_s,speed_mps', got {line!r}"
                )
            continue
        parts = line.split(",")
        if len(parts) != 2:
            raise ParseError(f"{name}: line {lineno}: expected 2 fields, got {len(parts)}")
        try:
            t = float(parts[0])
            v = float(parts[1])
        except ValueError:
            raise ParseError(f"{name}: line {lineno}: non-numeric value in {line!r}") from None
        if v < 0:
            raise ParseError(f"{name}: line {lineno}: negative speed {v}")
        times.append(t)
        speeds.append(v)
    if header is None:
        raise ParseError(f"{name}: empty file (no header)")
    if len(times) < 2:
        raise ParseError(f"{name}: need at least 2 samples")
    t_arr = np.asarray(times)
    if np.any(np.diff(t_arr) <= 0):
        bad = int(np.nonzero(np.diff(t_arr) <= 0)[0][0])
        raise NonMonotonicTime(
            f"{name}: time goes backwards between samples {bad} and {bad + 1}"
        )
    v_arr = np.asarray(speeds)
    if mph:
        v_arr = v_arr * MPH_TO_MPS
    return DriveCycle(name=name, times=t_arr, speeds=v_arr)


def load_cycle(source: str | Path | IO[str], name: str | None = None) -> DriveCycle:
    """Load a drive cycle CSV ('time_s,speed_mph' or 'time_s,speed_mps' header).

    '#' lines are comments. mph speeds are converted to m/s on load.
    """
    if hasattr(source, "read"):
        return _parse_cycle_lines(source, name or "<stream>")
    path = Path(source)
    with open(path) as fh:
        return _parse_cycle_lines(fh, name or path.stem)


def bundled_cycle(name: str) -> DriveCycle:
    """Load one of the shipped cycles by name ('udds' or 'hwfet')."""
    ref = resources.files("fcdrive").joinpath(f"data/cycles/{name.lower()}.csv")
    if not ref.is_file():
        raise FileNotFoundError(f"no bundled cycle named {name!r}")
    with ref.open() as fh:
        return _parse_cycle_lines(fh, name.lower())


@dataclass(frozen=True)
class CycleResult:
    """Per-sample power flows and aggregate energies for one cycle run."""

    cycle_name: str
    topology: str
    times: np.ndarray = field(repr=False)
    speeds: np.ndarray = field(repr=False)
    p_shaft: np.ndarray = field(repr=False)
    p_dc: np.ndarray = field(repr=False)
    p_fc: np.ndarray = field(repr=False)
    p_bat: np.ndarray = field(repr=False)
    loss_motor: np.ndarray = field(repr=False)
    loss_converters: dict[str, np.ndarray] = field(repr=False)
    output_energy: float = 0.0
    inverter_loss_energy: float = 0.0
    motor_loss_energy: float = 0.0
    energy_efficiency: float = 1.0
    zero_energy: bool = False

    @property
    def loss_total(self) -> np.ndarray:
        total = self.loss_motor.copy()
        for series in self.loss_converters.values():
            total = total + series
        return total

    def summary(self) -> dict:
        peak = {
            "loss_total_w": float(self.loss_total.max()),
            "p_shaft_w": float(self.p_shaft.max()),
            "p_dc_w": float(self.p_dc.max()),
            "p_fc_w": float(self.p_fc.max()),
        }
        return {
            "cycle": self.cycle_name,
            "topology": self.topology,
            "duration_s": float(self.times[-1] - self.times[0]),
            "energies_j": {
                "output": self.output_energy,
                "loss_inverter": self.inverter_loss_energy,
                "loss_motor": self.motor_loss_energy,
                "loss_total": self.inverter_loss_energy + self.motor_loss_energy,
            },
            "energy_efficiency": self.energy_efficiency,
            "zero_energy": self.zero_energy,
            "peak": peak,
        }


def energy_efficiency(result: CycleResult) -> float:
    """Recompute cycle energy efficiency from a result's aggregate energies."""
    if result.output_energy <= 0.0:
        raise ZeroEnergy("cycle produced no output energy")
    return result.output_energy / (
        result.output_energy + result.inverter_loss_energy + result.motor_loss_energy
    )


def _wrap_sample_error(err: DrivetrainError, k: int, t: float) -> DrivetrainError:
    err.args = (f"sample {k} (t={t:g} s): {err.args[0] if err.args else err}",)
    return err


def run_cycle(cycle: DriveCycle, cfg: TopologyConfig) -> CycleResult:
    """Run one topology over a drive cycle, sample by sample."""
    t = cycle.times
    v = cycle.speeds
    n = t.size
    accel = acceleration_from_trace(t, v)
    steps = np.diff(t)

    omega_e = np.empty(n)
    p_shaft = np.empty(n)
    for k in range(n):
        _, omega_e[k] = motor_shaft_speed(v[k], cfg.vehicle, cfg.motor.pole_pairs)
        p_shaft[k] = mech_power(v[k], accel[k], cfg.vehicle, cfg.env).shaft

    # Demand pass: electrical power the motor would draw, used only to shape
    # the fuel-cell reference. The dual drivetrain's composite voltage limit
    # is taken at the light-load stack voltage here; the realized per-sample
    # solve below uses the stack voltage at the actual reference power.
    if cfg.kind == "dual":
        v_fc_light = cfg.fc_curve.voltage_at_current(
            cfg.fc_curve.current_at_power(cfg.policy.fc_min_power)
        )
        v_lim_demand = cfg.m_max * (v_fc_light + cfg.battery_voltage) / 2.0
    else:
        v_lim_demand = cfg.m_max * cfg.battery_voltage / 2.0
    demand = np.empty(n)
    op_demand = [None] * n
    for k in range(n):
        try:
            op = solve_operating_point(
                p_shaft[k], omega_e[k], cfg.motor, v_lim_demand, cfg.current_ceiling
            )
        except DrivetrainError as err:
            raise _wrap_sample_error(err, k, t[k])
        op_demand[k] = op
        demand[k] = p_shaft[k] + copper_loss_at_peak(
            op.current_peak, cfg.motor.resistance
        )

    p_fc = fc_power_reference(demand, cfg.policy, steps)

    loss_motor = np.empty(n)
    if cfg.kind == "dual":
        conv_names = ("fc_inverter", "battery_inverter")
    else:
        conv_names = ("traction_inverter", "boost")
    loss_conv = {name: np.empty(n) for name in conv_names}

    for k in range(n):
        try:
            if cfg.kind == "dual":
                point = solve_dual_point(cfg, omega_e[k], p_shaft[k], p_fc[k])
                breakdown = dual_sample_losses(cfg, point)
            else:
                op = op_demand[k]  # same voltage limit as the demand pass
                breakdown = conventional_sample_losses(cfg, op, p_fc[k])
        except DrivetrainError as err:
            raise _wrap_sample_error(err, k, t[k])
        loss_motor[k] = breakdown.motor_copper
        for name in conv_names:
            loss_conv[name][k] = breakdown.converters[name].total

    loss_total = loss_motor + sum(loss_conv.values())
    p_dc = p_shaft + loss_total
    p_bat = p_dc - p_fc

    p_out = np.where(p_shaft >= 0.0, p_shaft, p_dc)
    output_energy = float(np.trapezoid(p_out, t))
    inverter_loss_energy = float(np.trapezoid(sum(loss_conv.values()), t))
    motor_loss_energy = float(np.trapezoid(loss_motor, t))

    zero = output_energy <= 0.0
    eta = 1.0 if zero else output_energy / (
        output_energy + inverter_loss_energy + motor_loss_energy
    )
    return CycleResult(
        cycle_name=cycle.name,
        topology=cfg.kind,
        times=t,
        speeds=v,
        p_shaft=p_shaft,
        p_dc=p_dc,
        p_fc=p_fc,
        p_bat=p_bat,
        loss_motor=loss_motor,
        loss_converters=loss_conv,
        output_energy=output_energy,
        inverter_loss_energy=inverter_loss_energy,
        motor_loss_energy=motor_loss_energy,
        energy_efficiency=eta,
        zero_energy=zero,
    )


def check_fc_trace(result: CycleResult, cfg: TopologyConfig):
    """Validate the realized fuel-cell trace of a run against the policy."""
    steps = np.diff(result.times)
    return validate_fc_constraints(result.p_fc, cfg.policy, steps)


def write_result_csv(result: CycleResult, path) -> None:
    """Per-sample result table; columns are fixed and documented in README."""
    conv = result.loss_converters

    def series(name: str) -> np.ndarray:
        return conv.get(name, np.zeros_like(result.times))

    columns = [
        result.times, result.speeds, result.p_shaft, result.p_dc,
        result.p_fc, result.p_bat, result.loss_motor,
        series("fc_inverter"), series("battery_inverter"),
        series("traction_inverter"), series("boost"), result.loss_total,
    ]
    with open(path, "w", newline="") as fh:
        fh.write(",".join(_CSV_COLUMNS) + "\n")
        for row in zip(*columns):
            fh.write(",".join(f"{x:.10g}" for x in row) + "\n")


def write_result_json(result: CycleResult, path) -> None:
    with open(path, "w") as fh:
        json.dump(result.summary(), fh, indent=2, sort_keys=True)
        fh.write("\n")
