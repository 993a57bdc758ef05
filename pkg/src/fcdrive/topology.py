"""Drivetrain topology definitions and per-instant operating-point solvers.

Two variants are modelled:

* ``conventional``: fuel cell -> boost converter -> 800 V bus shared with the
  battery -> one traction inverter switching at 20 kHz.
* ``dual``: open-end-winding motor fed by a fuel-cell inverter and a 400 V
  battery inverter, both switching at 10 kHz; the motor sees the vector sum
  of the two inverter voltages.

For the dual drivetrain the phase current must be large enough to carry the
fuel-cell power reference at a realizable inverter voltage
(|v_fc| = P_fc/(1.5*I)). Whenever the torque-driven current alone is too
small, or the collinear split would overload the battery inverter, extra
negative d-axis current is injected: it raises the current magnitude and
rotates the current vector toward the voltage vector without disturbing the
torque. The solver picks the smallest such injection (least extra copper
loss) by scanning and bisecting the feasibility boundary.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import (
    BatVoltageLimit,
    FCVoltageLimit,
    Infeasible,
    ZeroCurrent,
    ZeroSpeedPower,
)
from .fuel_cell import DEFAULT_CURVE, FuelCellCurve
from .losses import (
    MODULES,
    BoostParams,
    ConverterLoss,
    InverterConditions,
    LossBreakdown,
    PowerModuleParams,
    boost_converter_loss,
    combine,
    inverter_loss,
)
from .motor import (
    MotorParams,
    EnvironmentConstants,
    OperatingPoint,
    copper_loss_at_peak,
    operating_point,
    solve_operating_point,
    torque_current,
)
from .sharing import PowerSplit, SharingPolicy, split_voltage
from .vehicle import VehicleParams

#: Electrical speed (rad/s) used for the single-point loss validation when no
#: speed is given. At the 50 kW fuel-cell point the dual drive then uses about
#: 90% of its combined inverter voltage capability (near the maximum
#: utilization the collinear split can reach), which keeps both drivetrains
#: well inside their PWM limits across a +/-30% speed sweep.
DEFAULT_VALIDATION_SPEED = 1200.0

_IDLE_VOLTAGE_FRACTION = 0.9  # headroom for power transfer at standstill
_AUGMENT_SCAN_POINTS = 256


def _default_motor() -> MotorParams:
    return MotorParams(pole_pairs=5, inductance=0.838e-3, resistance=45e-3,
                       flux_linkage=0.127)


@dataclass(frozen=True)
class TopologyConfig:
    """Everything needed to evaluate one drivetrain variant."""

    kind: str  # "dual" | "conventional"
    battery_voltage: float
    switching_frequency: float
    inverter_module: PowerModuleParams
    battery_inverter_module: PowerModuleParams | None = None  # dual only
    boost: BoostParams | None = None  # conventional only
    motor: MotorParams = field(default_factory=_default_motor)
    vehicle: VehicleParams = field(default_factory=VehicleParams)
    env: EnvironmentConstants = field(default_factory=EnvironmentConstants)
    fc_curve: FuelCellCurve = DEFAULT_CURVE
    policy: SharingPolicy = field(default_factory=SharingPolicy)
    m_max: float = 1.0
    current_ceiling: float | None = None  # defaults to 2x module nominal

    def __post_init__(self) -> None:
        if self.kind not in ("dual", "conventional"):
            raise ValueError(f"unknown topology kind {self.kind!r}")
        if self.kind == "conventional" and self.boost is None:
            raise ValueError("conventional topology needs boost parameters")
        if self.kind == "dual" and self.boost is not None:
            raise ValueError("dual topology has no boost converter")
        if not 0 < self.m_max <= 1.0:
            raise ValueError("m_max must lie in (0, 1] for sinusoidal PWM")
        if self.current_ceiling is None:
            object.__setattr__(
                self, "current_ceiling", 2.0 * self.inverter_module.i_nom
            )

    @property
    def second_module(self) -> PowerModuleParams:
        return self.battery_inverter_module or self.inverter_module


def dual_inverter_default(**overrides) -> TopologyConfig:
    """Shipped dual-inverter configuration: 400 V battery, 10 kHz, 650 V-class modules."""
    base = dict(
        kind="dual",
        battery_voltage=400.0,
        switching_frequency=10e3,
        inverter_module=MODULES["FS400R07A3E3"],
        battery_inverter_module=MODULES["FS400R07A3E3"],
    )
    base.update(overrides)
    return TopologyConfig(**base)


def conventional_default(**overrides) -> TopologyConfig:
    """Shipped boosted configuration: 800 V bus, 20 kHz, 1.2 kV-class modules."""
    base = dict(
        kind="conventional",
        battery_voltage=800.0,
        switching_frequency=20e3,
        inverter_module=MODULES["FS400R12A2T4"],
        boost=BoostParams(module=MODULES["FF450R12KT4P"]),
    )
    base.update(overrides)
    return TopologyConfig(**base)


def inverter_conditions(
    v_d: float, v_q: float, i_d: float, i_q: float,
    dc_voltage: float, switching_frequency: float,
) -> InverterConditions:
    """Loss-model conditions of one inverter from its own voltage sub-vector."""
    mag_v = math.hypot(v_d, v_q)
    i_pk = math.hypot(i_d, i_q)
    m = 2.0 * mag_v / dc_voltage
    if m > 1.0 and m <= 1.0 + 1e-6:
        m = 1.0  # rounding at the PWM boundary
    denom = mag_v * i_pk
    cos_phi = 0.0 if denom == 0.0 else (v_d * i_d + v_q * i_q) / denom
    cos_phi = max(-1.0, min(1.0, cos_phi))
    return InverterConditions(
        current_peak=i_pk, modulation_index=m, displacement_factor=cos_phi,
        dc_voltage=dc_voltage, switching_frequency=switching_frequency,
    )


@dataclass(frozen=True)
class DualPoint:
    """Solved dual-drivetrain state at one instant."""

    op: OperatingPoint
    split: PowerSplit
    fc_voltage: float


def _try_split(
    cfg: TopologyConfig,
    i_d: float,
    i_q: float,
    omega_e: float,
    fc_power_ref: float,
    v_fc: float,
    v_lim: float,
):
    op = operating_point(i_d, i_q, omega_e, cfg.motor)
    if op.voltage_peak > v_lim + 1e-9:
        return None, Infeasible(
            f"composite voltage {op.voltage_peak:.1f} V over limit {v_lim:.1f} V"
        )
    if op.current_peak > cfg.current_ceiling:
        return None, Infeasible(
            f"current {op.current_peak:.1f} A over ceiling {cfg.current_ceiling:.1f} A"
        )
    try:
        split = split_voltage(op, fc_power_ref, v_fc, cfg.battery_voltage, cfg.m_max)
    except (FCVoltageLimit, BatVoltageLimit, ZeroCurrent) as err:
        return None, err
    return DualPoint(op=op, split=split, fc_voltage=v_fc), None


def solve_dual_point(
    cfg: TopologyConfig,
    omega_e: float,
    shaft_power: float,
    fc_power_ref: float,
    fc_voltage: float | None = None,
) -> DualPoint:
    """Operating point plus voltage split for the dual drivetrain.

    The torque current follows the shaft-power request; d-axis current is
    zero unless field weakening or fuel-cell power transport requires it.
    At standstill the fuel-cell floor power is circulated through the
    windings on the d-axis at high inverter voltage and small current.
    """
    if cfg.kind != "dual":
        raise ValueError("solve_dual_point needs a dual topology config")
    if fc_power_ref < 0:
        raise ValueError("fuel-cell power reference must be nonnegative")
    v_fc = (
        cfg.fc_curve.voltage_at_current(cfg.fc_curve.current_at_power(fc_power_ref))
        if fc_voltage is None
        else fc_voltage
    )
    cap_fc = cfg.m_max * v_fc / 2.0
    cap_bat = cfg.m_max * cfg.battery_voltage / 2.0
    v_lim = cap_fc + cap_bat

    if omega_e == 0.0:
        if shaft_power != 0.0:
            raise ZeroSpeedPower("shaft power demanded at standstill")
        if fc_power_ref == 0.0:
            op = operating_point(0.0, 0.0, 0.0, cfg.motor)
            return DualPoint(
                op=op,
                split=split_voltage(op, 0.0, v_fc, cfg.battery_voltage, cfg.m_max),
                fc_voltage=v_fc,
            )
        v_carry = _IDLE_VOLTAGE_FRACTION * min(cap_fc, cap_bat)
        i_d = -fc_power_ref / (1.5 * v_carry)
        point, err = _try_split(cfg, i_d, 0.0, 0.0, fc_power_ref, v_fc, v_lim)
        if point is None:
            raise err
        return point

    i_q = torque_current(shaft_power, omega_e, cfg.motor)
    if abs(i_q) > cfg.current_ceiling:
        raise Infeasible(
            f"torque current {i_q:.1f} A exceeds ceiling {cfg.current_ceiling:.1f} A"
        )
    base = solve_operating_point(
        shaft_power, omega_e, cfg.motor, v_lim, cfg.current_ceiling
    )
    point, err = _try_split(cfg, base.i_d, i_q, omega_e, fc_power_ref, v_fc, v_lim)
    if point is not None:
        return point

    # Augment |i_d| until the split fits, then shrink back to the boundary.
    head = cfg.current_ceiling**2 - i_q * i_q
    if head <= 0:
        raise Infeasible("no d-axis headroom under the current ceiling") from err
    i_d_deepest = -math.sqrt(head)
    if i_d_deepest >= base.i_d:
        raise err
    feasible = None
    infeasible = base.i_d
    for k in range(1, _AUGMENT_SCAN_POINTS + 1):
        cand = base.i_d + (i_d_deepest - base.i_d) * k / _AUGMENT_SCAN_POINTS
        point, cand_err = _try_split(cfg, cand, i_q, omega_e, fc_power_ref, v_fc, v_lim)
        if point is not None:
            feasible = cand
            break
        infeasible = cand
        err = cand_err
    if feasible is None:
        raise err
    for _ in range(80):
        mid = 0.5 * (infeasible + feasible)
        point, _ = _try_split(cfg, mid, i_q, omega_e, fc_power_ref, v_fc, v_lim)
        if point is not None:
            feasible = mid
        else:
            infeasible = mid
        if abs(feasible - infeasible) < 1e-9 * max(1.0, abs(feasible)):
            break
    point, err = _try_split(cfg, feasible, i_q, omega_e, fc_power_ref, v_fc, v_lim)
    if point is None:  # pragma: no cover - feasible endpoint rechecked
        raise err
    return point


def dual_sample_losses(cfg: TopologyConfig, point: DualPoint) -> LossBreakdown:
    """Loss breakdown of the dual drivetrain at a solved instant."""
    op, split = point.op, point.split
    cond_fc = inverter_conditions(
        split.v_d_fc, split.v_q_fc, op.i_d, op.i_q,
        point.fc_voltage, cfg.switching_frequency,
    )
    cond_bat = inverter_conditions(
        split.v_d_bat, split.v_q_bat, op.i_d, op.i_q,
        cfg.battery_voltage, cfg.switching_frequency,
    )
    return combine(
        inverter_loss(cond_fc, cfg.inverter_module, "fc_inverter"),
        inverter_loss(cond_bat, cfg.second_module, "battery_inverter"),
        LossBreakdown(
            motor_copper=copper_loss_at_peak(op.current_peak, cfg.motor.resistance)
        ),
    )


def solve_conventional_point(
    cfg: TopologyConfig, omega_e: float, shaft_power: float
) -> OperatingPoint:
    """Motor operating point on the boosted drivetrain (fixed 800 V bus)."""
    if cfg.kind != "conventional":
        raise ValueError("solve_conventional_point needs a conventional config")
    return solve_operating_point(
        shaft_power, omega_e, cfg.motor,
        cfg.m_max * cfg.battery_voltage / 2.0, cfg.current_ceiling,
    )


def conventional_sample_losses(
    cfg: TopologyConfig, op: OperatingPoint, fc_power_ref: float
) -> LossBreakdown:
    """Loss breakdown of the boosted drivetrain at a solved instant."""
    cond = inverter_conditions(
        op.v_d, op.v_q, op.i_d, op.i_q,
        cfg.battery_voltage, cfg.switching_frequency,
    )
    i_fc = cfg.fc_curve.current_at_power(fc_power_ref)
    v_fc = cfg.fc_curve.voltage_at_current(i_fc)
    return combine(
        inverter_loss(cond, cfg.inverter_module, "traction_inverter"),
        boost_converter_loss(i_fc, v_fc, cfg.battery_voltage, cfg.boost),
        LossBreakdown(
            motor_copper=copper_loss_at_peak(op.current_peak, cfg.motor.resistance)
        ),
    )


@dataclass(frozen=True)
class PointAnalysis:
    """Analytical losses of one drivetrain at a single operating point."""

    kind: str
    fc_power: float
    electrical_speed: float
    op: OperatingPoint
    breakdown: LossBreakdown
    fc_voltage: float
    split: PowerSplit | None = None

    @property
    def total_loss(self) -> float:
        return self.breakdown.total


def _zero_breakdown(kind: str) -> LossBreakdown:
    if kind == "dual":
        names = ("fc_inverter", "battery_inverter")
    else:
        names = ("traction_inverter", "boost")
    return LossBreakdown(converters={n: ConverterLoss() for n in names})


def analyze_point(
    cfg: TopologyConfig, fc_power: float, electrical_speed: float
) -> PointAnalysis:
    """Evaluate drivetrain losses with the fuel-cell path carrying ``fc_power``.

    The motor is loaded so its electrical power equals the fuel-cell power
    (battery net active power ~ 0 in the dual case); shaft power is found by
    a fixed-point iteration absorbing the copper loss.
    """
    if fc_power < 0:
        raise ValueError("fc_power must be nonnegative")
    i_fc = cfg.fc_curve.current_at_power(fc_power)
    v_fc = cfg.fc_curve.voltage_at_current(i_fc)
    if fc_power == 0.0:
        op = operating_point(0.0, 0.0, electrical_speed, cfg.motor)
        return PointAnalysis(
            kind=cfg.kind, fc_power=0.0, electrical_speed=electrical_speed,
            op=op, breakdown=_zero_breakdown(cfg.kind), fc_voltage=v_fc,
        )

    shaft = fc_power
    op: OperatingPoint | None = None
    point: DualPoint | None = None
    for _ in range(80):
        if cfg.kind == "dual":
            point = solve_dual_point(cfg, electrical_speed, shaft, fc_power, v_fc)
            op = point.op
        else:
            op = solve_conventional_point(cfg, electrical_speed, shaft)
        copper = copper_loss_at_peak(op.current_peak, cfg.motor.resistance)
        new_shaft = fc_power - copper
        if abs(new_shaft - shaft) <= 1e-9 * max(fc_power, 1.0):
            shaft = new_shaft
            break
        shaft = new_shaft
    if cfg.kind == "dual":
        breakdown = dual_sample_losses(cfg, point)
        return PointAnalysis(
            kind=cfg.kind, fc_power=fc_power, electrical_speed=electrical_speed,
            op=op, breakdown=breakdown, fc_voltage=v_fc, split=point.split,
        )
    breakdown = conventional_sample_losses(cfg, op, fc_power)
    return PointAnalysis(
        kind=cfg.kind, fc_power=fc_power, electrical_speed=electrical_speed,
        op=op, breakdown=breakdown, fc_voltage=v_fc,
    )


def loss_ratio(
    fc_power: float,
    electrical_speed: float,
    dual_cfg: TopologyConfig | None = None,
    conventional_cfg: TopologyConfig | None = None,
) -> float:
    """(boosted total losses) / (dual total losses) at one operating point."""
    dual_cfg = dual_cfg or dual_inverter_default()
    conventional_cfg = conventional_cfg or conventional_default()
    dual = analyze_point(dual_cfg, fc_power, electrical_speed)
    conv = analyze_point(conventional_cfg, fc_power, electrical_speed)
    if dual.total_loss == 0.0:
        raise ZeroDivisionError("dual losses are zero; ratio undefined")
    return conv.total_loss / dual.total_loss
