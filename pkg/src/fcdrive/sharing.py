"""Fuel-cell power reference shaping and dual-inverter voltage splitting.

The reference keeps the stack inside its operating rules: power stays above
a minimum floor (no shutdown), never reverses, and ramps slowly. The motor
voltage vector is then split between the two inverters so the fuel-cell
inverter realizes exactly the reference power; the split is collinear with
the current vector, which gives the fuel-cell inverter unity displacement
factor and the smallest voltage magnitude for a given power.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import BatVoltageLimit, FCVoltageLimit, ZeroCurrent
from .motor import OperatingPoint, electrical_power

_LIMIT_SLACK = 1e-9  # V, absolute allowance on inverter voltage caps


@dataclass(frozen=True)
class SharingPolicy:
    """Shaping constants for the fuel-cell power reference."""

    filter_time_constant: float = 5.0  # s
    fc_min_power: float = 3.5e3  # W, 5% of the 70 kW stack rating
    fc_max_power: float = 70e3  # W
    fc_slew_limit: float = 5e3  # W/s

    def __post_init__(self) -> None:
        if self.filter_time_constant <= 0:
            raise ValueError("filter_time_constant must be positive")
        if not (0 <= self.fc_min_power < self.fc_max_power):
            raise ValueError("need 0 <= fc_min_power < fc_max_power")
        if self.fc_slew_limit <= 0:
            raise ValueError("fc_slew_limit must be positive")


def fc_power_reference(
    demand: Sequence[float] | np.ndarray,
    policy: SharingPolicy,
    dt: float | Sequence[float] | np.ndarray,
) -> np.ndarray:
    """Shape a drivetrain power demand into a fuel-cell power reference.

    Regenerative (negative) demand is floored at zero, first-order low-pass
    filtered (exact zero-order-hold discretization), clamped to the policy
    band and slew-limited. ``dt`` is either a scalar sample interval or the
    per-step intervals (length n-1).
    """
    u = np.maximum(np.asarray(demand, dtype=float), 0.0)
    if u.ndim != 1 or u.size == 0:
        raise ValueError("demand must be a nonempty 1-D sequence")
    if np.isscalar(dt) or getattr(dt, "ndim", 1) == 0:
        steps = np.full(max(u.size - 1, 0), float(dt))
    else:
        steps = np.asarray(dt, dtype=float)
        if steps.shape != (u.size - 1,):
            raise ValueError("per-step dt must have length len(demand) - 1")
    if np.any(steps <= 0):
        raise ValueError("dt must be positive")

    tau = policy.filter_time_constant
    lo, hi, slew = policy.fc_min_power, policy.fc_max_power, policy.fc_slew_limit

    out = np.empty_like(u)
    state = u[0]
    out[0] = min(max(state, lo), hi)
    for k in range(1, u.size):
        h = steps[k - 1]
        state += (1.0 - math.exp(-h / tau)) * (u[k] - state)
        target = min(max(state, lo), hi)
        max_step = slew * h
        delta = min(max(target - out[k - 1], -max_step), max_step)
        out[k] = out[k - 1] + delta
    return out


@dataclass(frozen=True)
class FcConstraintReport:
    """Outcome of checking a fuel-cell power trace against its rules."""

    min_power: float
    max_slew_rate: float
    negative_indices: tuple[int, ...]
    below_min_indices: tuple[int, ...]
    slew_violation_indices: tuple[int, ...]
    passed: bool


def validate_fc_constraints(
    trace: Sequence[float] | np.ndarray,
    policy: SharingPolicy,
    dt: float | Sequence[float] | np.ndarray,
) -> FcConstraintReport:
    """Check floor, unidirectionality and slew of a fuel-cell power trace."""
    p = np.asarray(trace, dtype=float)
    if np.isscalar(dt) or getattr(dt, "ndim", 1) == 0:
        steps = np.full(max(p.size - 1, 0), float(dt))
    else:
        steps = np.asarray(dt, dtype=float)
    negative = tuple(int(i) for i in np.nonzero(p < 0.0)[0])
    floor_tol = policy.fc_min_power * 1e-9
    below = tuple(int(i) for i in np.nonzero(p < policy.fc_min_power - floor_tol)[0])
    if p.size > 1:
        rates = np.abs(np.diff(p)) / steps
        max_rate = float(rates.max())
        slew_tol = policy.fc_slew_limit * (1.0 + 1e-9)
        slew_bad = tuple(int(i) + 1 for i in np.nonzero(rates > slew_tol)[0])
    else:
        max_rate = 0.0
        slew_bad = ()
    return FcConstraintReport(
        min_power=float(p.min()),
        max_slew_rate=max_rate,
        negative_indices=negative,
        below_min_indices=below,
        slew_violation_indices=slew_bad,
        passed=not (negative or below or slew_bad),
    )


@dataclass(frozen=True)
class PowerSplit:
    """Voltage vectors assigned to the two inverters for one instant."""

    v_d_fc: float
    v_q_fc: float
    v_d_bat: float
    v_q_bat: float
    realized_fc_power: float
    realized_battery_power: float

    @property
    def fc_magnitude(self) -> float:
        return math.hypot(self.v_d_fc, self.v_q_fc)

    @property
    def battery_magnitude(self) -> float:
        return math.hypot(self.v_d_bat, self.v_q_bat)


def split_voltage(
    op: OperatingPoint,
    fc_power_ref: float,
    v_fc: float,
    v_bat: float,
    m_max: float = 1.0,
) -> PowerSplit:
    """Split the motor voltage vector between fuel-cell and battery inverters.

    The fuel-cell vector is collinear with the current vector and scaled so
    its realized power equals the reference; the battery inverter takes the
    remainder. Raises when either vector exceeds its PWM capability
    m_max*V_dc/2, or when power is requested with zero phase current.
    """
    i_d, i_q = op.i_d, op.i_q
    i_sq = i_d * i_d + i_q * i_q
    if fc_power_ref > 0.0 and i_sq == 0.0:
        raise ZeroCurrent(
            f"fuel-cell power {fc_power_ref:.0f} W requested with zero phase current"
        )
    k = 0.0 if fc_power_ref == 0.0 else fc_power_ref / (1.5 * i_sq)
    v_d_fc, v_q_fc = k * i_d, k * i_q
    v_d_bat, v_q_bat = op.v_d - v_d_fc, op.v_q - v_q_fc

    cap_fc = m_max * v_fc / 2.0
    cap_bat = m_max * v_bat / 2.0
    mag_fc = math.hypot(v_d_fc, v_q_fc)
    mag_bat = math.hypot(v_d_bat, v_q_bat)
    if mag_fc > cap_fc + _LIMIT_SLACK:
        raise FCVoltageLimit(
            f"fuel-cell inverter needs {mag_fc:.1f} V but caps at {cap_fc:.1f} V; "
            "lower the power reference or raise the phase current"
        )
    if mag_bat > cap_bat + _LIMIT_SLACK:
        raise BatVoltageLimit(
            f"battery inverter needs {mag_bat:.1f} V but caps at {cap_bat:.1f} V"
        )
    p_fc = electrical_power(v_d_fc, v_q_fc, i_d, i_q)
    p_bat = electrical_power(v_d_bat, v_q_bat, i_d, i_q)
    return PowerSplit(
        v_d_fc=v_d_fc, v_q_fc=v_q_fc, v_d_bat=v_d_bat, v_q_bat=v_q_bat,
        realized_fc_power=p_fc, realized_battery_power=p_bat,
    )


def write_reference_csv(path, times, fc_power, battery_power) -> None:
    """Export a power-sharing trace as (t, P_fc, P_bat) rows."""
    t = np.asarray(times, dtype=float)
    fc = np.asarray(fc_power, dtype=float)
    bat = np.asarray(battery_power, dtype=float)
    if not (t.shape == fc.shape == bat.shape):
        raise ValueError("times, fc_power and battery_power must have equal length")
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["t_s", "p_fc_w", "p_bat_w"])
        for row in zip(t, fc, bat):
            writer.writerow([f"{x:.10g}" for x in row])
