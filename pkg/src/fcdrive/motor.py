"""Steady-state dq model of a non-salient PMSM.

Voltage equations (d/dt terms dropped, L_d = L_q = L_s):

    v_d = R_s*i_d - w_e*L_s*i_q
    v_q = R_s*i_q + w_e*(L_s*i_d + psi_m)

Electrical power uses the amplitude-invariant convention
P = 1.5*(v_d*i_d + v_q*i_q), so stator copper loss 3*I_rms^2*R_s with
I_rms = I_pk/sqrt(2) is contained in the electrical power and the shaft
power request maps to torque current alone: i_q = P_shaft/(1.5*psi_m*w_e).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping

from .errors import Infeasible, ZeroSpeedPower

#: Default ceiling on phase current magnitude: twice the 400 A nominal of the
#: dual-inverter power module. Callers size it from their own module choice.
DEFAULT_CURRENT_CEILING = 800.0


@dataclass(frozen=True)
class MotorParams:
    """Non-salient PMSM parameters (single synchronous inductance)."""

    pole_pairs: int
    inductance: float  # H, d- and q-axis
    resistance: float  # ohm, per phase
    flux_linkage: float  # Wb, rotor magnet

    def __post_init__(self) -> None:
        if self.pole_pairs < 1 or int(self.pole_pairs) != self.pole_pairs:
            raise ValueError(f"pole_pairs must be a positive integer, got {self.pole_pairs}")
        for name in ("inductance", "resistance", "flux_linkage"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be strictly positive")

    @classmethod
    def from_mapping(cls, values: Mapping[str, float]) -> "MotorParams":
        """Build from a key/value mapping using the symbols p, L_s, R_s, psi_m."""
        try:
            return cls(
                pole_pairs=int(float(values["p"])),
                inductance=float(values["L_s"]),
                resistance=float(values["R_s"]),
                flux_linkage=float(values["psi_m"]),
            )
        except KeyError as missing:
            raise KeyError(f"motor config missing key {missing}") from None


@dataclass(frozen=True)
class EnvironmentConstants:
    """Ambient constants for road-load evaluation."""

    air_density: float = 1.225  # kg/m^3, sea level
    gravity: float = 9.81  # m/s^2

    def __post_init__(self) -> None:
        if self.air_density <= 0 or self.gravity <= 0:
            raise ValueError("environment constants must be strictly positive")


@dataclass(frozen=True)
class OperatingPoint:
    """Solved steady-state electrical state of the machine."""

    electrical_speed: float  # rad/s
    i_d: float  # A
    i_q: float  # A
    v_d: float  # V
    v_q: float  # V

    @property
    def current_peak(self) -> float:
        return math.hypot(self.i_d, self.i_q)

    @property
    def voltage_peak(self) -> float:
        return math.hypot(self.v_d, self.v_q)


def steady_state_voltages(
    i_d: float, i_q: float, electrical_speed: float, params: MotorParams
) -> tuple[float, float]:
    """Terminal dq voltages for given currents at constant speed."""
    v_d = params.resistance * i_d - electrical_speed * params.inductance * i_q
    v_q = params.resistance * i_q + electrical_speed * (
        params.inductance * i_d + params.flux_linkage
    )
    return v_d, v_q


def electrical_power(v_d: float, v_q: float, i_d: float, i_q: float) -> float:
    """Machine electrical power, amplitude-invariant dq convention."""
    return 1.5 * (v_d * i_d + v_q * i_q)


def motor_copper_loss(i_rms: float, resistance: float) -> float:
    """Stator conduction loss 3*I_rms^2*R for RMS phase current I_rms."""
    if i_rms < 0:
        raise ValueError("RMS current must be nonnegative")
    return 3.0 * i_rms * i_rms * resistance


def copper_loss_at_peak(i_peak: float, resistance: float) -> float:
    """Copper loss expressed against peak phase current (I_rms = I_pk/sqrt(2))."""
    return 1.5 * i_peak * i_peak * resistance


def operating_point(
    i_d: float, i_q: float, electrical_speed: float, params: MotorParams
) -> OperatingPoint:
    """Assemble a consistent operating point from currents and speed."""
    v_d, v_q = steady_state_voltages(i_d, i_q, electrical_speed, params)
    return OperatingPoint(electrical_speed, i_d, i_q, v_d, v_q)


def torque_current(shaft_power: float, electrical_speed: float, params: MotorParams) -> float:
    """q-axis current delivering the requested shaft power at speed."""
    if electrical_speed == 0.0:
        if shaft_power != 0.0:
            raise ZeroSpeedPower(
                f"cannot deliver {shaft_power} W shaft power at zero speed"
            )
        return 0.0
    return shaft_power / (1.5 * params.flux_linkage * electrical_speed)


def _voltage_peak_at(i_d: float, i_q: float, w: float, params: MotorParams) -> float:
    v_d, v_q = steady_state_voltages(i_d, i_q, w, params)
    return math.hypot(v_d, v_q)


def solve_operating_point(
    shaft_power: float,
    electrical_speed: float,
    params: MotorParams,
    voltage_limit: float,
    current_ceiling: float = DEFAULT_CURRENT_CEILING,
) -> OperatingPoint:
    """Find the steady-state operating point for a shaft power request.

    i_d stays at zero while the resulting peak phase voltage fits under
    ``voltage_limit``; otherwise the smallest-magnitude negative i_d that
    brings the voltage onto the limit is found by bisection (1e-9 V
    tolerance). Raises Infeasible when no point under the limit and the
    current ceiling exists, ZeroSpeedPower for power demanded at standstill.
    """
    if voltage_limit <= 0:
        raise ValueError("voltage_limit must be positive")
    w = electrical_speed
    i_q = torque_current(shaft_power, w, params)
    if abs(i_q) > current_ceiling:
        raise Infeasible(
            f"torque current {i_q:.1f} A exceeds ceiling {current_ceiling:.1f} A"
        )

    if _voltage_peak_at(0.0, i_q, w, params) <= voltage_limit:
        return operating_point(0.0, i_q, w, params)

    # Field weakening. |v|^2 is quadratic in i_d with positive curvature;
    # its vertex is the deepest useful weakening current.
    r, x = params.resistance, w * params.inductance
    i_d_vertex = -x * w * params.flux_linkage / (r * r + x * x)
    if _voltage_peak_at(i_d_vertex, i_q, w, params) > voltage_limit:
        raise Infeasible(
            f"voltage limit {voltage_limit:.1f} V unreachable at "
            f"{w:.1f} rad/s even at full field weakening"
        )

    lo, hi = i_d_vertex, 0.0  # f(lo) <= V_lim < f(hi)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if _voltage_peak_at(mid, i_q, w, params) > voltage_limit:
            hi = mid
        else:
            lo = mid
        if abs(_voltage_peak_at(lo, i_q, w, params) - voltage_limit) < 1e-9:
            break
    i_d = lo
    if math.hypot(i_d, i_q) > current_ceiling:
        raise Infeasible(
            f"field-weakened current {math.hypot(i_d, i_q):.1f} A exceeds "
            f"ceiling {current_ceiling:.1f} A"
        )
    return operating_point(i_d, i_q, w, params)
