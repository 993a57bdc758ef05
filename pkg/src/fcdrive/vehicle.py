"""Longitudinal road-load model and the wheel-to-motor kinematic chain."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, NamedTuple

import numpy as np

from .motor import EnvironmentConstants


@dataclass(frozen=True)
class VehicleParams:
    """Road-load parameters of the modelled vehicle."""

    mass: float = 1642.9  # kg
    frontal_area: float = 2.1  # m^2
    drag_coefficient: float = 0.32
    rolling_coefficient: float = 0.024
    gear_ratio: float = 7.82
    tire_radius: float = 0.3289  # m

    def __post_init__(self) -> None:
        for name in (
            "mass", "frontal_area", "drag_coefficient",
            "rolling_coefficient", "gear_ratio", "tire_radius",
        ):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be strictly positive")

    @classmethod
    def from_mapping(cls, values: Mapping[str, float]) -> "VehicleParams":
        """Build from a key/value mapping keyed M_car, A_f, C_d, C_r, gear_ratio, r_tire."""
        try:
            return cls(
                mass=float(values["M_car"]),
                frontal_area=float(values["A_f"]),
                drag_coefficient=float(values["C_d"]),
                rolling_coefficient=float(values["C_r"]),
                gear_ratio=float(values["gear_ratio"]),
                tire_radius=float(values["r_tire"]),
            )
        except KeyError as missing:
            raise KeyError(f"vehicle config missing key {missing}") from None


class MechPower(NamedTuple):
    """Shaft power request split into its physical contributions (W)."""

    accel: float  # inertial power M*v*dv/dt
    resistive: float  # aero drag plus rolling resistance
    shaft: float  # total demanded from the traction motor


def mech_power(
    speed: float,
    accel: float,
    vp: VehicleParams,
    env: EnvironmentConstants = EnvironmentConstants(),
) -> MechPower:
    """Road-load power at vehicle speed (m/s) and acceleration (m/s^2)."""
    if speed < 0:
        raise ValueError("speed must be nonnegative")
    p_accel = vp.mass * speed * accel
    drag = 0.5 * env.air_density * vp.drag_coefficient * vp.frontal_area * speed * speed
    rolling = vp.rolling_coefficient * vp.mass * env.gravity
    p_resist = speed * (drag + rolling)
    return MechPower(accel=p_accel, resistive=p_resist, shaft=p_accel + p_resist)


def motor_shaft_speed(
    speed: float, vp: VehicleParams, pole_pairs: int
) -> tuple[float, float]:
    """Mechanical and electrical motor speed (rad/s) at vehicle speed (m/s)."""
    if speed < 0:
        raise ValueError("speed must be nonnegative")
    omega_mech = vp.gear_ratio * speed / vp.tire_radius
    return omega_mech, pole_pairs * omega_mech


def acceleration_from_trace(times, speeds) -> np.ndarray:
    """dv/dt from a sampled speed trace: central differences, one-sided ends."""
    t = np.asarray(times, dtype=float)
    v = np.asarray(speeds, dtype=float)
    if t.shape != v.shape or t.ndim != 1 or t.size < 2:
        raise ValueError("need matching 1-D time and speed arrays, >= 2 samples")
    a = np.empty_like(v)
    a[1:-1] = (v[2:] - v[:-2]) / (t[2:] - t[:-2])
    a[0] = (v[1] - v[0]) / (t[1] - t[0])
    a[-1] = (v[-1] - v[-2]) / (t[-1] - t[-2])
    return a
