"""Fuel-cell stack polarization model.

Maps stack current to terminal voltage (linear V_oc - R_int*I by default, or
a monotone breakpoint table) and inverts power to current on the usable
branch, i.e. left of the P(I) maximum.

The shipped linear default (V_oc = 500 V, R_int = 0.87 ohm) is a fit giving
roughly 70 kW rated output near 240 A inside a typical heavy-duty PEM stack
voltage window; override it with a measured table where available.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import OutOfRange, Unreachable

_POWER_TOL = 1e-9  # relative, for power inversion


@dataclass(frozen=True)
class FuelCellCurve:
    """Polarization curve with power inversion on the usable branch."""

    rated_power: float
    max_current: float
    v_oc: float | None = None
    r_int: float | None = None
    currents: np.ndarray | None = field(default=None, repr=False)
    voltages: np.ndarray | None = field(default=None, repr=False)

    @classmethod
    def linear(
        cls, v_oc: float = 500.0, r_int: float = 0.87, rated_power: float = 70e3
    ) -> "FuelCellCurve":
        """Linear stack model; max_current is the rated-power current."""
        if v_oc <= 0 or r_int <= 0:
            raise ValueError("v_oc and r_int must be positive")
        peak = v_oc * v_oc / (4.0 * r_int)
        if rated_power > peak:
            raise ValueError(
                f"rated power {rated_power:.0f} W beyond curve maximum {peak:.0f} W"
            )
        disc = v_oc * v_oc - 4.0 * r_int * rated_power
        i_rated = (v_oc - math.sqrt(disc)) / (2.0 * r_int)
        return cls(rated_power=rated_power, max_current=i_rated, v_oc=v_oc, r_int=r_int)

    @classmethod
    def from_table(
        cls, currents, voltages, rated_power: float | None = None
    ) -> "FuelCellCurve":
        """Piecewise-linear curve from (I, V) breakpoints, strictly monotone."""
        i = np.asarray(currents, dtype=float)
        v = np.asarray(voltages, dtype=float)
        if i.ndim != 1 or i.shape != v.shape or i.size < 2:
            raise ValueError("need matching 1-D current and voltage arrays, >= 2 points")
        if i[0] < 0:
            raise ValueError("currents must start at >= 0")
        if np.any(np.diff(i) <= 0):
            raise ValueError("currents must be strictly increasing")
        if np.any(np.diff(v) >= 0):
            raise ValueError("voltages must be strictly decreasing")
        power = i * v
        if np.any(np.diff(power) <= 0):
            # keep only the usable branch: drop points past the power maximum
            knee = int(np.argmax(power))
            if knee < 1:
                raise ValueError("power curve has no rising branch")
            i, v, power = i[: knee + 1], v[: knee + 1], power[: knee + 1]
        p_max = float(power[-1])
        rated = p_max if rated_power is None else float(rated_power)
        if rated > p_max * (1.0 + 1e-12):
            raise ValueError(
                f"rated power {rated:.0f} W beyond table maximum {p_max:.0f} W"
            )
        return cls(
            rated_power=rated, max_current=float(i[-1]), currents=i, voltages=v
        )

    @classmethod
    def from_csv(cls, path, rated_power: float | None = None) -> "FuelCellCurve":
        """Load a (current_A, voltage_V) table; '#' lines are comments."""
        cur, vol = [], []
        with open(path, newline="") as fh:
            reader = csv.reader(row for row in fh if not row.lstrip().startswith("#"))
            for row in reader:
                if not row or row[0].strip().lower() in ("current_a", "current"):
                    continue
                cur.append(float(row[0]))
                vol.append(float(row[1]))
        return cls.from_table(cur, vol, rated_power)

    @property
    def is_linear(self) -> bool:
        return self.v_oc is not None

    def voltage_at_current(self, current: float) -> float:
        """Terminal voltage at a stack current on [0, max_current]."""
        if current < 0 or current > self.max_current * (1.0 + 1e-12):
            raise OutOfRange(
                f"current {current:.2f} A outside [0, {self.max_current:.2f}] A"
            )
        if self.is_linear:
            return self.v_oc - self.r_int * current
        return float(np.interp(current, self.currents, self.voltages))

    def current_at_power(self, power: float) -> float:
        """Usable-branch current delivering the requested power."""
        if power < 0:
            raise ValueError("power must be nonnegative")
        if power > self.rated_power * (1.0 + 1e-12):
            raise Unreachable(
                f"power {power:.0f} W exceeds rated {self.rated_power:.0f} W"
            )
        if power == 0.0:
            return 0.0
        if self.is_linear:
            disc = self.v_oc * self.v_oc - 4.0 * self.r_int * power
            current = (self.v_oc - math.sqrt(max(disc, 0.0))) / (2.0 * self.r_int)
            return min(current, self.max_current)
        # P(I) is strictly increasing on the stored branch: bisect.
        lo, hi = 0.0, self.max_current
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            if mid * self.voltage_at_current(mid) < power:
                lo = mid
            else:
                hi = mid
            if (hi - lo) * self.voltage_at_current(lo) < _POWER_TOL * max(power, 1.0):
                break
        current = 0.5 * (lo + hi)
        if abs(current * self.voltage_at_current(current) - power) > 1e-6 * max(power, 1.0):
            raise Unreachable(f"power {power:.0f} W not invertible on the table")
        return current


#: Artifact default: linear stand-in for a 70 kW heavy-duty PEM stack.
DEFAULT_CURVE = FuelCellCurve.linear()
