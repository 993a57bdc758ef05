"""Analytical device-loss models for two-level inverters and the boost cell.

Conduction losses per device position under sinusoidal PWM, with device drop
V_0 + R*i, peak phase current I, modulation index m and displacement factor
cos(phi):

    P_igbt  = 0.5*(V_ce0*I/pi + R_on*I^2/4) + m*cos(phi)*(V_ce0*I/8 + R_on*I^2/(3*pi))
    P_diode = 0.5*(V_d0*I/pi  + R_d*I^2/4)  - m*cos(phi)*(V_d0*I/8  + R_d*I^2/(3*pi))

Switching losses scale the single-point datasheet energies linearly with
current (E(I) = E_ds*I/I_nom) and with blocking voltage via V_dc/V_nom:

    P_sw  = (E_on(I) + E_off(I)) * f_sw * V_dc / (pi * V_nom)
    P_rec = E_rec(I) * f_sw * V_dc / (pi * V_nom)

The 1/pi factor is the sinusoidal per-device average; the boost cell switches
a DC current, so its switching losses omit it.
"""

from __future__ import annotations

import csv
import math
import warnings
from dataclasses import dataclass, field, replace
from typing import Mapping

from scipy.integrate import quad

from .errors import DomainError

_PI = math.pi


@dataclass(frozen=True)
class PowerModuleParams:
    """One power-module datasheet record (IGBT + antiparallel diode)."""

    label: str
    v_ces: float  # V, collector-emitter blocking rating
    v_nom: float  # V, switching-energy reference voltage
    i_nom: float  # A, switching-energy reference current
    v_ce0: float  # V, IGBT threshold
    v_d0: float  # V, diode threshold
    r_on: float  # ohm, IGBT slope resistance
    r_d: float  # ohm, diode slope resistance
    e_on: float  # J, turn-on energy at (v_nom, i_nom)
    e_off: float  # J, turn-off energy at (v_nom, i_nom)
    e_rec: float  # J, diode recovery energy at (v_nom, i_nom)

    def __post_init__(self) -> None:
        numeric = (
            self.v_ces, self.v_nom, self.i_nom, self.v_ce0, self.v_d0,
            self.r_on, self.r_d, self.e_on, self.e_off, self.e_rec,
        )
        if any(v <= 0 for v in numeric):
            raise ValueError(f"module {self.label}: all numeric fields must be > 0")
        if self.v_nom >= self.v_ces:
            raise ValueError(f"module {self.label}: v_nom must stay below v_ces")


#: Shipped datasheet rows, selected by label.
MODULES: dict[str, PowerModuleParams] = {
    "FS400R07A3E3": PowerModuleParams(
        label="FS400R07A3E3", v_ces=705.0, v_nom=300.0, i_nom=400.0,
        v_ce0=0.798, v_d0=0.95, r_on=2.2e-3, r_d=1.4e-3,
        e_on=2.24e-3, e_off=8.165e-3, e_rec=5.151e-3,
    ),
    "FS400R12A2T4": PowerModuleParams(
        label="FS400R12A2T4", v_ces=1200.0, v_nom=500.0, i_nom=300.0,
        v_ce0=0.889, v_d0=0.92, r_on=3.0e-3, r_d=1.78e-3,
        e_on=16.5e-3, e_off=18.272e-3, e_rec=14.331e-3,
    ),
    "FF450R12KT4P": PowerModuleParams(
        label="FF450R12KT4P", v_ces=1200.0, v_nom=600.0, i_nom=450.0,
        v_ce0=0.78, v_d0=0.8, r_on=2.78e-3, r_d=1.27e-3,
        e_on=13.689e-3, e_off=18.31e-3, e_rec=23.936e-3,
    ),
}

_TABLE_COLUMNS = (
    "label", "V_ces", "V_nom", "I_nom", "V_ce0", "V_D0",
    "R_on", "R_D", "E_on", "E_off", "E_rec",
)


def load_module_table(path) -> dict[str, PowerModuleParams]:
    """Read module records from a CSV with the datasheet columns.

    Expected header: label,V_ces,V_nom,I_nom,V_ce0,V_D0,R_on,R_D,E_on,E_off,E_rec
    (SI units throughout). Rows are keyed by label.
    """
    table: dict[str, PowerModuleParams] = {}
    with open(path, newline="") as fh:
        reader = csv.DictReader(row for row in fh if not row.lstrip().startswith("#"))
        if reader.fieldnames is None or tuple(reader.fieldnames) != _TABLE_COLUMNS:
            raise ValueError(
                f"module table must have columns {','.join(_TABLE_COLUMNS)}"
            )
        for row in reader:
            params = PowerModuleParams(
                label=row["label"], v_ces=float(row["V_ces"]),
                v_nom=float(row["V_nom"]), i_nom=float(row["I_nom"]),
                v_ce0=float(row["V_ce0"]), v_d0=float(row["V_D0"]),
                r_on=float(row["R_on"]), r_d=float(row["R_D"]),
                e_on=float(row["E_on"]), e_off=float(row["E_off"]),
                e_rec=float(row["E_rec"]),
            )
            table[params.label] = params
    return table


@dataclass(frozen=True)
class InverterConditions:
    """Electrical conditions one inverter sees at a quasi-static instant."""

    current_peak: float  # A, peak phase current
    modulation_index: float  # 0..1, sinusoidal PWM linear region
    displacement_factor: float  # cos(phi), -1..1
    dc_voltage: float  # V
    switching_frequency: float  # Hz

    def __post_init__(self) -> None:
        if self.current_peak < 0:
            raise ValueError("current_peak must be nonnegative")
        if self.dc_voltage <= 0:
            raise ValueError("dc_voltage must be positive")
        if self.switching_frequency <= 0:
            raise ValueError("switching_frequency must be positive")
        if self.modulation_index < 0:
            raise ValueError("modulation_index must be nonnegative")
        if abs(self.displacement_factor) > 1.0 + 1e-9:
            raise ValueError("displacement_factor must lie in [-1, 1]")


@dataclass(frozen=True)
class ConverterLoss:
    """Loss components of one converter stage, in watts."""

    igbt_conduction: float = 0.0
    diode_conduction: float = 0.0
    igbt_switching: float = 0.0
    diode_recovery: float = 0.0
    inductor_copper: float = 0.0

    def __post_init__(self) -> None:
        for name in (
            "igbt_conduction", "diode_conduction", "igbt_switching",
            "diode_recovery", "inductor_copper",
        ):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be nonnegative")

    @property
    def total(self) -> float:
        return (
            self.igbt_conduction + self.diode_conduction
            + self.igbt_switching + self.diode_recovery + self.inductor_copper
        )

    def as_dict(self) -> dict[str, float]:
        return {
            "igbt_conduction": self.igbt_conduction,
            "diode_conduction": self.diode_conduction,
            "igbt_switching": self.igbt_switching,
            "diode_recovery": self.diode_recovery,
            "inductor_copper": self.inductor_copper,
            "total": self.total,
        }


@dataclass(frozen=True)
class LossBreakdown:
    """Per-converter loss components plus motor copper for one instant."""

    converters: Mapping[str, ConverterLoss] = field(default_factory=dict)
    motor_copper: float = 0.0

    def __post_init__(self) -> None:
        if self.motor_copper < 0:
            raise ValueError("motor_copper must be nonnegative")
        object.__setattr__(self, "converters", dict(self.converters))

    @property
    def converter_total(self) -> float:
        return sum(c.total for c in self.converters.values())

    @property
    def total(self) -> float:
        return self.converter_total + self.motor_copper

    def as_dict(self) -> dict:
        return {
            "converters": {name: c.as_dict() for name, c in sorted(self.converters.items())},
            "motor_copper": self.motor_copper,
            "total": self.total,
        }


def combine(*breakdowns: LossBreakdown) -> LossBreakdown:
    """Merge breakdowns; converter names must not collide."""
    converters: dict[str, ConverterLoss] = {}
    copper = 0.0
    for b in breakdowns:
        for name, c in b.converters.items():
            if name in converters:
                raise ValueError(f"duplicate converter name {name!r}")
            converters[name] = c
        copper += b.motor_copper
    return LossBreakdown(converters=converters, motor_copper=copper)


def _clamped(value: float, what: str, scale: float) -> float:
    # The closed forms stay nonnegative for m*cos(phi) in [-1, 1]; a clamp
    # guards against rounding at the extremes.
    if value < 0.0:
        if value < -1e-9 * max(scale, 1.0):
            warnings.warn(
                f"{what} evaluated to {value:.3e} W; clamped to zero",
                RuntimeWarning,
                stacklevel=3,
            )
        return 0.0
    return value


def conduction_losses(
    c: InverterConditions, mod: PowerModuleParams
) -> tuple[float, float]:
    """Average conduction loss (W) of one IGBT and one diode position."""
    if c.modulation_index > 1.0 + 1e-9:
        raise DomainError(
            f"modulation index {c.modulation_index} outside the linear region"
        )
    i = c.current_peak
    mcos = c.modulation_index * c.displacement_factor
    p_igbt = 0.5 * (mod.v_ce0 * i / _PI + mod.r_on * i * i / 4.0) + mcos * (
        mod.v_ce0 * i / 8.0 + mod.r_on * i * i / (3.0 * _PI)
    )
    p_diode = 0.5 * (mod.v_d0 * i / _PI + mod.r_d * i * i / 4.0) - mcos * (
        mod.v_d0 * i / 8.0 + mod.r_d * i * i / (3.0 * _PI)
    )
    scale = mod.v_ce0 * i + mod.r_on * i * i
    return (
        _clamped(p_igbt, "IGBT conduction loss", scale),
        _clamped(p_diode, "diode conduction loss", scale),
    )


def switching_losses(
    c: InverterConditions, mod: PowerModuleParams
) -> tuple[float, float]:
    """Average switching (IGBT) and recovery (diode) loss per position, W."""
    energy_scale = c.current_peak / mod.i_nom
    volt_factor = c.switching_frequency * c.dc_voltage / (_PI * mod.v_nom)
    p_sw = (mod.e_on + mod.e_off) * energy_scale * volt_factor
    p_rec = mod.e_rec * energy_scale * volt_factor
    return p_sw, p_rec


def inverter_loss(
    c: InverterConditions, mod: PowerModuleParams, name: str = "traction_inverter"
) -> LossBreakdown:
    """Total loss of a three-phase two-level inverter (six device positions)."""
    p_igbt, p_diode = conduction_losses(c, mod)
    p_sw, p_rec = switching_losses(c, mod)
    return LossBreakdown(
        converters={
            name: ConverterLoss(
                igbt_conduction=6.0 * p_igbt,
                diode_conduction=6.0 * p_diode,
                igbt_switching=6.0 * p_sw,
                diode_recovery=6.0 * p_rec,
            )
        }
    )


@dataclass(frozen=True)
class BoostParams:
    """Boost-converter component values and its power module."""

    inductance: float = 0.3e-3  # H
    inductor_esr: float = 1.2e-3  # ohm
    switching_frequency: float = 20e3  # Hz
    module: PowerModuleParams = MODULES["FF450R12KT4P"]

    def __post_init__(self) -> None:
        if self.inductance <= 0:
            raise ValueError("inductance must be positive")
        if self.inductor_esr < 0:
            raise ValueError("inductor_esr must be nonnegative")
        if self.switching_frequency <= 0:
            raise ValueError("switching_frequency must be positive")


def boost_converter_loss(
    i_fc: float, v_fc: float, v_bus: float, bp: BoostParams
) -> LossBreakdown:
    """Average-model losses of the unidirectional boost cell.

    Duty D = 1 - V_fc/V_bus splits conduction between IGBT (on-time) and
    diode (off-time). Switching energies see the constant inductor current,
    so the sinusoidal 1/pi average does not apply.
    """
    if i_fc < 0:
        raise ValueError("fuel-cell current must be nonnegative")
    if v_fc <= 0:
        raise DomainError("fuel-cell voltage must be positive")
    if v_fc > v_bus * (1.0 + 1e-12):
        raise DomainError(
            f"boost input {v_fc:.1f} V exceeds bus voltage {v_bus:.1f} V"
        )
    mod = bp.module
    duty = 1.0 - v_fc / v_bus
    p_igbt = duty * (mod.v_ce0 * i_fc + mod.r_on * i_fc * i_fc)
    p_diode = (1.0 - duty) * (mod.v_d0 * i_fc + mod.r_d * i_fc * i_fc)
    energy_scale = i_fc / mod.i_nom
    volt_factor = bp.switching_frequency * v_bus / mod.v_nom
    p_sw = (mod.e_on + mod.e_off) * energy_scale * volt_factor
    p_rec = mod.e_rec * energy_scale * volt_factor
    p_ind = i_fc * i_fc * bp.inductor_esr
    return LossBreakdown(
        converters={
            "boost": ConverterLoss(
                igbt_conduction=p_igbt,
                diode_conduction=p_diode,
                igbt_switching=p_sw,
                diode_recovery=p_rec,
                inductor_copper=p_ind,
            )
        }
    )


def conduction_loss_oracle(
    c: InverterConditions, mod: PowerModuleParams
) -> tuple[float, float]:
    """Numerically averaged conduction losses over one fundamental period.

    Independent check of the closed forms: upper-IGBT duty
    d(theta) = (1 + m*sin(theta + phi))/2 against current I*sin(theta);
    the IGBT conducts on the positive half-cycle, the complementary diode
    on the rest of it. Quadrature over the conducting half, averaged over
    the full period.
    """
    i_pk = c.current_peak
    m = c.modulation_index
    phi = math.acos(max(-1.0, min(1.0, c.displacement_factor)))

    def igbt_integrand(theta: float) -> float:
        i = i_pk * math.sin(theta)
        duty = 0.5 * (1.0 + m * math.sin(theta + phi))
        return duty * (mod.v_ce0 * i + mod.r_on * i * i)

    def diode_integrand(theta: float) -> float:
        i = i_pk * math.sin(theta)
        duty = 0.5 * (1.0 + m * math.sin(theta + phi))
        return (1.0 - duty) * (mod.v_d0 * i + mod.r_d * i * i)

    opts = dict(epsabs=1e-13, epsrel=1e-12, limit=200)
    igbt, _ = quad(igbt_integrand, 0.0, _PI, **opts)
    diode, _ = quad(diode_integrand, 0.0, _PI, **opts)
    return igbt / (2.0 * _PI), diode / (2.0 * _PI)


def symmetric_test_module(label: str = "SYMM") -> PowerModuleParams:
    """Synthetic module with identical IGBT and diode drops, for property tests."""
    return replace(
        MODULES["FS400R07A3E3"], label=label, v_d0=MODULES["FS400R07A3E3"].v_ce0,
        r_d=MODULES["FS400R07A3E3"].r_on,
    )
