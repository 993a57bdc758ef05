"""Fixed-step switched-waveform simulator for cross-validating the loss models.

Simulates sinusoidal PWM (asymmetric regular sampling, triangular carriers)
driving the stator RL + back-EMF circuit with forward-Euler integration,
switching instants quantized to the step grid. The dual topology runs two
bridges on isolated buses with carriers shifted half a period; the winding
sees the difference of the two leg voltages minus the floating zero-sequence
offset. Device conduction uses the same threshold+slope drops as the
analytical model; switching events charge the datasheet energies scaled by
instantaneous current and bus voltage. The boost cell is simulated
separately cycle-by-cycle with a slow duty trim holding the commanded
inductor current.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import UnstableIntegration
from .losses import BoostParams, ConverterLoss, LossBreakdown, PowerModuleParams
from .motor import MotorParams, OperatingPoint
from .sharing import PowerSplit
from .topology import PointAnalysis, TopologyConfig, analyze_point

_TWO_THIRDS_PI = 2.0 * math.pi / 3.0
_PHASE_OFFSETS = (0.0, -_TWO_THIRDS_PI, +_TWO_THIRDS_PI)
_I_EPS = 1e-9  # below this the leg is treated as ideal (no drop)

# conduction-state codes per leg
STATE_HI_IGBT, STATE_HI_DIODE, STATE_LO_IGBT, STATE_LO_DIODE = 0, 1, 2, 3


@dataclass(frozen=True)
class SimConfig:
    """One switched-simulation run description."""

    topology: str  # 'dual' | 'conventional'
    op: OperatingPoint
    motor: MotorParams
    battery_voltage: float
    switching_frequency: float
    inverter_module: PowerModuleParams
    fc_voltage: float = 0.0  # dual FC bus
    battery_inverter_module: PowerModuleParams | None = None
    split: PowerSplit | None = None  # dual voltage assignment
    boost: BoostParams | None = None  # conventional boost cell
    fc_current: float = 0.0  # conventional boost inductor current
    dt: float | None = None  # default 1/(200 f_sw)
    settle_periods: int = 1
    measure_periods: int = 2
    duration: float | None = None  # overrides the period counts

    def __post_init__(self) -> None:
        if self.topology not in ("dual", "conventional"):
            raise ValueError(f"unknown topology {self.topology!r}")
        if self.topology == "dual" and self.split is None:
            raise ValueError("dual simulation needs a voltage split")
        if self.dt is None:
            object.__setattr__(self, "dt", 1.0 / (200.0 * self.switching_frequency))
        if self.dt <= 0:
            raise ValueError("dt must be positive")
        if self.duration is None:
            if self.op.electrical_speed <= 0:
                raise ValueError("need explicit duration at zero electrical speed")
            period = 2.0 * math.pi / self.op.electrical_speed
            object.__setattr__(
                self, "duration", (self.settle_periods + self.measure_periods) * period
            )
        if self.op.electrical_speed > 0:
            period = 2.0 * math.pi / self.op.electrical_speed
            if self.duration < 2.0 * period - 1e-12:
                raise ValueError("duration must cover at least two fundamental periods")

    @property
    def fundamental_period(self) -> float:
        if self.op.electrical_speed <= 0:
            return self.duration
        return 2.0 * math.pi / self.op.electrical_speed


def sim_config_for(
    cfg: TopologyConfig,
    fc_power: float,
    electrical_speed: float,
    dt: float | None = None,
    settle_periods: int = 1,
    measure_periods: int = 2,
) -> tuple[SimConfig, PointAnalysis]:
    """Build a simulation run from a topology config at an analyzed point."""
    analysis = analyze_point(cfg, fc_power, electrical_speed)
    if cfg.kind == "dual":
        sim = SimConfig(
            topology="dual",
            op=analysis.op,
            motor=cfg.motor,
            battery_voltage=cfg.battery_voltage,
            switching_frequency=cfg.switching_frequency,
            inverter_module=cfg.inverter_module,
            battery_inverter_module=cfg.second_module,
            split=analysis.split,
            fc_voltage=analysis.fc_voltage,
            dt=dt,
            settle_periods=settle_periods,
            measure_periods=measure_periods,
        )
    else:
        sim = SimConfig(
            topology="conventional",
            op=analysis.op,
            motor=cfg.motor,
            battery_voltage=cfg.battery_voltage,
            switching_frequency=cfg.switching_frequency,
            inverter_module=cfg.inverter_module,
            boost=cfg.boost,
            fc_voltage=analysis.fc_voltage,
            fc_current=cfg.fc_curve.current_at_power(fc_power),
            dt=dt,
            settle_periods=settle_periods,
            measure_periods=measure_periods,
        )
    return sim, analysis


class _Bridge:
    """Three-leg two-level bridge with regular-sampled sinusoidal PWM."""

    def __init__(
        self,
        name: str,
        bus_voltage: float,
        module: PowerModuleParams,
        v_d_ref: float,
        v_q_ref: float,
        omega: float,
        f_sw: float,
        carrier_phase: float,
    ) -> None:
        self.name = name
        self.v_bus = bus_voltage
        self.mod = module
        self.v_d_ref = v_d_ref
        self.v_q_ref = v_q_ref
        self.omega = omega
        self.f_sw = f_sw
        self.carrier_phase = carrier_phase
        self.sample_idx = -1
        self.m = [0.0, 0.0, 0.0]
        self.gates = [False, False, False]
        self.initialized = False
        # accumulators (filled only inside the measured window)
        self.cond_energy = np.zeros((3, 4))  # per leg x state code
        self.sw_energy = np.zeros((3, 2))  # per leg x (igbt, diode)
        self.flip_count = np.zeros(3, dtype=np.int64)
        self.dc_energy = 0.0
        self.sw_debit = 0.0

    def sample_refs(self, t: float) -> None:
        theta = self.omega * t
        for x in range(3):
            th = theta + _PHASE_OFFSETS[x]
            v_ref = self.v_d_ref * math.cos(th) - self.v_q_ref * math.sin(th)
            self.m[x] = 2.0 * v_ref / self.v_bus

    def carrier(self, t: float) -> float:
        frac = (t * self.f_sw + self.carrier_phase) % 1.0
        return 1.0 - 4.0 * abs(frac - 0.5)

    def step_gates(
        self, t: float, currents_out: tuple[float, float, float], measuring: bool
    ) -> None:
        """Resample refs on carrier extrema, update gates, account events."""
        idx = math.floor(2.0 * (t * self.f_sw + self.carrier_phase))
        if idx != self.sample_idx:
            self.sample_idx = idx
            self.sample_refs(t)
        c = self.carrier(t)
        for x in range(3):
            gate = self.m[x] >= c
            if self.initialized and gate != self.gates[x]:
                if measuring:
                    self._account_event(x, gate, currents_out[x])
                    self.flip_count[x] += 1
            self.gates[x] = gate
        self.initialized = True

    def _account_event(self, x: int, gate_on: bool, i_out: float) -> None:
        mag = abs(i_out)
        if mag <= _I_EPS:
            return
        scale = (mag / self.mod.i_nom) * (self.v_bus / self.mod.v_nom)
        if i_out > 0.0:
            # upper IGBT and lower freewheel diode commutate
            if gate_on:
                self.sw_energy[x, 0] += self.mod.e_on * scale
                self.sw_energy[x, 1] += self.mod.e_rec * scale
                self.sw_debit += (self.mod.e_on + self.mod.e_rec) * scale
            else:
                self.sw_energy[x, 0] += self.mod.e_off * scale
                self.sw_debit += self.mod.e_off * scale
        else:
            # lower IGBT and upper freewheel diode commutate
            if gate_on:
                self.sw_energy[x, 0] += self.mod.e_off * scale
                self.sw_debit += self.mod.e_off * scale
            else:
                self.sw_energy[x, 0] += self.mod.e_on * scale
                self.sw_energy[x, 1] += self.mod.e_rec * scale
                self.sw_debit += (self.mod.e_on + self.mod.e_rec) * scale

    def leg_outputs(
        self, currents_out: tuple[float, float, float], dt: float, measuring: bool
    ) -> tuple[list[float], list[float], list[int]]:
        """Effective and ideal leg voltages (about the bus midpoint) plus states."""
        half = 0.5 * self.v_bus
        eff: list[float] = [0.0, 0.0, 0.0]
        ideal: list[float] = [0.0, 0.0, 0.0]
        states: list[int] = [0, 0, 0]
        mod = self.mod
        for x in range(3):
            i = currents_out[x]
            gate = self.gates[x]
            ideal[x] = half if gate else -half
            mag = abs(i)
            if mag <= _I_EPS:
                eff[x] = ideal[x]
                states[x] = STATE_HI_IGBT if gate else STATE_LO_DIODE
                continue
            if gate:
                if i > 0.0:
                    drop = mod.v_ce0 + mod.r_on * mag
                    eff[x] = half - drop
                    states[x] = STATE_HI_IGBT
                else:
                    drop = mod.v_d0 + mod.r_d * mag
                    eff[x] = half + drop
                    states[x] = STATE_HI_DIODE
            else:
                if i > 0.0:
                    drop = mod.v_d0 + mod.r_d * mag
                    eff[x] = -half - drop
                    states[x] = STATE_LO_DIODE
                else:
                    drop = mod.v_ce0 + mod.r_on * mag
                    eff[x] = -half + drop
                    states[x] = STATE_LO_IGBT
            if measuring:
                self.cond_energy[x, states[x]] += drop * mag * dt
        if measuring:
            # the source carries exactly the sum of upper-path leg currents
            supply = sum(currents_out[x] for x in range(3) if self.gates[x])
            self.dc_energy += self.v_bus * supply * dt
        return eff, ideal, states

    def category_energy(self) -> dict[str, float]:
        return {
            "igbt_conduction": float(
                self.cond_energy[:, STATE_HI_IGBT].sum()
                + self.cond_energy[:, STATE_LO_IGBT].sum()
            ),
            "diode_conduction": float(
                self.cond_energy[:, STATE_HI_DIODE].sum()
                + self.cond_energy[:, STATE_LO_DIODE].sum()
            ),
            "igbt_switching": float(self.sw_energy[:, 0].sum()),
            "diode_recovery": float(self.sw_energy[:, 1].sum()),
        }


@dataclass(frozen=True)
class SimWaveforms:
    """Sampled waveforms plus energy accounting of one switched run."""

    config: SimConfig
    times: np.ndarray = field(repr=False)
    phase_voltage: np.ndarray = field(repr=False)  # (n, 3) winding voltage, ideal rails
    phase_current: np.ndarray = field(repr=False)  # (n, 3)
    conduction_state: np.ndarray = field(repr=False)  # (n, legs) int8 codes
    bridge_contributions: dict[str, np.ndarray] = field(repr=False)  # phase a
    measure_start: int = 0
    measure_time: float = 0.0
    converter_energy: dict[str, dict[str, float]] = field(default_factory=dict)
    flip_counts: dict[str, np.ndarray] = field(default_factory=dict)
    copper_energy: float = 0.0
    terminal_energy: float = 0.0
    dc_electrical_energy: float = 0.0
    switching_energy_debit: float = 0.0

    def measured_slice(self) -> slice:
        return slice(self.measure_start, self.times.size)

    def loss_breakdown(self) -> LossBreakdown:
        """Mean loss powers over the measured window, analytical layout."""
        converters = {
            name: ConverterLoss(
                igbt_conduction=cat["igbt_conduction"] / self.measure_time,
                diode_conduction=cat["diode_conduction"] / self.measure_time,
                igbt_switching=cat["igbt_switching"] / self.measure_time,
                diode_recovery=cat["diode_recovery"] / self.measure_time,
                inductor_copper=cat.get("inductor_copper", 0.0) / self.measure_time,
            )
            for name, cat in self.converter_energy.items()
        }
        return LossBreakdown(
            converters=converters, motor_copper=self.copper_energy / self.measure_time
        )

    def fundamental_current_peak(self) -> float:
        """Amplitude of the phase-a current fundamental over the measured window."""
        sl = self.measured_slice()
        t = self.times[sl]
        i = self.phase_current[sl, 0]
        w = self.config.op.electrical_speed
        if w <= 0:
            return float(np.max(np.abs(i)))
        cos_part = 2.0 * np.mean(i * np.cos(w * t))
        sin_part = 2.0 * np.mean(i * np.sin(w * t))
        return float(math.hypot(cos_part, sin_part))

    def bridge_fundamental(self, name: str) -> complex:
        """Fundamental phasor of one bridge's phase-a winding contribution."""
        sl = self.measured_slice()
        t = self.times[sl]
        v = self.bridge_contributions[name][sl]
        w = self.config.op.electrical_speed
        cos_part = 2.0 * np.mean(v * np.cos(w * t))
        sin_part = 2.0 * np.mean(v * np.sin(w * t))
        return complex(cos_part, sin_part)


def run_switched(cfg: SimConfig) -> SimWaveforms:
    """Integrate the switched drive and account losses per device category."""
    if cfg.dt > 1.0 / (100.0 * cfg.switching_frequency) + 1e-18:
        raise UnstableIntegration(
            f"dt={cfg.dt:g} s too coarse for f_sw={cfg.switching_frequency:g} Hz; "
            "keep dt <= 1/(100*f_sw), default is 1/(200*f_sw)"
        )
    dt = cfg.dt
    n = int(round(cfg.duration / dt))
    op = cfg.op
    w = op.electrical_speed
    motor = cfg.motor
    psi_w = motor.flux_linkage * w
    r_s, l_s = motor.resistance, motor.inductance

    if cfg.topology == "dual":
        split = cfg.split
        bridges = [
            _Bridge("fc_inverter", cfg.fc_voltage, cfg.inverter_module,
                    split.v_d_fc, split.v_q_fc, w, cfg.switching_frequency, 0.0),
            _Bridge("battery_inverter", cfg.battery_voltage,
                    cfg.battery_inverter_module or cfg.inverter_module,
                    -split.v_d_bat, -split.v_q_bat, w, cfg.switching_frequency, 0.5),
        ]
    else:
        bridges = [
            _Bridge("traction_inverter", cfg.battery_voltage, cfg.inverter_module,
                    op.v_d, op.v_q, w, cfg.switching_frequency, 0.0),
        ]
    n_legs = 3 * len(bridges)

    # start on the commanded current vector
    i_ph = [
        op.i_d * math.cos(off) - op.i_q * math.sin(off) for off in _PHASE_OFFSETS
    ]
    i_limit = 10.0 * (op.current_peak + 10.0)

    times = np.empty(n)
    v_out = np.empty((n, 3))
    i_out = np.empty((n, 3))
    states_out = np.empty((n, n_legs), dtype=np.int8)
    contrib = {b.name: np.empty(n) for b in bridges}

    settle_time = cfg.settle_periods * cfg.fundamental_period if w > 0 else 0.0
    if cfg.duration <= settle_time:
        settle_time = 0.0
    measure_start = int(round(settle_time / dt))
    copper_energy = 0.0
    terminal_energy = 0.0

    for k in range(n):
        t = k * dt
        measuring = k >= measure_start
        cur = (i_ph[0], i_ph[1], i_ph[2])
        u_eff = [0.0, 0.0, 0.0]
        u_ideal = [0.0, 0.0, 0.0]
        for b_idx, bridge in enumerate(bridges):
            sign = 1.0 if b_idx == 0 else -1.0
            legs_cur = (sign * cur[0], sign * cur[1], sign * cur[2])
            bridge.step_gates(t, legs_cur, measuring)
            eff, ideal, states = bridge.leg_outputs(legs_cur, dt, measuring)
            cm_ideal = (ideal[0] + ideal[1] + ideal[2]) / 3.0
            contrib[bridge.name][k] = ideal[0] - cm_ideal
            for x in range(3):
                u_eff[x] += sign * eff[x]
                u_ideal[x] += sign * ideal[x]
                states_out[k, 3 * b_idx + x] = states[x]
        cm_eff = (u_eff[0] + u_eff[1] + u_eff[2]) / 3.0
        cm_id = (u_ideal[0] + u_ideal[1] + u_ideal[2]) / 3.0

        times[k] = t
        theta = w * t
        p_term = 0.0
        for x in range(3):
            v_eff = u_eff[x] - cm_eff
            v_out[k, x] = u_ideal[x] - cm_id
            i_out[k, x] = cur[x]
            e_x = -psi_w * math.sin(theta + _PHASE_OFFSETS[x])
            p_term += v_eff * cur[x]
            i_ph[x] += dt / l_s * (v_eff - r_s * cur[x] - e_x)
        if measuring:
            terminal_energy += p_term * dt
            copper_energy += r_s * (
                cur[0] * cur[0] + cur[1] * cur[1] + cur[2] * cur[2]
            ) * dt
        if k % 256 == 0 and (
            abs(i_ph[0]) > i_limit or abs(i_ph[1]) > i_limit or abs(i_ph[2]) > i_limit
        ):
            raise UnstableIntegration(
                f"phase current exceeded {i_limit:.0f} A at t={t:g} s; reduce dt"
            )

    measure_time = (n - measure_start) * dt
    converter_energy = {b.name: b.category_energy() for b in bridges}
    flips = {b.name: b.flip_count.copy() for b in bridges}
    dc_energy = sum(b.dc_energy for b in bridges)
    sw_debit = sum(b.sw_debit for b in bridges)

    if cfg.topology == "conventional" and cfg.boost is not None and cfg.fc_current > 0:
        cell = run_boost_cell(
            cfg.fc_current, cfg.fc_voltage, cfg.battery_voltage, cfg.boost, dt=dt
        )
        converter_energy["boost"] = {
            key: value * measure_time
            for key, value in cell.mean_power.items()
        }

    return SimWaveforms(
        config=cfg,
        times=times,
        phase_voltage=v_out,
        phase_current=i_out,
        conduction_state=states_out,
        bridge_contributions=contrib,
        measure_start=measure_start,
        measure_time=measure_time,
        converter_energy=converter_energy,
        flip_counts=flips,
        copper_energy=copper_energy,
        terminal_energy=terminal_energy,
        dc_electrical_energy=dc_energy,
        switching_energy_debit=sw_debit,
    )


@dataclass(frozen=True)
class BoostCellResult:
    """Mean quantities of the switched boost-cell run."""

    mean_power: dict[str, float]  # per loss category, W
    mean_current: float
    ripple_peak_to_peak: float

    @property
    def total_power(self) -> float:
        return sum(self.mean_power.values())


def run_boost_cell(
    i_target: float,
    v_fc: float,
    v_bus: float,
    bp: BoostParams,
    dt: float | None = None,
    settle_periods: int = 40,
    measure_periods: int = 80,
) -> BoostCellResult:
    """Cycle-by-cycle boost cell: PWM-switched inductor with device drops.

    An open-loop duty from the drop-balanced average model plus a slow
    proportional trim holds the inductor current at the target.
    """
    if i_target < 0:
        raise ValueError("target current must be nonnegative")
    mod = bp.module
    f = bp.switching_frequency
    if dt is None:
        dt = 1.0 / (200.0 * f)
    if dt > 1.0 / (100.0 * f) + 1e-18:
        raise UnstableIntegration(
            f"dt={dt:g} s too coarse for the {f:g} Hz boost cell"
        )
    steps_per_period = max(int(round(1.0 / (f * dt))), 2)
    n = (settle_periods + measure_periods) * steps_per_period
    measure_start = settle_periods * steps_per_period

    def balanced_duty(i: float) -> float:
        den = v_bus + mod.v_d0 + mod.r_d * i - mod.v_ce0 - mod.r_on * i
        duty = (v_bus + mod.v_d0 + mod.r_d * i + bp.inductor_esr * i - v_fc) / den
        return min(max(duty, 0.02), 0.98)

    i = i_target
    duty = balanced_duty(i_target)
    energy = {
        "igbt_conduction": 0.0, "diode_conduction": 0.0,
        "igbt_switching": 0.0, "diode_recovery": 0.0, "inductor_copper": 0.0,
    }
    gate_prev = False
    i_sum = 0.0
    i_min, i_max = math.inf, -math.inf
    for k in range(n):
        in_period = k % steps_per_period
        if in_period == 0:
            # feedforward from the drop balance plus a per-period trim strong
            # enough to cancel the duty quantization of the step grid
            duty = balanced_duty(i) + 5.0 * (i_target - i) / v_bus
            duty = min(max(duty, 0.02), 0.98)
        # trailing-edge PWM via triangle compare keeps events grid-aligned
        frac = in_period / steps_per_period
        gate = (2.0 * duty - 1.0) >= (1.0 - 4.0 * abs(frac - 0.5))
        measuring = k >= measure_start
        if gate != gate_prev and measuring and i > _I_EPS:
            scale = (i / mod.i_nom) * (v_bus / mod.v_nom)
            if gate:
                energy["igbt_switching"] += mod.e_on * scale
                energy["diode_recovery"] += mod.e_rec * scale
            else:
                energy["igbt_switching"] += mod.e_off * scale
        gate_prev = gate
        if gate:
            v_device = mod.v_ce0 + mod.r_on * i
            di = dt / bp.inductance * (v_fc - bp.inductor_esr * i - v_device)
            if measuring:
                energy["igbt_conduction"] += v_device * i * dt
        else:
            v_device = mod.v_d0 + mod.r_d * i
            di = dt / bp.inductance * (v_fc - bp.inductor_esr * i - v_bus - v_device)
            if measuring:
                energy["diode_conduction"] += v_device * i * dt
        if measuring:
            energy["inductor_copper"] += bp.inductor_esr * i * i * dt
            i_sum += i * dt
            i_min, i_max = min(i_min, i), max(i_max, i)
        i = max(i + di, 0.0)
        if i > 100.0 * (i_target + 1.0):
            raise UnstableIntegration("boost inductor current diverged; reduce dt")

    t_meas = (n - measure_start) * dt
    return BoostCellResult(
        mean_power={key: value / t_meas for key, value in energy.items()},
        mean_current=i_sum / t_meas,
        ripple_peak_to_peak=(i_max - i_min) if i_max >= i_min else 0.0,
    )


def count_voltage_levels(
    waveforms: SimWaveforms, tolerance_v: float, phase: int = 0
) -> int:
    """Number of distinct plateau values in the winding voltage waveform."""
    sl = waveforms.measured_slice()
    samples = np.sort(waveforms.phase_voltage[sl, phase])
    if samples.size == 0:
        return 0
    gaps = np.diff(samples) > tolerance_v
    return int(gaps.sum()) + 1


_CONDUCTION_KEYS = ("igbt_conduction", "diode_conduction", "inductor_copper")
_SWITCHING_KEYS = ("igbt_switching", "diode_recovery")


@dataclass(frozen=True)
class CategoryDeviation:
    converter: str
    category: str
    simulated: float
    analytical: float
    relative: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return abs(self.relative) <= self.tolerance


@dataclass(frozen=True)
class ComparisonReport:
    deviations: tuple[CategoryDeviation, ...]
    total_simulated: float
    total_analytical: float
    total_tolerance: float

    @property
    def total_relative(self) -> float:
        if self.total_analytical == 0.0:
            return 0.0 if self.total_simulated == 0.0 else math.inf
        return (self.total_simulated - self.total_analytical) / self.total_analytical

    @property
    def passed(self) -> bool:
        return all(d.passed for d in self.deviations) and (
            abs(self.total_relative) <= self.total_tolerance
        )

    def as_dict(self) -> dict:
        return {
            "categories": [
                {
                    "converter": d.converter,
                    "category": d.category,
                    "simulated_w": d.simulated,
                    "analytical_w": d.analytical,
                    "relative_deviation": d.relative,
                    "tolerance": d.tolerance,
                    "passed": d.passed,
                }
                for d in self.deviations
            ],
            "total_simulated_w": self.total_simulated,
            "total_analytical_w": self.total_analytical,
            "total_relative_deviation": self.total_relative,
            "passed": self.passed,
        }


def compare_to_analytical(
    simulated: LossBreakdown,
    analytical: LossBreakdown,
    conduction_tol: float = 0.10,
    switching_tol: float = 0.20,
    total_tol: float = 0.15,
) -> ComparisonReport:
    """Per-category relative deviation of simulated vs analytical losses.

    Categories with negligible analytical value (< 0.1 W) are skipped; the
    motor copper is compared as a conduction category.
    """
    deviations: list[CategoryDeviation] = []

    def add(converter: str, category: str, sim: float, ana: float) -> None:
        if ana < 0.1:
            return
        tol = switching_tol if category in _SWITCHING_KEYS else conduction_tol
        deviations.append(
            CategoryDeviation(
                converter=converter, category=category,
                simulated=sim, analytical=ana,
                relative=(sim - ana) / ana, tolerance=tol,
            )
        )

    for name, ana_conv in analytical.converters.items():
        sim_conv = simulated.converters.get(name, ConverterLoss())
        for key in _CONDUCTION_KEYS + _SWITCHING_KEYS:
            add(name, key, getattr(sim_conv, key), getattr(ana_conv, key))
    add("motor", "motor_copper", simulated.motor_copper, analytical.motor_copper)

    return ComparisonReport(
        deviations=tuple(deviations),
        total_simulated=simulated.total,
        total_analytical=analytical.total,
        total_tolerance=total_tol,
    )


def write_waveform_csv(waveforms: SimWaveforms, path) -> None:
    """Export (t, per-phase winding voltage, per-phase current) samples."""
    with open(path, "w", newline="") as fh:
        fh.write("t_s,v_a,v_b,v_c,i_a,i_b,i_c\n")
        for k in range(waveforms.times.size):
            row = [waveforms.times[k]]
            row += list(waveforms.phase_voltage[k])
            row += list(waveforms.phase_current[k])
            fh.write(",".join(f"{x:.10g}" for x in row) + "\n")
