import math

import numpy as np
import pytest

from fcdrive.errors import UnstableIntegration
from fcdrive.losses import BoostParams, ConverterLoss, LossBreakdown
from fcdrive.motor import OperatingPoint
from fcdrive.switched import (
    SimConfig,
    compare_to_analytical,
    count_voltage_levels,
    run_boost_cell,
    run_switched,
    sim_config_for,
)
from fcdrive.topology import DEFAULT_VALIDATION_SPEED

FC_POWER = 50e3


@pytest.fixture(scope="module")
def dual_run(dual_cfg):
    sim, analysis = sim_config_for(dual_cfg, FC_POWER, DEFAULT_VALIDATION_SPEED)
    return run_switched(sim), analysis


@pytest.fixture(scope="module")
def conventional_run(conv_cfg):
    sim, analysis = sim_config_for(conv_cfg, FC_POWER, DEFAULT_VALIDATION_SPEED)
    return run_switched(sim), analysis


def test_zero_modulation_currents_decay(dual_cfg):
    op = OperatingPoint(electrical_speed=0.0, i_d=80.0, i_q=0.0, v_d=0.0, v_q=0.0)
    sim = SimConfig(
        topology="conventional", op=op, motor=dual_cfg.motor,
        battery_voltage=400.0, switching_frequency=10e3,
        inverter_module=dual_cfg.inverter_module,
        dt=1.0 / (100.0 * 10e3), duration=0.06,
    )
    waveforms = run_switched(sim)
    assert abs(waveforms.phase_current[-1]).max() < 1.0
    # once the current is gone nothing conducts
    tail = np.abs(waveforms.phase_current[-2000:]).max()
    assert tail < 1.0


def test_too_coarse_dt_rejected(dual_cfg):
    op = OperatingPoint(0.0, 10.0, 0.0, 0.0, 0.0)
    sim = SimConfig(
        topology="conventional", op=op, motor=dual_cfg.motor,
        battery_voltage=400.0, switching_frequency=10e3,
        inverter_module=dual_cfg.inverter_module,
        dt=1.0 / (50.0 * 10e3), duration=0.02,
    )
    with pytest.raises(UnstableIntegration, match="too coarse"):
        run_switched(sim)


class TestVoltageLevels:
    def test_conventional_has_five(self, conventional_run):
        waveforms, _ = conventional_run
        assert count_voltage_levels(waveforms, 25.0) == 5

    def test_dual_has_nine_with_unequal_buses(self, dual_run, dual_cfg):
        waveforms, analysis = dual_run
        assert analysis.fc_voltage != dual_cfg.battery_voltage
        levels = count_voltage_levels(waveforms, 25.0)
        assert levels >= 7
        assert levels == 9

    def test_dc_waveform_single_level(self, dual_cfg):
        from dataclasses import replace

        op = OperatingPoint(0.0, 10.0, 0.0, 0.0, 0.0)
        sim = SimConfig(
            topology="conventional", op=op, motor=dual_cfg.motor,
            battery_voltage=400.0, switching_frequency=10e3,
            inverter_module=dual_cfg.inverter_module,
            dt=1e-5, duration=0.01,
        )
        waveforms = run_switched(sim)
        flat = replace(waveforms, phase_voltage=np.full_like(waveforms.phase_voltage, 42.0))
        assert count_voltage_levels(flat, 1.0) == 1


class TestAgainstAnalytical:
    def test_conventional_within_tolerances(self, conventional_run):
        waveforms, analysis = conventional_run
        report = compare_to_analytical(waveforms.loss_breakdown(), analysis.breakdown)
        assert report.passed, report.as_dict()

    def test_dual_within_tolerances(self, dual_run):
        waveforms, analysis = dual_run
        report = compare_to_analytical(waveforms.loss_breakdown(), analysis.breakdown)
        assert report.passed, report.as_dict()

    def test_identical_breakdowns_zero_deviation(self):
        breakdown = LossBreakdown(
            converters={"x": ConverterLoss(igbt_conduction=10.0, igbt_switching=3.0)},
            motor_copper=5.0,
        )
        report = compare_to_analytical(breakdown, breakdown)
        assert report.passed
        assert all(d.relative == 0.0 for d in report.deviations)
        assert report.total_relative == 0.0


class TestWaveformPhysics:
    def test_fundamental_current_matches_command(self, dual_run, conventional_run):
        for waveforms, analysis in (dual_run, conventional_run):
            amplitude = waveforms.fundamental_current_peak()
            assert amplitude == pytest.approx(analysis.op.current_peak, rel=0.05)

    def test_switching_event_counts(self, conventional_run):
        """Each leg commutates about once per carrier period."""
        waveforms, _ = conventional_run
        cfg = waveforms.config
        fundamentals = waveforms.measure_time / cfg.fundamental_period
        expected = cfg.switching_frequency * cfg.fundamental_period
        for flips in waveforms.flip_counts["traction_inverter"]:
            pairs_per_fundamental = flips / 2.0 / fundamentals
            assert abs(pairs_per_fundamental - expected) <= 1.0

    def test_energy_conservation(self, dual_run, conventional_run):
        """Bus energy equals winding energy plus conduction dissipation."""
        for waveforms, _ in (dual_run, conventional_run):
            conduction = sum(
                cat["igbt_conduction"] + cat["diode_conduction"]
                for name, cat in waveforms.converter_energy.items()
                if name != "boost"
            )
            sl = waveforms.measured_slice()
            i = waveforms.phase_current
            l_s = waveforms.config.motor.inductance
            stored = 0.5 * l_s * float(
                np.sum(i[sl.stop - 1] ** 2) - np.sum(i[sl.start] ** 2)
            )
            lhs = waveforms.dc_electrical_energy
            rhs = waveforms.terminal_energy + conduction + stored
            assert lhs == pytest.approx(rhs, rel=0.01)

    def test_dual_composition_matches_commanded_vectors(self, dual_run):
        """Fundamental of each bridge's contribution reproduces its assignment."""
        waveforms, analysis = dual_run
        split = analysis.split
        fund_fc = waveforms.bridge_fundamental("fc_inverter")
        fund_bat = waveforms.bridge_fundamental("battery_inverter")
        scale = max(analysis.op.voltage_peak, 1.0)
        # v_a(t) = v_d cos(wt) - v_q sin(wt) maps to phasor (v_d, -v_q)
        assert fund_fc.real == pytest.approx(split.v_d_fc, abs=0.03 * scale)
        assert -fund_fc.imag == pytest.approx(split.v_q_fc, abs=0.03 * scale)
        # battery bridge modulates in antiphase
        assert -fund_bat.real == pytest.approx(split.v_d_bat, abs=0.03 * scale)
        assert fund_bat.imag == pytest.approx(split.v_q_bat, abs=0.03 * scale)
        combined = complex(
            fund_fc.real - fund_bat.real, fund_fc.imag - fund_bat.imag
        )
        assert combined.real == pytest.approx(analysis.op.v_d, abs=0.03 * scale)
        assert -combined.imag == pytest.approx(analysis.op.v_q, abs=0.03 * scale)

    def test_step_halving_changes_losses_little(self, conv_cfg):
        sims = []
        for divisor in (200.0, 400.0):
            sim, _ = sim_config_for(
                conv_cfg, FC_POWER, DEFAULT_VALIDATION_SPEED,
                dt=1.0 / (divisor * conv_cfg.switching_frequency),
            )
            sims.append(run_switched(sim).loss_breakdown().total)
        coarse, fine = sims
        assert abs(fine - coarse) / coarse < 0.02


class TestBoostCell:
    def test_holds_commanded_current(self):
        cell = run_boost_cell(128.9, 387.8, 800.0, BoostParams())
        assert cell.mean_current == pytest.approx(128.9, rel=0.02)
        # inductor sized for roughly 10-25% ripple at this operating point
        assert 0.0 < cell.ripple_peak_to_peak < 0.4 * 128.9

    def test_zero_current(self):
        cell = run_boost_cell(0.0, 400.0, 800.0, BoostParams())
        assert cell.total_power == pytest.approx(0.0, abs=1e-9)

    def test_coarse_dt_rejected(self):
        with pytest.raises(UnstableIntegration):
            run_boost_cell(100.0, 400.0, 800.0, BoostParams(), dt=1e-3)


def test_sim_config_validation(dual_cfg):
    op = OperatingPoint(1000.0, 0.0, 100.0, -83.8, 131.5)
    with pytest.raises(ValueError, match="two fundamental periods"):
        SimConfig(
            topology="conventional", op=op, motor=dual_cfg.motor,
            battery_voltage=400.0, switching_frequency=10e3,
            inverter_module=dual_cfg.inverter_module,
            duration=0.5 * 2 * math.pi / 1000.0,
        )
    with pytest.raises(ValueError, match="voltage split"):
        SimConfig(
            topology="dual", op=op, motor=dual_cfg.motor,
            battery_voltage=400.0, switching_frequency=10e3,
            inverter_module=dual_cfg.inverter_module,
        )
