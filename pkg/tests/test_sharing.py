import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fcdrive.errors import BatVoltageLimit, FCVoltageLimit, ZeroCurrent
from fcdrive.motor import OperatingPoint, electrical_power, operating_point
from fcdrive.sharing import (
    SharingPolicy,
    fc_power_reference,
    split_voltage,
    validate_fc_constraints,
    write_reference_csv,
)

POLICY = SharingPolicy()


def reference_shaping(demand, policy, dt):
    """Sample-by-sample reimplementation of the reference recurrence."""
    clamp = lambda x: min(max(x, policy.fc_min_power), policy.fc_max_power)
    alpha = 1.0 - math.exp(-dt / policy.filter_time_constant)
    out = []
    state = max(demand[0], 0.0)
    out.append(clamp(state))
    for u in demand[1:]:
        state += alpha * (max(u, 0.0) - state)
        target = clamp(state)
        step = policy.fc_slew_limit * dt
        out.append(out[-1] + min(max(target - out[-1], -step), step))
    return np.asarray(out)


class TestFcPowerReference:
    def test_constant_demand_converges(self):
        demand = np.full(400, 30e3)
        out = fc_power_reference(demand, POLICY, 0.1)
        # settled within 1% after five time constants
        k5 = int(5 * POLICY.filter_time_constant / 0.1)
        assert abs(out[k5] - 30e3) < 0.01 * 30e3
        assert abs(out[-1] - 30e3) < 0.01 * 30e3

    def test_all_regen_sits_at_floor(self):
        demand = -np.abs(np.linspace(1e3, 40e3, 300))
        out = fc_power_reference(demand, POLICY, 1.0)
        assert np.all(out == POLICY.fc_min_power)

    def test_step_ramps_at_slew_then_tracks_filter(self):
        dt = 0.1
        demand = np.concatenate([[0.0], np.full(1500, 70e3)])
        out = fc_power_reference(demand, POLICY, dt)
        deltas = np.diff(out)
        step = POLICY.fc_slew_limit * dt
        # output sits at the floor until the filter state climbs past it
        start = int(np.argmax(deltas > 0.0))
        assert out[start] == POLICY.fc_min_power
        # then rises at exactly the slew limit while the filter runs ahead
        ramp = deltas[start:]
        ramp_len = int(np.argmax(ramp < step * (1 - 1e-9)))
        assert ramp_len > 50
        assert ramp[:ramp_len] == pytest.approx(step, rel=1e-12)
        # once the filter trajectory is caught the slew no longer binds
        assert np.all(ramp[ramp_len:] <= step * (1 + 1e-12))
        assert out[-1] == pytest.approx(70e3, rel=0.01)

    def test_matches_reference_recurrence(self):
        rng = np.random.default_rng(7)
        demand = rng.uniform(-60e3, 90e3, size=500)
        out = fc_power_reference(demand, POLICY, 1.0)
        expected = reference_shaping(demand, POLICY, 1.0)
        assert out == pytest.approx(expected, rel=1e-12, abs=1e-9)

    def test_nonuniform_steps(self):
        demand = np.array([0.0, 50e3, 50e3, 50e3])
        steps = np.array([0.5, 2.0, 1.0])
        out = fc_power_reference(demand, POLICY, steps)
        assert out[1] - out[0] <= POLICY.fc_slew_limit * 0.5 * (1 + 1e-12)
        assert out[2] - out[1] <= POLICY.fc_slew_limit * 2.0 * (1 + 1e-12)

    @settings(max_examples=60)
    @given(
        st.lists(st.floats(-120e3, 120e3, allow_nan=False), min_size=1, max_size=300)
    )
    def test_output_always_satisfies_constraints(self, demand):
        out = fc_power_reference(demand, POLICY, 1.0)
        report = validate_fc_constraints(out, POLICY, 1.0)
        assert report.passed


class TestValidateConstraints:
    def test_negative_sample_flagged_with_index(self):
        trace = np.array([5e3, 6e3, -1.0, 7e3])
        report = validate_fc_constraints(trace, POLICY, 1.0)
        assert not report.passed
        assert report.negative_indices == (2,)

    def test_slew_violation_by_one_percent(self):
        step = POLICY.fc_slew_limit * 1.01
        trace = np.array([10e3, 10e3 + step])
        report = validate_fc_constraints(trace, POLICY, 1.0)
        assert not report.passed
        assert report.slew_violation_indices == (1,)

    def test_below_floor_flagged(self):
        trace = np.array([POLICY.fc_min_power, POLICY.fc_min_power * 0.5])
        report = validate_fc_constraints(trace, POLICY, 1.0)
        assert not report.passed
        assert report.below_min_indices == (1,)


class TestSplitVoltage:
    def test_zero_reference_gives_battery_everything(self, motor):
        op = operating_point(0.0, 200.0, 1000.0, motor)
        split = split_voltage(op, 0.0, 400.0, 400.0)
        assert (split.v_d_fc, split.v_q_fc) == (0.0, 0.0)
        assert split.v_d_bat == op.v_d and split.v_q_bat == op.v_q
        assert split.realized_fc_power == 0.0

    def test_collinear_split_example(self):
        op = OperatingPoint(
            electrical_speed=1000.0, i_d=0.0, i_q=200.0, v_d=-83.8, v_q=131.5
        )
        split = split_voltage(op, 30e3, 400.0, 400.0)
        assert (split.v_d_fc, split.v_q_fc) == pytest.approx((0.0, 100.0))
        assert (split.v_d_bat, split.v_q_bat) == pytest.approx((-83.8, 31.5))
        assert split.realized_fc_power == pytest.approx(30e3, rel=1e-12)
        # cross-check through the power formula on each sub-vector
        assert electrical_power(split.v_d_fc, split.v_q_fc, 0.0, 200.0) == pytest.approx(30e3)

    def test_full_power_reference_leaves_reactive_remainder(self, motor):
        op = operating_point(0.0, 150.0, 800.0, motor)
        total = electrical_power(op.v_d, op.v_q, op.i_d, op.i_q)
        split = split_voltage(op, total, 500.0, 400.0)
        # battery keeps only the voltage component orthogonal to the current
        dot = split.v_d_bat * op.i_d + split.v_q_bat * op.i_q
        assert dot == pytest.approx(0.0, abs=1e-6)
        assert split.realized_battery_power == pytest.approx(0.0, abs=1e-6)

    def test_zero_current_rejected(self, motor):
        op = operating_point(0.0, 0.0, 0.0, motor)
        with pytest.raises(ZeroCurrent):
            split_voltage(op, 5e3, 400.0, 400.0)

    def test_fc_voltage_limit(self, motor):
        op = operating_point(0.0, 50.0, 1000.0, motor)
        with pytest.raises(FCVoltageLimit):
            split_voltage(op, 40e3, 300.0, 400.0)

    def test_battery_voltage_limit(self, motor):
        op = operating_point(0.0, 300.0, 2200.0, motor)  # large reactive drop
        with pytest.raises(BatVoltageLimit):
            split_voltage(op, 10e3, 500.0, 100.0)

    @settings(max_examples=80)
    @given(
        i_d=st.floats(-300.0, 0.0),
        i_q=st.floats(-350.0, 350.0),
        omega=st.floats(100.0, 3000.0),
        frac=st.floats(0.0, 1.0),
    )
    def test_reconstruction_and_realized_power(self, motor, i_d, i_q, omega, frac):
        op = operating_point(i_d, i_q, omega, motor)
        i_pk = op.current_peak
        if i_pk < 1.0:
            return
        # keep the request inside both inverter capabilities
        p_max_fc = 1.5 * i_pk * (500.0 / 2.0)
        p_ref = frac * 0.9 * p_max_fc
        try:
            split = split_voltage(op, p_ref, 500.0, 2000.0)
        except BatVoltageLimit:
            return
        scale = max(op.voltage_peak, 1.0)
        assert abs(split.v_d_fc + split.v_d_bat - op.v_d) < 1e-12 * scale
        assert abs(split.v_q_fc + split.v_q_bat - op.v_q) < 1e-12 * scale
        assert split.realized_fc_power == pytest.approx(p_ref, rel=1e-9, abs=1e-9)
        total = electrical_power(op.v_d, op.v_q, op.i_d, op.i_q)
        assert split.realized_fc_power + split.realized_battery_power == pytest.approx(
            total, rel=1e-9, abs=1e-6
        )


def test_reference_csv_export(tmp_path):
    path = tmp_path / "split.csv"
    write_reference_csv(path, [0.0, 1.0], [3.5e3, 4.0e3], [-1e3, 2e3])
    lines = path.read_text().splitlines()
    assert lines[0] == "t_s,p_fc_w,p_bat_w"
    assert lines[1] == "0,3500,-1000"


def test_policy_validation():
    with pytest.raises(ValueError):
        SharingPolicy(filter_time_constant=-1.0)
    with pytest.raises(ValueError):
        SharingPolicy(fc_min_power=80e3, fc_max_power=70e3)
