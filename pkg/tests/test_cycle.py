import io
import json

import numpy as np
import pytest

from fcdrive.cycle import (
    CycleResult,
    bundled_cycle,
    check_fc_trace,
    energy_efficiency,
    load_cycle,
    run_cycle,
    write_result_csv,
    write_result_json,
)
from fcdrive.errors import NonMonotonicTime, ParseError, ZeroEnergy
from fcdrive.sharing import SharingPolicy
from fcdrive.topology import conventional_default, dual_inverter_default

MPH = 0.44704


class TestLoadCycle:
    def test_two_line_zero_cycle(self):
        cycle = load_cycle(io.StringIO("time_s,speed_mps\n0,0\n1,0\n"), "zero")
        assert cycle.duration == 1.0
        assert np.all(cycle.speeds == 0.0)

    def test_mph_header_converts(self):
        cycle = load_cycle(io.StringIO("time_s,speed_mph\n0,0\n1,60\n"), "x")
        assert cycle.speeds[1] == pytest.approx(60 * MPH)

    def test_comments_and_blank_lines_skipped(self):
        text = "# provenance\n\ntime_s,speed_mps\n0,0\n# mid comment\n1,5\n"
        cycle = load_cycle(io.StringIO(text), "c")
        assert cycle.speeds[-1] == 5.0

    def test_backwards_time_rejected(self):
        with pytest.raises(NonMonotonicTime):
            load_cycle(io.StringIO("time_s,speed_mps\n0,0\n2,1\n1,2\n"), "bad")

    def test_bad_header(self):
        with pytest.raises(ParseError, match="line 1"):
            load_cycle(io.StringIO("seconds,velocity\n0,0\n"), "bad")

    def test_bad_value_reports_line(self):
        with pytest.raises(ParseError, match="line 3"):
            load_cycle(io.StringIO("time_s,speed_mps\n0,0\nnope,1\n"), "bad")

    def test_negative_speed_reports_line(self):
        with pytest.raises(ParseError, match="line 3"):
            load_cycle(io.StringIO("time_s,speed_mps\n0,0\n1,-2\n"), "bad")

    def test_bundled_hwfet_statistics(self):
        cycle = bundled_cycle("hwfet")
        assert cycle.duration == 765.0
        assert cycle.max_speed_mph == pytest.approx(59.9, abs=0.05)
        assert cycle.speeds[0] == 0.0 and cycle.speeds[-1] == 0.0

    def test_bundled_udds_statistics(self):
        cycle = bundled_cycle("udds")
        assert cycle.duration == 1369.0
        assert cycle.times.size == 1370
        assert cycle.max_speed_mph == pytest.approx(56.7, abs=0.05)

    def test_unknown_bundled_name(self):
        with pytest.raises(FileNotFoundError):
            bundled_cycle("nedc")


class TestRunCycle:
    def test_zero_cycle_flags_zero_energy(self, dual_cfg):
        cycle = load_cycle(
            io.StringIO("time_s,speed_mps\n" + "\n".join(f"{t},0" for t in range(30))),
            "zero",
        )
        result = run_cycle(cycle, dual_cfg)
        assert result.zero_energy
        assert result.energy_efficiency == 1.0
        # the idle floor still circulates fuel-cell power
        assert np.all(result.p_fc >= dual_cfg.policy.fc_min_power * (1 - 1e-9))
        with pytest.raises(ZeroEnergy):
            energy_efficiency(result)

    @pytest.mark.parametrize("kind", ["dual", "conventional"])
    def test_power_bookkeeping_identities(self, kind, dual_cfg, conv_cfg):
        cfg = dual_cfg if kind == "dual" else conv_cfg
        result = run_cycle(bundled_cycle("udds"), cfg)
        scale = np.maximum(np.abs(result.p_dc), 1.0)
        # DC power carries exactly the shaft power plus every loss term
        assert np.all(
            np.abs(result.p_dc - result.p_shaft - result.loss_total) < 1e-9 * scale
        )
        # battery covers whatever the fuel cell does not
        assert np.all(
            np.abs(result.p_bat - (result.p_dc - result.p_fc)) < 1e-9 * scale
        )

    def test_fc_trace_satisfies_policy(self, dual_cfg, conv_cfg):
        for cfg in (dual_cfg, conv_cfg):
            for name in ("udds", "hwfet"):
                result = run_cycle(bundled_cycle(name), cfg)
                assert check_fc_trace(result, cfg).passed

    def test_conventional_boost_active_whenever_fc_flows(self, conv_cfg):
        result = run_cycle(bundled_cycle("udds"), conv_cfg)
        boost = result.loss_converters["boost"]
        assert np.all(boost[result.p_fc > 0] > 0.0)

    def test_dual_beats_conventional_on_both_cycles(self, dual_cfg, conv_cfg):
        for name in ("udds", "hwfet"):
            cycle = bundled_cycle(name)
            eta_dual = run_cycle(cycle, dual_cfg).energy_efficiency
            eta_conv = run_cycle(cycle, conv_cfg).energy_efficiency
            assert eta_dual > eta_conv

    def test_ordering_robust_to_policy_perturbations(self):
        """Dual stays ahead when the sharing constants move +-50%."""
        cycle = bundled_cycle("udds")
        base = SharingPolicy()
        variants = [base]
        for factor in (0.5, 1.5):
            variants.append(
                SharingPolicy(filter_time_constant=base.filter_time_constant * factor)
            )
            variants.append(SharingPolicy(fc_slew_limit=base.fc_slew_limit * factor))
            variants.append(SharingPolicy(fc_min_power=base.fc_min_power * factor))
        for policy in variants:
            eta_dual = run_cycle(
                cycle, dual_inverter_default(policy=policy)
            ).energy_efficiency
            eta_conv = run_cycle(
                cycle, conventional_default(policy=policy)
            ).energy_efficiency
            assert eta_dual > eta_conv

    def test_deterministic_outputs(self, dual_cfg, tmp_path):
        cycle = bundled_cycle("hwfet")
        paths = []
        for tag in ("a", "b"):
            result = run_cycle(cycle, dual_cfg)
            csv_path = tmp_path / f"{tag}.csv"
            json_path = tmp_path / f"{tag}.json"
            write_result_csv(result, csv_path)
            write_result_json(result, json_path)
            paths.append((csv_path.read_bytes(), json_path.read_bytes()))
        assert paths[0] == paths[1]


class TestEnergyEfficiency:
    @staticmethod
    def synthetic_result(p_out, loss_inv, loss_motor, seconds=10):
        t = np.arange(seconds, dtype=float)
        out = np.full(seconds, p_out)
        inv = np.full(seconds, loss_inv)
        motor = np.full(seconds, loss_motor)
        return CycleResult(
            cycle_name="synthetic", topology="dual",
            times=t, speeds=np.zeros(seconds),
            p_shaft=out, p_dc=out + inv + motor, p_fc=np.zeros(seconds),
            p_bat=np.zeros(seconds), loss_motor=motor,
            loss_converters={"fc_inverter": inv},
            output_energy=float(np.trapezoid(out, t)),
            inverter_loss_energy=float(np.trapezoid(inv, t)),
            motor_loss_energy=float(np.trapezoid(motor, t)),
            energy_efficiency=0.0, zero_energy=False,
        )

    def test_lossless_is_unity(self):
        result = self.synthetic_result(10e3, 0.0, 0.0)
        assert energy_efficiency(result) == 1.0

    def test_ten_over_eleven(self):
        result = self.synthetic_result(10e3, 0.6e3, 0.4e3)
        assert energy_efficiency(result) == pytest.approx(10.0 / 11.0, rel=1e-12)

    def test_zero_output_raises(self):
        result = self.synthetic_result(0.0, 1.0, 1.0)
        with pytest.raises(ZeroEnergy):
            energy_efficiency(result)


def test_result_csv_schema(tmp_path, conv_cfg):
    cycle = load_cycle(
        io.StringIO("time_s,speed_mps\n0,0\n1,3\n2,6\n3,6\n4,3\n5,0\n"), "mini"
    )
    result = run_cycle(cycle, conv_cfg)
    csv_path = tmp_path / "r.csv"
    json_path = tmp_path / "r.json"
    write_result_csv(result, csv_path)
    write_result_json(result, json_path)
    lines = csv_path.read_text().splitlines()
    assert lines[0] == (
        "t_s,speed_mps,p_shaft_w,p_dc_w,p_fc_w,p_bat_w,loss_motor_w,"
        "loss_fc_inverter_w,loss_battery_inverter_w,loss_traction_inverter_w,"
        "loss_boost_w,loss_total_w"
    )
    assert len(lines) == 1 + cycle.times.size
    summary = json.loads(json_path.read_text())
    assert summary["topology"] == "conventional"
    assert set(summary["energies_j"]) == {
        "output", "loss_inverter", "loss_motor", "loss_total",
    }
