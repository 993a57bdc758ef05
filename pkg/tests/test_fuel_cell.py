import numpy as np
import pytest
from hypothesis import given, strategies as st

from fcdrive.errors import OutOfRange, Unreachable
from fcdrive.fuel_cell import DEFAULT_CURVE, FuelCellCurve


class TestLinearCurve:
    def test_open_circuit(self):
        assert DEFAULT_CURVE.voltage_at_current(0.0) == 500.0

    def test_rated_region(self):
        assert DEFAULT_CURVE.voltage_at_current(240.0) == pytest.approx(291.2)
        power = 240.0 * DEFAULT_CURVE.voltage_at_current(240.0)
        assert power == pytest.approx(69.9e3, rel=1e-3)

    def test_fifty_kilowatt_point(self):
        i = DEFAULT_CURVE.current_at_power(50e3)
        assert i == pytest.approx(128.9, abs=0.05)
        assert DEFAULT_CURVE.voltage_at_current(i) == pytest.approx(387.8, abs=0.1)

    def test_zero_power(self):
        assert DEFAULT_CURVE.current_at_power(0.0) == 0.0

    def test_rated_power_inverts(self):
        i = DEFAULT_CURVE.current_at_power(DEFAULT_CURVE.rated_power)
        assert i == pytest.approx(DEFAULT_CURVE.max_current, rel=1e-9)

    def test_out_of_range_current(self):
        with pytest.raises(OutOfRange):
            DEFAULT_CURVE.voltage_at_current(DEFAULT_CURVE.max_current + 1.0)
        with pytest.raises(OutOfRange):
            DEFAULT_CURVE.voltage_at_current(-1.0)

    def test_unreachable_power(self):
        with pytest.raises(Unreachable):
            DEFAULT_CURVE.current_at_power(DEFAULT_CURVE.rated_power * 1.01)

    def test_rated_beyond_curve_peak_rejected(self):
        with pytest.raises(ValueError):
            FuelCellCurve.linear(v_oc=500.0, r_int=0.87, rated_power=80e3)

    @given(st.floats(1.0, 70e3))
    def test_round_trip(self, power):
        i = DEFAULT_CURVE.current_at_power(power)
        assert i * DEFAULT_CURVE.voltage_at_current(i) == pytest.approx(
            power, rel=1e-6
        )

    def test_monotonic(self):
        powers = np.linspace(1.0, 70e3, 200)
        currents = [DEFAULT_CURVE.current_at_power(p) for p in powers]
        assert np.all(np.diff(currents) > 0)
        voltages = [DEFAULT_CURVE.voltage_at_current(i) for i in currents]
        assert np.all(np.diff(voltages) < 0)


class TestTableCurve:
    def make_curve(self):
        currents = np.linspace(0.0, 260.0, 27)
        voltages = 500.0 - 0.87 * currents
        return FuelCellCurve.from_table(currents, voltages)

    def test_interpolation_matches_linear(self):
        curve = self.make_curve()
        for i in (0.0, 10.0, 128.9, 200.0):
            assert curve.voltage_at_current(i) == pytest.approx(500.0 - 0.87 * i)

    def test_power_inversion(self):
        curve = self.make_curve()
        i = curve.current_at_power(50e3)
        assert i * curve.voltage_at_current(i) == pytest.approx(50e3, rel=1e-6)

    def test_rejects_non_monotone(self):
        with pytest.raises(ValueError):
            FuelCellCurve.from_table([0.0, 10.0, 5.0], [500.0, 490.0, 480.0])
        with pytest.raises(ValueError):
            FuelCellCurve.from_table([0.0, 10.0, 20.0], [500.0, 510.0, 480.0])

    def test_trims_past_power_knee(self):
        # points past the P(I) maximum are dropped from the usable branch
        currents = np.array([0.0, 100.0, 287.0, 400.0, 560.0])
        voltages = 500.0 - 0.87 * currents
        curve = FuelCellCurve.from_table(currents, voltages)
        assert curve.max_current <= 287.0 + 1e-9

    def test_from_csv(self, tmp_path):
        path = tmp_path / "curve.csv"
        lines = ["# polarization table", "current_A,voltage_V"]
        lines += [f"{i},{500.0 - 0.87 * i}" for i in range(0, 261, 10)]
        path.write_text("\n".join(lines) + "\n")
        curve = FuelCellCurve.from_csv(path)
        assert curve.voltage_at_current(130.0) == pytest.approx(386.9)
        assert curve.current_at_power(50e3) == pytest.approx(128.9, abs=0.1)
