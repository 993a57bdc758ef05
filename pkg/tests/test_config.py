import pytest

from fcdrive.config import (
    build_topology_configs,
    load_motor_params,
    load_sharing_policy,
    load_vehicle_params,
    parse_kv,
)
from fcdrive.errors import ConfigError


def test_parse_kv(tmp_path):
    path = tmp_path / "motor.cfg"
    path.write_text("# motor\np = 5\nL_s = 0.838e-3  # inline comment\nR_s=0.045\npsi_m = 0.127\n")
    values = parse_kv(path)
    assert values == {"p": "5", "L_s": "0.838e-3", "R_s": "0.045", "psi_m": "0.127"}


def test_parse_kv_missing_file(tmp_path):
    with pytest.raises(ConfigError, match="not found"):
        parse_kv(tmp_path / "nope.cfg")


def test_parse_kv_bad_line(tmp_path):
    path = tmp_path / "bad.cfg"
    path.write_text("just a token\n")
    with pytest.raises(ConfigError, match="line 1"):
        parse_kv(path)


def test_load_motor_params(tmp_path):
    path = tmp_path / "motor.cfg"
    path.write_text("p = 5\nL_s = 0.838e-3\nR_s = 0.045\npsi_m = 0.127\n")
    params = load_motor_params(path)
    assert params.pole_pairs == 5
    assert params.flux_linkage == pytest.approx(0.127)


def test_load_motor_params_missing_key(tmp_path):
    path = tmp_path / "motor.cfg"
    path.write_text("p = 5\n")
    with pytest.raises(ConfigError):
        load_motor_params(path)


def test_load_vehicle_params(tmp_path):
    path = tmp_path / "vehicle.cfg"
    path.write_text(
        "M_car = 1642.9\nA_f = 2.1\nC_d = 0.32\nC_r = 0.024\n"
        "gear_ratio = 7.82\nr_tire = 0.3289\n"
    )
    vp = load_vehicle_params(path)
    assert vp.mass == pytest.approx(1642.9)


def test_load_sharing_policy_defaults_fill_in(tmp_path):
    path = tmp_path / "sharing.cfg"
    path.write_text("tau = 8\n")
    policy = load_sharing_policy(path)
    assert policy.filter_time_constant == 8.0
    assert policy.fc_min_power == pytest.approx(3.5e3)


def test_default_configs_without_file():
    configs = build_topology_configs(None)
    assert configs["dual"].battery_voltage == 400.0
    assert configs["dual"].switching_frequency == 10e3
    assert configs["conventional"].battery_voltage == 800.0
    assert configs["conventional"].switching_frequency == 20e3
    assert configs["conventional"].boost.module.label == "FF450R12KT4P"


def test_ini_overrides(tmp_path):
    path = tmp_path / "override.ini"
    path.write_text(
        "[motor]\np = 4\n\n[vehicle]\nM_car = 1500\n\n"
        "[sharing]\ntau = 10\nP_min = 2000\n\n"
        "[fuel_cell]\nV_oc = 480\nR_int = 0.8\nrated_power = 65e3\n\n"
        "[dual]\nswitching_frequency = 12e3\n\n"
        "[conventional]\nboost_inductance = 0.4e-3\n"
    )
    configs = build_topology_configs(path)
    dual = configs["dual"]
    assert dual.motor.pole_pairs == 4
    assert dual.vehicle.mass == 1500.0
    assert dual.policy.filter_time_constant == 10.0
    assert dual.policy.fc_min_power == 2000.0
    assert dual.fc_curve.v_oc == 480.0
    assert dual.switching_frequency == 12e3
    conv = configs["conventional"]
    assert conv.boost.inductance == pytest.approx(0.4e-3)
    assert conv.motor.pole_pairs == 4


def test_ini_fuel_cell_table(tmp_path):
    table = tmp_path / "curve.csv"
    table.write_text(
        "current_A,voltage_V\n" + "\n".join(f"{i},{500 - 0.9 * i}" for i in range(0, 251, 10))
    )
    ini = tmp_path / "cfg.ini"
    ini.write_text("[fuel_cell]\ntable = curve.csv\n")
    configs = build_topology_configs(ini)
    assert not configs["dual"].fc_curve.is_linear
    assert configs["dual"].fc_curve.voltage_at_current(100.0) == pytest.approx(410.0)


def test_missing_ini_rejected(tmp_path):
    with pytest.raises(ConfigError, match="not found"):
        build_topology_configs(tmp_path / "absent.ini")
