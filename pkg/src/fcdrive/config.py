"""Configuration loading: flat key/value files and a sectioned INI overlay.

Parameter files use the same symbols as the tabulated values they carry:
motor files use p, L_s, R_s, psi_m; vehicle files use M_car, A_f, C_d, C_r,
gear_ratio, r_tire. A single INI file can override any group at once and is
what the CLI's --config flag consumes; every section and key is optional.
"""

from __future__ import annotations

import configparser
from pathlib import Path
from typing import Mapping

from .errors import ConfigError
from .fuel_cell import FuelCellCurve
from .losses import MODULES, BoostParams, load_module_table
from .motor import EnvironmentConstants, MotorParams
from .sharing import SharingPolicy
from .topology import TopologyConfig, conventional_default, dual_inverter_default
from .vehicle import VehicleParams


def parse_kv(path) -> dict[str, str]:
    """Read a flat 'key = value' file; '#' starts a comment."""
    values: dict[str, str] = {}
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"config file not found: {path}")
    for lineno, raw in enumerate(path.read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}: line {lineno}: expected 'key = value'")
        key, _, value = line.partition("=")
        values[key.strip()] = value.strip()
    return values


def load_motor_params(path) -> MotorParams:
    """Motor parameters from a flat file keyed p, L_s, R_s, psi_m."""
    try:
        return MotorParams.from_mapping(parse_kv(path))
    except (KeyError, ValueError) as err:
        raise ConfigError(f"{path}: {err}") from err


def load_vehicle_params(path) -> VehicleParams:
    """Vehicle parameters from a flat file keyed M_car, A_f, C_d, C_r, gear_ratio, r_tire."""
    try:
        return VehicleParams.from_mapping(parse_kv(path))
    except (KeyError, ValueError) as err:
        raise ConfigError(f"{path}: {err}") from err


def load_sharing_policy(path) -> SharingPolicy:
    """Power-sharing policy from a flat file keyed tau, P_min, P_max, slew."""
    values = parse_kv(path)
    try:
        return _policy_from_mapping(values)
    except (KeyError, ValueError) as err:
        raise ConfigError(f"{path}: {err}") from err


def _policy_from_mapping(values: Mapping[str, str]) -> SharingPolicy:
    defaults = SharingPolicy()
    return SharingPolicy(
        filter_time_constant=float(values.get("tau", defaults.filter_time_constant)),
        fc_min_power=float(values.get("P_min", defaults.fc_min_power)),
        fc_max_power=float(values.get("P_max", defaults.fc_max_power)),
        fc_slew_limit=float(values.get("slew", defaults.fc_slew_limit)),
    )


def _motor_from_section(sec: Mapping[str, str], base: MotorParams) -> MotorParams:
    return MotorParams(
        pole_pairs=int(float(sec.get("p", base.pole_pairs))),
        inductance=float(sec.get("L_s", base.inductance)),
        resistance=float(sec.get("R_s", base.resistance)),
        flux_linkage=float(sec.get("psi_m", base.flux_linkage)),
    )


def _vehicle_from_section(sec: Mapping[str, str], base: VehicleParams) -> VehicleParams:
    return VehicleParams(
        mass=float(sec.get("M_car", base.mass)),
        frontal_area=float(sec.get("A_f", base.frontal_area)),
        drag_coefficient=float(sec.get("C_d", base.drag_coefficient)),
        rolling_coefficient=float(sec.get("C_r", base.rolling_coefficient)),
        gear_ratio=float(sec.get("gear_ratio", base.gear_ratio)),
        tire_radius=float(sec.get("r_tire", base.tire_radius)),
    )


def _curve_from_section(sec: Mapping[str, str], base_dir: Path) -> FuelCellCurve:
    if "table" in sec:
        table_path = Path(sec["table"])
        if not table_path.is_absolute():
            table_path = base_dir / table_path
        rated = float(sec["rated_power"]) if "rated_power" in sec else None
        return FuelCellCurve.from_csv(table_path, rated)
    return FuelCellCurve.linear(
        v_oc=float(sec.get("V_oc", 500.0)),
        r_int=float(sec.get("R_int", 0.87)),
        rated_power=float(sec.get("rated_power", 70e3)),
    )


def build_topology_configs(config_path=None) -> dict[str, TopologyConfig]:
    """Shipped defaults, optionally overridden by an INI file.

    Recognized sections: [motor], [vehicle], [environment], [sharing],
    [fuel_cell], [modules], [dual], [conventional].
    """
    dual = dual_inverter_default()
    conv = conventional_default()
    if config_path is None:
        return {"dual": dual, "conventional": conv}

    path = Path(config_path)
    if not path.is_file():
        raise ConfigError(f"config file not found: {path}")
    parser = configparser.ConfigParser()
    try:
        parser.read(path)
    except configparser.Error as err:
        raise ConfigError(f"{path}: {err}") from err

    try:
        modules = dict(MODULES)
        if parser.has_section("modules") and parser.has_option("modules", "table"):
            table_path = Path(parser.get("modules", "table"))
            if not table_path.is_absolute():
                table_path = path.parent / table_path
            modules.update(load_module_table(table_path))

        motor = _motor_from_section(
            parser["motor"] if parser.has_section("motor") else {}, dual.motor
        )
        vehicle = _vehicle_from_section(
            parser["vehicle"] if parser.has_section("vehicle") else {}, dual.vehicle
        )
        env = EnvironmentConstants(
            air_density=float(parser.get("environment", "rho_air", fallback=1.225)),
            gravity=float(parser.get("environment", "g", fallback=9.81)),
        )
        policy = _policy_from_mapping(
            parser["sharing"] if parser.has_section("sharing") else {}
        )
        curve = _curve_from_section(
            parser["fuel_cell"] if parser.has_section("fuel_cell") else {}, path.parent
        )

        d_sec = parser["dual"] if parser.has_section("dual") else {}
        dual = dual_inverter_default(
            battery_voltage=float(d_sec.get("battery_voltage", 400.0)),
            switching_frequency=float(d_sec.get("switching_frequency", 10e3)),
            inverter_module=modules[d_sec.get("inverter_module", "FS400R07A3E3")],
            battery_inverter_module=modules[
                d_sec.get("battery_inverter_module", "FS400R07A3E3")
            ],
            motor=motor, vehicle=vehicle, env=env, policy=policy, fc_curve=curve,
            m_max=float(d_sec.get("m_max", 1.0)),
        )
        c_sec = parser["conventional"] if parser.has_section("conventional") else {}
        boost = BoostParams(
            inductance=float(c_sec.get("boost_inductance", 0.3e-3)),
            inductor_esr=float(c_sec.get("boost_esr", 1.2e-3)),
            switching_frequency=float(c_sec.get("boost_switching_frequency", 20e3)),
            module=modules[c_sec.get("boost_module", "FF450R12KT4P")],
        )
        conv = conventional_default(
            battery_voltage=float(c_sec.get("battery_voltage", 800.0)),
            switching_frequency=float(c_sec.get("switching_frequency", 20e3)),
            inverter_module=modules[c_sec.get("inverter_module", "FS400R12A2T4")],
            boost=boost,
            motor=motor, vehicle=vehicle, env=env, policy=policy, fc_curve=curve,
            m_max=float(c_sec.get("m_max", 1.0)),
        )
    except (KeyError, ValueError) as err:
        raise ConfigError(f"{path}: {err}") from err
    return {"dual": dual, "conventional": conv}
