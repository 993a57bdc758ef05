"""Drivetrain loss analysis for fuel-cell EVs.

Compares a conventional boosted integration (fuel cell -> boost converter ->
800 V bus -> traction inverter) against a dual-inverter open-end-winding
integration (fuel-cell inverter + battery inverter feeding the two winding
ends): analytical device-loss models, fuel-cell power sharing, drive-cycle
energy efficiency, and a switched-waveform simulator for cross-validation.
"""

from .errors import (
    BatVoltageLimit,
    ConfigError,
    DomainError,
    DrivetrainError,
    FCVoltageLimit,
    Infeasible,
    NonMonotonicTime,
    OutOfRange,
    ParseError,
    Unreachable,
    UnstableIntegration,
    ZeroCurrent,
    ZeroEnergy,
    ZeroSpeedPower,
)
from .fuel_cell import DEFAULT_CURVE, FuelCellCurve
from .losses import (
    MODULES,
    BoostParams,
    ConverterLoss,
    InverterConditions,
    LossBreakdown,
    PowerModuleParams,
    boost_converter_loss,
    combine,
    conduction_loss_oracle,
    conduction_losses,
    inverter_loss,
    load_module_table,
    switching_losses,
)
from .motor import (
    EnvironmentConstants,
    MotorParams,
    OperatingPoint,
    electrical_power,
    motor_copper_loss,
    solve_operating_point,
    steady_state_voltages,
)
from .sharing import (
    FcConstraintReport,
    PowerSplit,
    SharingPolicy,
    fc_power_reference,
    split_voltage,
    validate_fc_constraints,
)
from .vehicle import VehicleParams, acceleration_from_trace, mech_power, motor_shaft_speed
from .topology import (
    DEFAULT_VALIDATION_SPEED,
    PointAnalysis,
    TopologyConfig,
    analyze_point,
    conventional_default,
    dual_inverter_default,
    loss_ratio,
    solve_dual_point,
)
from .cycle import (
    CycleResult,
    DriveCycle,
    bundled_cycle,
    energy_efficiency,
    load_cycle,
    run_cycle,
)
from .switched import (
    SimConfig,
    SimWaveforms,
    compare_to_analytical,
    count_voltage_levels,
    run_boost_cell,
    run_switched,
    sim_config_for,
)

__version__ = "0.1.0"
