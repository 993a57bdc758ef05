"""Exception types shared across the toolkit."""


class DrivetrainError(Exception):
    """Base class for all computation errors raised by fcdrive."""


class ConfigError(DrivetrainError):
    """Bad or missing configuration input (maps to CLI exit code 2)."""


class Infeasible(DrivetrainError):
    """No operating point satisfies the voltage limit and current ceiling."""


class ZeroSpeedPower(DrivetrainError):
    """Nonzero shaft power requested at zero electrical speed."""


class DomainError(DrivetrainError):
    """Inputs outside the validity region of an analytical formula."""


class FCVoltageLimit(DrivetrainError):
    """Fuel-cell inverter voltage demand exceeds its PWM capability."""


class BatVoltageLimit(DrivetrainError):
    """Battery inverter voltage demand exceeds its PWM capability."""


class ZeroCurrent(DrivetrainError):
    """Fuel-cell power requested with no phase current to carry it."""


class OutOfRange(DrivetrainError):
    """Fuel-cell current outside the modelled polarization curve."""


class Unreachable(DrivetrainError):
    """Requested fuel-cell power exceeds the curve maximum."""


class ParseError(ConfigError):
    """Malformed input file; message carries the offending line number."""


class NonMonotonicTime(ConfigError):
    """Drive-cycle timestamps are not strictly increasing."""


class ZeroEnergy(DrivetrainError):
    """Efficiency requested for a run with no output energy."""


class UnstableIntegration(DrivetrainError):
    """Switched-simulation currents diverged; reduce the time step."""
