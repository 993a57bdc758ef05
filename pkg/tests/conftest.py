import pytest

from fcdrive.losses import MODULES
from fcdrive.motor import MotorParams
from fcdrive.topology import conventional_default, dual_inverter_default


@pytest.fixture(scope="session")
def motor():
    return MotorParams(pole_pairs=5, inductance=0.838e-3, resistance=45e-3,
                       flux_linkage=0.127)


@pytest.fixture(scope="session")
def dual_cfg():
    return dual_inverter_default()


@pytest.fixture(scope="session")
def conv_cfg():
    return conventional_default()


@pytest.fixture(scope="session")
def dual_module():
    return MODULES["FS400R07A3E3"]
