import pytest
from hypothesis import settings

settings.register_profile("ribetjac", max_examples=60, deadline=None)
settings.load_profile("ribetjac")

import ribetjac as rj


@pytest.fixture(scope="session")
def f13():
    return rj.parse_field("13")


@pytest.fixture(scope="session")
def f13_2():
    return rj.parse_field("13^2:2,0,1")


@pytest.fixture(scope="session")
def curve13(f13):
    """y^2 = x^3 + x over F_13; 20 points, CM by Z[i] with i = 5."""
    return rj.parse_curve("1,0", f13)


@pytest.fixture(scope="session")
def curve13_4():
    """Same curve over F_13^4, where E[3], E[5], E[15] are all rational."""
    return rj.parse_curve("1,0", rj.FieldSpec(13, 4))


@pytest.fixture(scope="session")
def gauss13(curve13):
    return rj.CMStructure(curve13, rj.GAUSSIAN)


@pytest.fixture(scope="session")
def gauss13_4(curve13_4):
    return rj.CMStructure(curve13_4, rj.GAUSSIAN)


@pytest.fixture(scope="session")
def eis13(f13):
    """y^2 = x^3 + 1 over F_13 with zeta = 3."""
    curve = rj.parse_curve("0,1", f13)
    return rj.CMStructure(curve, rj.EISENSTEIN)


@pytest.fixture(scope="session")
def cfg13(gauss13):
    return rj.RibetConfig(gauss13, rj.Endo(0, 1, rj.GAUSSIAN))


@pytest.fixture(scope="session")
def cfg13_4(gauss13_4):
    return rj.RibetConfig(gauss13_4, rj.Endo(0, 1, rj.GAUSSIAN))
