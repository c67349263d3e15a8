import pytest

from cogarch import LevySpec, ParamSet


@pytest.fixture
def params():
    return ParamSet(theta=0.04, eta=0.053, phi=0.04, gamma=0.3)


@pytest.fixture
def levy():
    return LevySpec.compound_poisson(rate=1.0)
