import pytest

from wakimoto.kappa import point_at_zero, positive_cone
from wakimoto.lattice import OrderScheme
from wakimoto.realization import Realization, RealizationParams
from wakimoto.verify import CheckConfig


@pytest.fixture
def scheme():
    return OrderScheme.uniform(2)


@pytest.fixture
def kappa_origin():
    return point_at_zero(["1", "-1"])


@pytest.fixture
def kappa_cone(scheme):
    return positive_cone(2, {(1, 1): ["1", "-1"]}, scheme)


@pytest.fixture
def params(scheme, kappa_origin):
    return RealizationParams(2, scheme, kappa_origin, lambdas=("1", "2"))


@pytest.fixture
def realization(params):
    return Realization(params)


# Small enough to run every suite in a few seconds
@pytest.fixture
def small_config(params):
    return CheckConfig(params, radius=1, vectors=4, seed=3, instance_limit=12)
