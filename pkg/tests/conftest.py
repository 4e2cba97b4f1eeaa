import pytest

from classes.instance_class import (
    build_extreals_oracle,
    build_linf_truncated,
    build_pareto_identity,
    build_r2_minty_gap,
)
from tests.strategies import ORTHANT2


@pytest.fixture
def orthant2():
    return ORTHANT2


@pytest.fixture
def r2():
    return build_r2_minty_gap()


@pytest.fixture
def pareto():
    return build_pareto_identity()


@pytest.fixture
def extreals_instance():
    return build_extreals_oracle()


@pytest.fixture
def linf3():
    return build_linf_truncated(3)
