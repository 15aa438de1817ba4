import pytest
from hypothesis import HealthCheck, settings

from toric_dioph.corpus import corpus, hirzebruch, projective_space, s6, s7
from toric_dioph.fan import Fan

settings.register_profile(
    "default", max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


@pytest.fixture(scope="session")
def P2():
    return projective_space(2)


@pytest.fixture(scope="session")
def S7():
    return s7()


@pytest.fixture(scope="session")
def S6():
    return s6()


@pytest.fixture(scope="session")
def F1():
    return hirzebruch(1)


@pytest.fixture(scope="session")
def F1_literal():
    """F1 with rays e1, e2, -e1, e1 - e2."""
    return Fan(2, [[1, 0], [0, 1], [-1, 0], [1, -1]], [[0, 1], [1, 2], [2, 3], [3, 0]])


@pytest.fixture(scope="session")
def P2_literal():
    """P2 with rays (1,0), (0,1), (-1,-1) in that order."""
    return Fan(2, [[1, 0], [0, 1], [-1, -1]], [[0, 1], [1, 2], [2, 0]])


@pytest.fixture(scope="session")
def all_fans():
    return corpus()
