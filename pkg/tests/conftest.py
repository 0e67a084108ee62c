import pytest

import singwave as sw


@pytest.fixture(scope="session")
def default_ev():
    return sw.default_eval()


@pytest.fixture(scope="session")
def curved_ev():
    return sw.RegularizedEval(sw.curved_jump())


@pytest.fixture(scope="session")
def const_ev():
    return sw.RegularizedEval(sw.constant_coefficient(1.0))
