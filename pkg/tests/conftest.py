import numpy as np
import pytest

from cstardyn.core import System, cyclic_group, cyclic_shift_action, trivial_action


@pytest.fixture
def rng():
    return np.random.default_rng(42)


@pytest.fixture
def z2_trivial():
    return System(trivial_action(cyclic_group(2), 2))


@pytest.fixture
def z2_flip():
    return System(cyclic_shift_action(2))


@pytest.fixture
def z3_cycle():
    return System(cyclic_shift_action(3))
