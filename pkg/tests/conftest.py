import pytest

from coopsynt import derive_combination, enumerate_levels
from coopsynt.fixtures import running_example, trigger_ack
from coopsynt.hierarchy import BaseProp


def make_bases(a, g, with_or=False):
    bases = {
        BaseProp.A: a,
        BaseProp.G: g,
        BaseProp.IMPLIES: derive_combination(a, g, "implies"),
        BaseProp.AND: derive_combination(a, g, "and"),
    }
    if with_or:
        bases[BaseProp.OR] = derive_combination(a, g, "or")
    return bases


@pytest.fixture(scope="session")
def base_lattice():
    return enumerate_levels("base")


@pytest.fixture(scope="session")
def running():
    return running_example()


@pytest.fixture(scope="session")
def running_bases(running):
    return make_bases(*running)


@pytest.fixture(scope="session")
def trigack():
    return trigger_ack()


@pytest.fixture(scope="session")
def trigack_bases(trigack):
    return make_bases(*trigack)
