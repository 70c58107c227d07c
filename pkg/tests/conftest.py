import os

import pytest
from hypothesis import HealthCheck, settings

import oracle
from pfiltration import zoo

settings.register_profile("default", max_examples=40, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("thorough", max_examples=300, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@pytest.fixture(scope="session")
def d8_model():
    N, r, s = oracle.dihedral_perms(8)
    G, elems = oracle.to_pgroup(N, 2, "D8 perms")
    return N, G, elems, elems.index(r), elems.index(s)


@pytest.fixture(scope="session")
def d8():
    return zoo.dihedral(8)


@pytest.fixture(scope="session")
def q8():
    return zoo.quaternion(8)


@pytest.fixture(scope="session")
def m3112():
    return zoo.metabelian(3, 1, 1, 2)


def pytest_terminal_summary(terminalreporter):
    try:
        import test_acceptance
    except ImportError:
        return
    if test_acceptance.RESULTS:
        terminalreporter.section("acceptance criteria")
        for n in sorted(test_acceptance.RESULTS):
            terminalreporter.write_line(test_acceptance.RESULTS[n])
