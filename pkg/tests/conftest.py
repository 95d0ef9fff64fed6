import pytest
from hypothesis import HealthCheck, settings

from fimod import corpus
from fimod.fi import random_fg_module
from fimod.rings import parse_coeff

settings.register_profile("fimod", deadline=None, max_examples=25,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("fimod")


def small_random(seed, tag="f2", N=4, gdeg=2, gens=2):
    return random_fg_module(seed, parse_coeff(tag), N, gdeg, gens)


@pytest.fixture(scope="session")
def named():
    return {n: corpus.get(n) for n in corpus.names()}


def pytest_terminal_summary(terminalreporter):
    import test_acceptance
    if test_acceptance.LINES:
        terminalreporter.section("acceptance criteria")
        for line in test_acceptance.LINES:
            terminalreporter.write_line(line)
