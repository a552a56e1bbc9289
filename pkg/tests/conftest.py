import numpy as np
import pytest

from uncertain_nn.instances import gen_random


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def random_discrete(seed, n=4, k=3, **kw):
    return gen_random(n, k, "discrete", seed, **kw)


def random_disks(seed, n=3, **kw):
    return gen_random(n, 1, "disk", seed, **kw)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
