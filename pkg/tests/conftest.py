import sys

import mpmath as mp
import numpy as np
import pytest


def series_i0(x, dps=40):
    """Power series sum_k (x/2)^(2k) / (k!)^2 at high precision."""
    with mp.workdps(dps):
        return float(mp.nsum(lambda k: (mp.mpf(x) / 2) ** (2 * k) / mp.factorial(k) ** 2, [0, mp.inf]))


def series_i1(x, dps=40):
    with mp.workdps(dps):
        return float(mp.nsum(
            lambda k: (mp.mpf(x) / 2) ** (2 * k + 1) / (mp.factorial(k) * mp.factorial(k + 1)), [0, mp.inf]))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    results = getattr(module, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for n in sorted(results):
            terminalreporter.write_line(results[n])
