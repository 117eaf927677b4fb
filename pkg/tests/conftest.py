import sys

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from pnspaces.distfn import DistributionFunction, GridSpec
from pnspaces.phi import identity
from pnspaces.pnspace import PNSpace, Rational1, ScaledRational, SimpleFamily
from pnspaces.triangle import TAU_M, TAU_PI

settings.register_profile("pkg", deadline=None, max_examples=40, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("pkg")

COARSE = GridSpec(mesh=2.0**-4, x_max=32.0)


def ratio_df(c, a=1.0, grid=None):
    """a x / (x + c) sampled on the grid plus a log-spaced cluster near 0."""
    grid = grid or GridSpec()
    xs = np.unique(np.r_[grid.points(), c * np.geomspace(1e-4, 1e2, 121)])
    xs = xs[xs <= grid.x_max]
    return DistributionFunction.sample(lambda x: a * x / (x + c), xs, a)


@pytest.fixture(scope="session")
def ex25():
    return PNSpace(1, Rational1(), TAU_PI, TAU_M, identity())


@pytest.fixture(scope="session")
def ex22():
    return PNSpace(1, ScaledRational(0.5), TAU_PI, TAU_M, identity())


@pytest.fixture(scope="session")
def simple():
    return PNSpace(1, SimpleFamily(), TAU_PI, TAU_M)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[n])
