import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from gaussian_otto.dynamics import SwitchingProfile
from gaussian_otto.engine import EngineConfig
from gaussian_otto.models import BathSpec, CouplingSpec

settings.register_profile(
    "default",
    max_examples=40,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def small_engine(n=10, tau=20.0, delta=2.0, **kw):
    """A cheap two-bath engine used wherever the physics only needs to be generic."""
    return EngineConfig(
        hot=BathSpec(n, 2.0, 0.1, 4.0),
        cold=BathSpec(n, 1.0, 0.1, 0.5),
        coupling=CouplingSpec(0.1),
        profile=SwitchingProfile(tau, delta),
        **kw,
    )


@pytest.fixture
def engine_config():
    return small_engine()


_ACCEPTANCE = pytest.StashKey[list]()


@pytest.fixture(scope="session")
def acceptance_report(request):
    """Collects one verdict line per acceptance criterion, printed in the terminal summary."""
    return request.config.stash.setdefault(_ACCEPTANCE, [])


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_ACCEPTANCE, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines):
            terminalreporter.write_line(line)
