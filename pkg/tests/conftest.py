import numpy as np
import pytest
from hypothesis import settings

from polymoduli import build, moduli, shapes

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


@pytest.fixture(scope="session")
def platonic():
    return shapes.platonic()


@pytest.fixture(scope="session")
def platonic_points(platonic):
    """Extracted angles and membership point for each regular solid."""
    out = {}
    for name, P in platonic.items():
        a = build.extract_angles(P)
        out[name] = (P, a, moduli.check_membership(P.K, a.sigma, a.delta).point)
    return out


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


_VERDICTS = []


def record_verdict(line: str) -> None:
    _VERDICTS.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if _VERDICTS:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_VERDICTS):
            terminalreporter.write_line(line)
