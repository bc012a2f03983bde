import numpy as np
import pytest
from hypothesis import strategies as st

from qincompat.bloch import FourVector
from qincompat.channels import ChannelSnapshot


def random_effect(rng, sharpish=False):
    """Uniformly oriented valid effect; ``sharpish`` pushes it toward the cone boundary."""
    if sharpish:
        x0 = 1.0 + rng.uniform(-0.3, 0.3)
        r = min(x0, 2 - x0) * (1 - 0.5 * rng.uniform() ** 3)
    else:
        x0 = rng.uniform(0, 2)
        r = min(x0, 2 - x0) * rng.uniform() ** 0.3
    v = rng.normal(size=3)
    v *= r / np.linalg.norm(v)
    return FourVector(float(x0), *map(float, v))


def random_snapshot(rng, mild=False):
    """Completely positive (a, c): |c|^2 <= a <= 1."""
    if mild:
        a = 1 - 0.2 * rng.uniform()
        mod = np.sqrt(a) * (1 - 0.1 * rng.uniform())
    else:
        a = rng.uniform()
        mod = np.sqrt(a) * np.sqrt(rng.uniform())
    return ChannelSnapshot(float(a), complex(mod * np.exp(1j * rng.uniform(0, 2 * np.pi))))


@pytest.fixture
def rng():
    return np.random.default_rng(20260101)


@st.composite
def effects(draw):
    x0 = draw(st.floats(0, 2))
    frac = draw(st.floats(0, 1))
    theta = draw(st.floats(0, np.pi))
    phi = draw(st.floats(0, 2 * np.pi))
    r = min(x0, 2 - x0) * frac
    return FourVector(
        x0, r * np.sin(theta) * np.cos(phi), r * np.sin(theta) * np.sin(phi), r * np.cos(theta)
    )


@st.composite
def snapshots(draw):
    a = draw(st.floats(0, 1))
    frac = draw(st.floats(0, 1))
    phase = draw(st.floats(0, 2 * np.pi))
    return ChannelSnapshot(a, complex(np.sqrt(a) * frac * np.exp(1j * phase)))


# acceptance reporting: one PASS/FAIL line per criterion

_ACCEPTANCE = []


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    if rep.when == "call" or (rep.when == "setup" and rep.outcome != "passed"):
        _ACCEPTANCE.append((marker.args[0], marker.args[1], rep.outcome))


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, text): acceptance criterion")


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n, text, outcome in sorted(_ACCEPTANCE, key=lambda r: (int(str(r[0]).rstrip("abcdefgh")), str(r[0]))):
        verdict = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"[{verdict}] criterion {n}: {text}")
