import numpy as np
import pytest

from coupledmodes.core import ModeSystem

_ACCEPTANCE: list[tuple[str, bool, str]] = []


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


@pytest.fixture
def criterion():
    """Record one acceptance line: ``criterion(label, passed, detail)``."""

    def record(label: str, passed: bool, detail: str = ""):
        _ACCEPTANCE.append((label, bool(passed), detail))

    return record


def random_system(rng, n, scale=2.0) -> ModeSystem:
    omega = rng.uniform(-scale, scale, n)
    c = rng.uniform(-scale, scale, (n, n))
    c = np.triu(c, 1)
    return ModeSystem(omega, c + c.T)


def random_amplitudes(rng, n, scale=1.0) -> np.ndarray:
    return scale * (rng.normal(size=n) + 1j * rng.normal(size=n))


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for label, passed, detail in _ACCEPTANCE:
        terminalreporter.write_line(f"{'PASS' if passed else 'FAIL'}  {label}  {detail}")
