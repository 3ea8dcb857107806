import numpy as np
import pytest

from qcoherence.qobj import DiscreteObservable, make_density, pure_state

SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)


@pytest.fixture
def plus():
    return pure_state([1, 1])


@pytest.fixture
def sigma_z():
    return DiscreteObservable((1.0, -1.0), (np.diag([1.0, 0.0]), np.diag([0.0, 1.0])))


@pytest.fixture
def diag3():
    """Complete diagonal observable on three levels."""
    return DiscreteObservable((0.0, 1.0, 2.0), tuple(np.diag(np.eye(3)[i]) for i in range(3)))


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


_ACCEPTANCE: list[str] = []


@pytest.fixture
def accept():
    """Record one pass/fail line per acceptance criterion."""

    def record(name: str, ok: bool, detail: str = "") -> None:
        _ACCEPTANCE.append(f"{'PASS' if ok else 'FAIL'}  {name}  {detail}")
        assert ok, f"{name}: {detail}"

    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE:
            terminalreporter.write_line(line)
