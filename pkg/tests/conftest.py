import numpy as np
import pytest

from nhpme import kernels

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)


@pytest.fixture(params=["python", "cython"])
def backend_name(request, monkeypatch):
    """Run a test once per kernel backend, skipping cython if not built."""
    try:
        mod = kernels.get_backend(request.param)
    except RuntimeError:
        pytest.skip("compiled kernels not built")
    monkeypatch.setattr(kernels, "backend", mod)
    return request.param


@pytest.fixture
def rng():
    return np.random.default_rng(20261016)
