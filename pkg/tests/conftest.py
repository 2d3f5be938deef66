import pytest

from fwm import load_preset
from fwm.pairgen import SpectralGrid

ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def chalc():
    return load_preset("chalc-microwire")


@pytest.fixture(scope="session")
def micro():
    return load_preset("microstructured-silica")


@pytest.fixture(scope="session")
def pm():
    return load_preset("pm-silica")


def default_grid(pump, **kw):
    return SpectralGrid.for_pump(pump, **kw)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
