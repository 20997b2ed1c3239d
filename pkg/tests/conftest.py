import numpy as np
import pytest

from isac_amc.golay import default_preamble
from isac_amc.radar import RadarConfig


@pytest.fixture(scope="session")
def waveform():
    return default_preamble()


@pytest.fixture(scope="session")
def radar_cfg():
    return RadarConfig()


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


ACCEPTANCE_LINES = {}


@pytest.fixture
def acceptance(request):
    """Record the single pass/fail line of an acceptance criterion."""
    def report(number, ok, detail):
        line = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {detail}"
        ACCEPTANCE_LINES[number] = line
        print(line)
        return ok
    return report


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for number in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[number])
