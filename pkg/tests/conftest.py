import numpy as np
import pytest
from hypothesis import settings

from gravdist import load_preset

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")

ALL_PRESETS = ["Recession", "Recovery", "Phase1", "Phase2", "Phase3", "SaddleAppendix"]
POSITIVE_PRESETS = ["Recession", "Phase1", "Phase2", "Phase3"]


@pytest.fixture
def phase1():
    return load_preset("Phase1").params


@pytest.fixture
def phase3():
    return load_preset("Phase3").params


@pytest.fixture
def recession():
    return load_preset("Recession").params


@pytest.fixture
def appendix():
    return load_preset("SaddleAppendix").params


def rel_err(a, b):
    return abs(a - b) / max(abs(b), 1e-300)


def level_spread(values):
    values = np.asarray(values, dtype=float)
    return float(np.ptp(values) / abs(values.mean()))


# one line per acceptance criterion, printed at the end of the run
ACCEPTANCE_LOG = []


@pytest.fixture
def criterion(request):
    def record(number, title, ok, detail=""):
        ACCEPTANCE_LOG.append((number, title, bool(ok), detail))
        assert ok, f"criterion {number} ({title}) failed: {detail}"
    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LOG:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, ok, detail in sorted(ACCEPTANCE_LOG, key=lambda r: r[0]):
        status = "PASS" if ok else "FAIL"
        terminalreporter.write_line(f"[{status}] {number:>2}. {title}: {detail}")
