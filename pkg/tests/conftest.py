import numpy as np
import pytest

from mggp import dataio
from mggp.dataio import Dataset


class ScriptedRng:
    """Stand-in for numpy's Generator that replays fixed choices."""

    def __init__(self, integers=(), randoms=()):
        self._ints = list(integers)
        self._floats = list(randoms)

    def integers(self, low, high=None, size=None):
        if size is not None:
            return np.array([self._ints.pop(0) for _ in range(size)])
        return self._ints.pop(0)

    def random(self):
        return self._floats.pop(0)


@pytest.fixture
def scripted_rng():
    return ScriptedRng


@pytest.fixture(scope="session")
def bundled():
    return dataio.bundled_synthetic()


@pytest.fixture(scope="session")
def bundled_split(bundled):
    return dataio.split(np.random.default_rng(1), bundled)


def generic_dataset(rng, n=200, d=6, fn=None):
    X = rng.uniform(-3, 3, size=(n, d))
    y = fn(X) if fn is not None else X[:, 0]
    return Dataset(X, y, tuple(f"x{i + 1}" for i in range(d)))


@pytest.fixture
def make_dataset():
    return generic_dataset


# -- acceptance report -------------------------------------------------------

ACCEPTANCE_DETAILS = {}
_ACCEPTANCE_OUTCOMES = {}


def _criterion(nodeid):
    name = nodeid.rsplit("::", 1)[-1]
    if "test_acceptance.py" not in nodeid or not name.startswith("test_criterion_"):
        return None
    return int(name.split("_")[2])


def pytest_runtest_logreport(report):
    n = _criterion(report.nodeid)
    if n is None:
        return
    if report.skipped:
        _ACCEPTANCE_OUTCOMES[n] = "SKIP"
    elif report.failed:
        _ACCEPTANCE_OUTCOMES[n] = "FAIL"
    elif report.when == "call":
        _ACCEPTANCE_OUTCOMES.setdefault(n, "PASS")


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE_OUTCOMES:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_ACCEPTANCE_OUTCOMES):
        detail = ACCEPTANCE_DETAILS.get(n, "")
        terminalreporter.write_line(f"criterion {n:2d}: {_ACCEPTANCE_OUTCOMES[n]:4s}  {detail}".rstrip())
