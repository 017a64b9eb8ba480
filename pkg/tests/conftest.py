import numpy as np
import pytest

from framekit.fusion import FusionSystem
from framekit.instances import make_rng
from framekit.subspace import Subspace

E1 = np.array([1.0, 0.0])
E2 = np.array([0.0, 1.0])
DIAG = np.array([1.0, 1.0]) / np.sqrt(2)


def line(v):
    return Subspace.span(np.asarray(v, dtype=float))


def system(spans, weights=None):
    spans = [line(s) if np.ndim(s) == 1 else Subspace.span(s) for s in spans]
    weights = np.ones(len(spans)) if weights is None else np.asarray(weights, dtype=float)
    return FusionSystem(tuple(spans), weights)


@pytest.fixture
def rng():
    return make_rng(20240611)


@pytest.fixture(params=["real", "complex"])
def field(request):
    return request.param


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[n])
