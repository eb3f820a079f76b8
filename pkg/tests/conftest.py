import logging
import os

import numpy as np
import pytest

# Use test env
os.environ.setdefault("DJANGO_SETTINGS_MODULE", "boundaryproject.settings")
os.environ.setdefault("BOUNDARY_WORKERS", "1")

from problem.boundaries import SmoothnessParams  # noqa: E402
from problem.instances import NoiseParams, make_instance  # noqa: E402
from problem.oracle import LabelOracle  # noqa: E402


@pytest.fixture(autouse=True)
def _setup_env(settings, tmp_path):
    # keep artifacts and Monte-Carlo sizes small and local to the test
    settings.BOUNDARY_OUTPUT_DIR = tmp_path / "results"
    settings.BOUNDARY_RISK_SAMPLES = 2000
    settings.BOUNDARY_WORKERS = 1


@pytest.fixture
def flat_instance():
    """Noiseless, g* = 0.5 everywhere, d = 2."""
    def build(height=0.5, d=2, alpha=1.0, lam=1.0, noiseless=True, kappa=1.5, c=0.4):
        return make_instance(
            "affine", d, SmoothnessParams(alpha, lam), NoiseParams(kappa, c),
            slope=0.0, offset=height, noiseless=noiseless,
        )
    return build


@pytest.fixture
def example_instance():
    """d = 2, alpha = 1, kappa = 1.5, c_eff = 0.4 with a random affine boundary."""
    return make_instance("affine", 2, SmoothnessParams(1.0, 1.0), NoiseParams(1.5, 0.4), seed=3)


@pytest.fixture
def oracle():
    def build(instance, seed=0, cap=10 ** 6):
        return LabelOracle(instance, seed, cap)
    return build


class TraceCollector(logging.Handler):
    def __init__(self):
        super().__init__(level=logging.DEBUG)
        self.messages = []

    def emit(self, record):
        self.messages.append(record.getMessage())


@pytest.fixture
def trace_records():
    """JSON messages emitted on boundary.trace while the test runs."""
    trace = logging.getLogger("boundary.trace")
    handler = TraceCollector()
    level = trace.level
    trace.addHandler(handler)
    trace.setLevel(logging.DEBUG)
    yield handler.messages
    trace.removeHandler(handler)
    trace.setLevel(level)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
