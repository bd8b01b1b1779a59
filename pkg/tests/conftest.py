import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "default",
    max_examples=40,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def random_hermitian(n, rng):
    X = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return (X + X.conj().T) / 2


_START = {}
RUNTIME_LIMIT = 300.0


def pytest_sessionstart(session):
    import time

    _START["t"] = time.perf_counter()


def pytest_terminal_summary(terminalreporter):
    import time

    elapsed = time.perf_counter() - _START.get("t", time.perf_counter())
    tag = "PASS" if elapsed <= RUNTIME_LIMIT else "FAIL"
    terminalreporter.write_line(
        f"{tag} full-suite runtime: {elapsed:.1f} s (limit {RUNTIME_LIMIT:.0f} s)"
    )
