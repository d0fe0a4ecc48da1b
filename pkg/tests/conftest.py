"""Shared test fixtures."""
import pytest

import kerrcat


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    # Pay the one-time JIT compilation cost (accelerated backend only) before
    # any timed or deadline-bound test runs; no-op on the numpy fallback.
    kerrcat.warmup()
