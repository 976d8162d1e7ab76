import pytest

from semiwalk import _kernels


@pytest.fixture(scope="session")
def warm():
    """Compile (or load from cache) every numba kernel once per session."""
    _kernels.warm_kernels()
    return True
