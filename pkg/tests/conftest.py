import pytest

import semiflow


@pytest.fixture(scope="session", autouse=True)
def jit_warmup():
    """Compile the hot kernels once so timed assertions measure steady-state
    behavior rather than JIT compilation."""
    semiflow.warmup()
