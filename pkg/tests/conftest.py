import numpy as np
import pytest

from oseledets import exact_vector, generate, reference_spec

MODEL_SEED = 1

ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def ref_model():
    """d=8, log 8..log 1, eps=0.1 over [-350, 349]."""
    return generate(reference_spec(350, seed=MODEL_SEED))


@pytest.fixture(scope="session")
def model200():
    return generate(reference_spec(200, seed=MODEL_SEED))


@pytest.fixture(scope="session")
def w2_truth(ref_model):
    return exact_vector(ref_model[1], 0, 2)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def constant_window(m, length, start=None):
    from oseledets import CocycleWindow

    m = np.asarray(m, dtype=float)
    return CocycleWindow(np.repeat(m[None], length, axis=0), -(length // 2) if start is None else start)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
