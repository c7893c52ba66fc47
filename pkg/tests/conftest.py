import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


def random_coefficients(rng, n, complex_valued=True):
    """Normalized coefficient vector of degree ``n`` with a well-separated ``c_N``."""
    c = rng.normal(size=n + 1)
    if complex_valued:
        c = c + 1j * rng.normal(size=n + 1)
    c[-1] = (0.5 + rng.random()) * np.exp(2j * np.pi * rng.random())
    return c / np.linalg.norm(c)
