import numpy as np
import pytest

NILP = np.array([[0, 1], [0, 0]], dtype=complex)


def ginibre(rng, n, m=None):
    m = n if m is None else m
    return (rng.standard_normal((n, m)) + 1j * rng.standard_normal((n, m))) / np.sqrt(2)


def random_psd(rng, n, rank=None):
    g = ginibre(rng, n, n if rank is None else rank)
    return g @ g.conj().T


@pytest.fixture
def rng():
    return np.random.default_rng(20240917)
