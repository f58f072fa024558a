import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20240613)


def random_stokes(rng, max_norm=1.0):
    """Uniform direction, radius uniform in (0, max_norm)."""
    v = rng.normal(size=3)
    return v / np.linalg.norm(v) * rng.uniform(0.0, max_norm)


def random_pure_stokes(rng):
    v = rng.normal(size=3)
    return v / np.linalg.norm(v)


def haar_vector(rng, n):
    v = rng.normal(size=n) + 1j * rng.normal(size=n)
    return v / np.linalg.norm(v)


def haar_unitary(rng, n=2):
    z = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    q, r = np.linalg.qr(z)
    return q @ np.diag(np.diag(r) / np.abs(np.diag(r)))


def random_hermitian(rng, scale=1.0):
    z = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    return scale * (z + z.conj().T) / 2.0
