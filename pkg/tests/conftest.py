import numpy as np
import pytest

from djcqsl import BlochVector, DensityMatrix, ModelParams


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


def random_density(rng, pure=False) -> DensityMatrix:
    n = rng.normal(size=3)
    n /= np.linalg.norm(n)
    r = 1.0 if pure else rng.uniform(0.0, 1.0) ** (1.0 / 3.0)
    return BlochVector(*(r * n)).to_density()


def random_params(rng, gamma_range=(-2.0, 4.0), delta_range=(-2.0, 2.0)) -> ModelParams:
    g = 10.0 ** rng.uniform(*gamma_range)
    d = 10.0 ** rng.uniform(*delta_range) * rng.choice([-1.0, 1.0])
    return ModelParams(g, d)


def random_hermitian(rng) -> np.ndarray:
    m = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    return m + m.conj().T
