import pytest

from subzerocore.synthetic import gaussian_mixture

BENCHMARK_SEED = 0
BENCHMARK_ALPHAS = (0.7, 0.9, 0.99)


@pytest.fixture(scope="session")
def benchmark_set():
    """The pinned 10-class benchmark: 500 points/class, 16 dims, seed 0."""
    return gaussian_mixture(10, 500, 16, seed=BENCHMARK_SEED)
