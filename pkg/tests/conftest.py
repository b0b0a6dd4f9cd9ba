import pytest

import isinggap as ig

TEST_TEMPERATURES = (0.5, 1.0, 2.0, 5.0)


@pytest.fixture(scope="session")
def kernels():
    cache = {}

    def get(n, T):
        key = (n, float(T))
        if key not in cache:
            cache[key] = ig.build_kernel(n, T)
        return cache[key]

    return get


@pytest.fixture(scope="session")
def load_tables(kernels):
    cache = {}

    def get(n, T):
        key = (n, float(T))
        if key not in cache:
            cache[key] = ig.accumulate_edge_loads(kernels(n, T))
        return cache[key]

    return get


@pytest.fixture(scope="session")
def spectra(kernels):
    cache = {}

    def get(n, T):
        key = (n, float(T))
        if key not in cache:
            cache[key] = ig.exact_spectrum(kernels(n, T))
        return cache[key]

    return get


@pytest.fixture(scope="session")
def walked_tables(kernels):
    cache = {}

    def get(n, T):
        key = (n, float(T))
        if key not in cache:
            cache[key] = ig.edge_loads_by_walking(kernels(n, T))
        return cache[key]

    return get
