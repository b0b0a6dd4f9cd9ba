import math

import numpy as np
import pytest

import isinggap as ig
from isinggap.model import (
    all_energies,
    bonds,
    enumerate_configurations,
    gibbs_distribution,
    inverse_temperature,
    require_enumerable,
    spin_matrix,
)

from conftest import TEST_TEMPERATURES


def checkerboard_2x2():
    return ig.SpinConfiguration.from_matrix([[1, -1], [-1, 1]])


def test_energy_examples():
    assert ig.energy(ig.SpinConfiguration.all_up(1)) == 0
    assert ig.energy(ig.SpinConfiguration.all_down(1)) == 0
    # n=2 has 4 bonds, all aligned for the uniform configuration
    assert ig.energy(ig.SpinConfiguration.all_up(2)) == 4
    assert ig.energy(checkerboard_2x2()) == -4
    # flipping one corner flips the sign of 2 of the 4 bonds
    one_flip = ig.SpinConfiguration.all_up(2).flip_site(ig.Site(1, 1, 2))
    assert ig.energy(one_flip) == 0


def test_energy_bounds_and_flip_symmetry():
    for n in (1, 2, 3):
        limit = 2 * n * (n - 1)
        for x in enumerate_configurations(n):
            e = ig.energy(x)
            assert isinstance(e, int)
            assert -limit <= e <= limit
            assert e == ig.energy(x.global_flip())


def test_vectorized_energies_match_scalar():
    for n in (1, 2, 3):
        table = all_energies(n)
        for x in enumerate_configurations(n):
            assert table[x.bits] == ig.energy(x)


def test_bond_count():
    for n in (1, 2, 3, 4):
        assert len(bonds(n)) == 2 * n * (n - 1)


def test_partition_function_examples():
    assert ig.partition_function(1, 0.7) == pytest.approx(2.0, abs=1e-14)
    assert ig.partition_function(1, math.inf) == pytest.approx(2.0, abs=1e-14)
    assert ig.partition_function(2, math.inf) == pytest.approx(16.0, abs=1e-12)
    # independent oracle: the n=2 energy histogram is {+4: 2, 0: 12, -4: 2}
    hist = {}
    for x in enumerate_configurations(2):
        hist[ig.energy(x)] = hist.get(ig.energy(x), 0) + 1
    assert hist == {4: 2, 0: 12, -4: 2}
    expected = 2 * math.exp(4.0) + 12 + 2 * math.exp(-4.0)
    assert ig.partition_function(2, 1.0) == pytest.approx(expected, rel=1e-14)


def test_stationary_probability_examples():
    Z1 = ig.partition_function(1, 3.0)
    for x in enumerate_configurations(1):
        assert ig.stationary_probability(x, 3.0, Z1) == pytest.approx(0.5, abs=1e-15)
    Zinf = ig.partition_function(2, math.inf)
    for x in enumerate_configurations(2):
        assert ig.stationary_probability(x, math.inf, Zinf) == pytest.approx(
            1 / 16, abs=1e-15
        )
    Z = ig.partition_function(2, 1.0)
    expected = math.exp(4.0) / (2 * math.exp(4.0) + 12 + 2 * math.exp(-4.0))
    assert ig.stationary_probability(
        ig.SpinConfiguration.all_up(2), 1.0, Z
    ) == pytest.approx(expected, rel=1e-14)
    assert expected == pytest.approx(0.45036, abs=1e-5)


@pytest.mark.parametrize("n", [1, 2, 3])
@pytest.mark.parametrize("T", TEST_TEMPERATURES + (math.inf,))
def test_normalization_and_flip_invariance(n, T):
    pi = gibbs_distribution(n, T)
    assert abs(pi.sum() - 1.0) <= 1e-12
    flipped = pi[::-1]  # global flip is the bitwise complement
    assert np.abs(pi - flipped).max() <= 1e-14


@pytest.mark.parametrize("T", TEST_TEMPERATURES)
def test_half_mass_identity(T):
    for n in (2, 3):
        pi = gibbs_distribution(n, T)
        spins = spin_matrix(n)
        for k in range(n * n):
            mass = pi[spins[:, k] > 0].sum()
            assert abs(mass - 0.5) <= 1e-12


def test_conditional_flip_examples():
    x1 = ig.SpinConfiguration.all_up(1)
    assert ig.conditional_flip_probability(x1, ig.Site(1, 1, 1), 5.0) == pytest.approx(
        0.5, abs=1e-15
    )
    x2 = ig.SpinConfiguration.all_up(2)
    expected = 1.0 / (1.0 + math.exp(4.0))
    assert ig.conditional_flip_probability(x2, ig.Site(1, 1, 2), 1.0) == pytest.approx(
        expected, rel=1e-14
    )
    assert expected == pytest.approx(0.017986, abs=1e-6)
    for x in enumerate_configurations(2):
        for k in range(1, 5):
            site = ig.Site.from_linear(k, 2)
            assert ig.conditional_flip_probability(x, site, math.inf) == pytest.approx(
                0.5, abs=1e-15
            )


@pytest.mark.parametrize("T", TEST_TEMPERATURES)
def test_conditional_ratio_matches_local_field(T):
    # ratio-of-weights route vs the closed form 1/(1+exp((2/T) s * local sum))
    n = 3
    beta = inverse_temperature(T)
    for x in enumerate_configurations(n):
        for k in range(1, n * n + 1):
            site = ig.Site.from_linear(k, n)
            local = sum(x.spin_at(nb.p, nb.q) for nb in site.neighbors())
            closed = 1.0 / (1.0 + math.exp(2.0 * beta * x.spin_linear(k) * local))
            generic = ig.conditional_flip_probability(x, site, T)
            assert abs(generic - closed) / closed <= 1e-14


def test_hamming_examples():
    x = ig.SpinConfiguration.all_up(2)
    assert ig.hamming_distance(x, x) == 0
    assert ig.hamming_distance(x, x.global_flip()) == 4
    assert ig.hamming_distance(x, x.flip_site(ig.Site(2, 2, 2))) == 1


def test_hamming_properties():
    rng = np.random.default_rng(7)
    n = 3
    for _ in range(200):
        a, b, c = (ig.SpinConfiguration(n, int(v)) for v in rng.integers(0, 512, 3))
        assert ig.hamming_distance(a, b) == ig.hamming_distance(b, a)
        assert ig.hamming_distance(a, c) <= ig.hamming_distance(a, b) + ig.hamming_distance(b, c)


def test_hamming_size_mismatch():
    with pytest.raises(ValueError):
        ig.hamming_distance(ig.SpinConfiguration.all_up(2), ig.SpinConfiguration.all_up(3))


def test_site_linearization_bijection():
    for n in (1, 2, 3, 4):
        seen = set()
        for q in range(1, n + 1):
            for p in range(1, n + 1):
                site = ig.Site(p, q, n)
                assert site.linear == (q - 1) * n + p
                assert ig.Site.from_linear(site.linear, n) == site
                seen.add(site.linear)
        assert seen == set(range(1, n * n + 1))


def test_site_categories_match_neighbor_counts():
    expected_neighbors = {
        "corner-11": 2,
        "corner-n1": 2,
        "corner-1n": 2,
        "corner-nn": 2,
        "boundary-row1": 3,
        "boundary-rown": 3,
        "boundary-col1": 3,
        "boundary-coln": 3,
        "interior": 4,
    }
    for n in (2, 3, 5):
        for q in range(1, n + 1):
            for p in range(1, n + 1):
                site = ig.Site(p, q, n)
                assert len(site.neighbors()) == expected_neighbors[site.category]
    assert ig.site_category(1, 1, 1) == "corner-11"
    assert ig.Site(1, 1, 1).neighbors() == ()
    assert ig.site_category(2, 1, 3) == "boundary-row1"
    assert ig.site_category(1, 2, 3) == "boundary-col1"
    assert ig.site_category(3, 2, 3) == "boundary-coln"
    assert ig.site_category(2, 3, 3) == "boundary-rown"
    assert ig.site_category(2, 2, 3) == "interior"
    assert ig.site_category(3, 1, 3) == "corner-n1"
    assert ig.site_category(1, 3, 3) == "corner-1n"


def test_temperature_validation():
    assert inverse_temperature(math.inf) == 0.0
    assert inverse_temperature(2.0) == 0.5
    for bad in (0.0, -1.0, math.nan, "warm", None):
        with pytest.raises(ValueError):
            inverse_temperature(bad)


def test_configuration_round_trips():
    for x in enumerate_configurations(2):
        assert ig.SpinConfiguration.from_matrix(x.to_matrix()) == x
    with pytest.raises(ValueError):
        ig.SpinConfiguration.from_matrix([[1, 2], [1, 1]])
    with pytest.raises(ValueError):
        ig.SpinConfiguration(2, 16)


def test_enumeration_ceiling(monkeypatch):
    with pytest.raises(ig.LatticeTooLargeError):
        require_enumerable(5)
    assert require_enumerable(4) == 65536
    monkeypatch.setenv("ISINGGAP_MAX_STATES", "512")
    with pytest.raises(ig.LatticeTooLargeError):
        require_enumerable(4)
    assert require_enumerable(3) == 512
