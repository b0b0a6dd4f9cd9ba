import math

import numpy as np
import pytest

import isinggap as ig
from isinggap import bounds as bnd
from isinggap.checks import partition_ceiling_flag
from isinggap.model import gibbs_distribution

from conftest import TEST_TEMPERATURES


def test_kappa_n1_single_chain(kernels, load_tables):
    result = ig.kappa_exact(kernels(1, 1.0), load_tables(1, 1.0))
    assert result.kappa == pytest.approx(1.0, abs=1e-15)
    assert result.argmax_edge.site == ig.Site(1, 1, 1)
    assert set(result.class_maxima) == {"corner-11"}


def test_kappa_uniform_measure(kernels, load_tables):
    # closed-form value at infinite temperature:
    #   load = 2^(N-1) * (1 + (N-1)/2) / 2^(2N), Q = 2^-N / (2N),
    #   so every edge ratio equals N * (N + 1) / 2 ... = 10 at N=4, 45 at N=9
    result2 = ig.kappa_exact(kernels(2, math.inf), load_tables(2, math.inf))
    assert result2.kappa == pytest.approx(10.0, rel=1e-13)
    result3 = ig.kappa_exact(kernels(3, math.inf), load_tables(3, math.inf))
    assert result3.kappa == pytest.approx(45.0, rel=1e-13)
    ratios = bnd.congestion_ratios(kernels(3, math.inf), load_tables(3, math.inf))
    assert np.abs(ratios - 45.0).max() <= 1e-11


def test_kappa_dominates_exact_beta1(kernels, load_tables, spectra):
    # at infinite temperature beta1 = 3/4 exactly, so kappa must be >= 4
    result = ig.kappa_exact(kernels(2, math.inf), load_tables(2, math.inf))
    assert result.kappa >= 4.0
    assert 1.0 - 1.0 / result.kappa >= spectra(2, math.inf).beta1 - 1e-12


def test_kappa_class_maxima_consistent(kernels, load_tables):
    result = ig.kappa_exact(kernels(3, 1.0), load_tables(3, 1.0))
    assert set(result.class_maxima) == {
        "corner-11", "corner-n1", "corner-1n", "corner-nn",
        "boundary-row1", "boundary-rown", "boundary-col1", "boundary-coln",
        "interior",
    }
    assert max(result.class_maxima.values()) == pytest.approx(result.kappa, rel=1e-14)
    edge_ratio = load_tables(3, 1.0).load(result.argmax_edge) / ig.edge_flow(
        kernels(3, 1.0), result.argmax_edge
    )
    assert edge_ratio == pytest.approx(result.kappa, rel=1e-14)


@pytest.mark.parametrize("T", TEST_TEMPERATURES)
def test_kappa_below_closed_form_ceiling(kernels, load_tables, T):
    for n in (1, 2, 3):
        result = ig.kappa_exact(kernels(n, T), load_tables(n, T))
        assert math.log(result.kappa) <= bnd.log_kappa_ceiling(n, T) + 1e-12
    assert bnd.kappa_ceiling(3, 1.0) == pytest.approx(81.0 * math.exp(14.0), rel=1e-13)


def test_beta1_bound_from_kappa():
    assert ig.beta1_bound_from_kappa(1.0) == 0.0
    assert ig.beta1_bound_from_kappa(2.0) == 0.5
    with pytest.raises(ValueError):
        ig.beta1_bound_from_kappa(0.5)


def test_congestion_bound_dominates_beta1(kernels, load_tables, spectra):
    kappa = ig.kappa_exact(kernels(2, 1.0), load_tables(2, 1.0)).kappa
    assert ig.beta1_bound_from_kappa(kappa) >= spectra(2, 1.0).beta1 - 1e-12


def test_geometric_bound_examples():
    assert ig.geometric_beta1_bound(2, 1.0) == pytest.approx(
        1.0 - math.exp(-10.0) / 16.0, rel=1e-15
    )
    assert ig.geometric_beta1_bound(2, math.inf) == pytest.approx(0.9375, abs=1e-15)
    assert ig.geometric_beta1_bound(3, 1.0) == pytest.approx(
        1.0 - math.exp(-14.0) / 81.0, rel=1e-15
    )
    assert math.exp(bnd.log_geometric_gap(3, 1.0)) == pytest.approx(
        bnd.geometric_gap(3, 1.0), rel=1e-12
    )


def test_beta_star_bound_and_chain():
    for T in TEST_TEMPERATURES:
        for n in (1, 2, 3, 10):
            assert ig.geometric_beta_star_bound(n, T) == ig.geometric_beta1_bound(n, T)
            assert ig.beta_star_chain_holds(n, T)
    # the chain degrades to equalities only at n=1, infinite temperature
    assert ig.beta_star_chain_holds(1, math.inf)


def test_ingrassia_beta_min_examples():
    assert ig.ingrassia_beta_min_bound(math.inf) == pytest.approx(0.0, abs=1e-15)
    assert ig.ingrassia_beta_min_bound(1.0) == pytest.approx(
        -1.0 + 2.0 / (1.0 + math.exp(4.0)), rel=1e-15
    )
    assert ig.ingrassia_beta_min_bound(1.0) == pytest.approx(-0.96403, abs=1e-5)
    assert ig.ingrassia_beta_min_bound(4.0) == pytest.approx(
        -1.0 + 2.0 / (1.0 + math.e), rel=1e-15
    )
    assert ig.ingrassia_beta_min_bound(4.0) == pytest.approx(-0.46212, abs=1e-5)


@pytest.mark.parametrize("T", TEST_TEMPERATURES)
@pytest.mark.parametrize("n", [2, 3])
def test_exact_beta_min_above_ingrassia(spectra, n, T):
    assert spectra(n, T).beta_min >= ig.ingrassia_beta_min_bound(T) - 1e-9


def test_ingrassia_beta1_examples():
    for T in (0.5, 1.0, 3.0):
        assert ig.ingrassia_beta1_bound(1, T) == pytest.approx(
            1.0 - math.exp(-4.0 / T), rel=1e-15
        )
    expected = 1.0 - (math.exp(-4.0) / 16.0) * ((1.0 + math.exp(-0.5)) / 2.0) ** 3
    assert ig.ingrassia_beta1_bound(2, 1.0) == pytest.approx(expected, rel=1e-15)
    assert 1.0 - expected == pytest.approx(5.93e-4, rel=1e-3)


def test_comparison_curve_examples():
    assert ig.comparison_f(1.0) == pytest.approx(math.exp(4.0), rel=1e-15)
    assert ig.comparison_f(1.0) == pytest.approx(54.598, abs=1e-3)
    assert ig.comparison_g(1.0) == pytest.approx(2.0 / (1.0 + math.exp(-0.5)), rel=1e-15)
    assert ig.comparison_g(1.0) == pytest.approx(1.2449, abs=1e-4)
    assert ig.comparison_f(8.0) == pytest.approx(math.exp(0.5), rel=1e-15)
    assert ig.comparison_f(8.0) >= ig.comparison_g(8.0)
    # both factors tend to 1 from above as T grows
    assert ig.comparison_f(1e9) == pytest.approx(1.0, abs=1e-8)
    assert ig.comparison_g(1e9) == pytest.approx(1.0, abs=1e-8)


def test_comparison_grid_ordering_and_monotonicity():
    grid = [0.5 + 0.5 * i for i in range(20)]
    rows = ig.comparison_curves(grid)
    fs = [f for _, f, _ in rows]
    gs = [g for _, _, g in rows]
    assert all(f >= g for f, g in zip(fs, gs))
    assert all(a > b for a, b in zip(fs, fs[1:]))
    assert all(a > b for a, b in zip(gs, gs[1:]))
    with pytest.raises(ValueError):
        ig.comparison_curves([])


def test_gap_crossover_finite_and_consistent():
    for T in (0.5, 1.0, 2.0):
        crossover = ig.smallest_n_geometric_beats_ingrassia(T, n_max=200)
        assert crossover is not None
        # independent scan over the same closed forms
        beta = 1.0 / T
        def log_gap_a(n):
            return -4 * math.log(n) - 2 * beta * (2 * n + 1)
        def log_gap_b(n):
            return -4 * math.log(n) - 4 * beta + (n * n - 1) * math.log(
                (1 + math.exp(-beta / 2)) / 2
            )
        expected = next(n for n in range(1, 201) if log_gap_a(n) > log_gap_b(n))
        assert crossover == expected
        assert ig.geometric_gap(crossover, T) > ig.ingrassia_gap(crossover, T)
        if crossover > 1:
            assert ig.geometric_gap(crossover - 1, T) <= ig.ingrassia_gap(crossover - 1, T)


def test_partition_ceiling_flag_fires_at_finite_T():
    for n in (2, 3):
        for T in (0.5, 1.0, 2.0, 5.0):
            flag = partition_ceiling_flag(n, T)
            assert flag["violated"], (n, T, flag)
            assert flag["Z_exact"] > flag["ceiling"]
    # uniform-measure limit: ceiling is exactly attained, no violation
    flag = partition_ceiling_flag(2, math.inf)
    assert flag["Z_exact"] == pytest.approx(flag["ceiling"], rel=1e-12)
    assert not flag["violated"]


def test_class_bound_closed_form_examples(kernels):
    assert ig.class_congestion_bound(kernels(2, 1.0), ig.Site(1, 1, 2)) == pytest.approx(
        8.0 * (1.0 + math.exp(4.0)), rel=1e-14
    )
    assert 8.0 * (1.0 + math.exp(4.0)) == pytest.approx(444.79, abs=5e-2)
    assert ig.class_congestion_bound(kernels(2, math.inf), ig.Site(2, 2, 2)) == pytest.approx(
        16.0, rel=1e-14
    )


def test_class_bound_interior_value_against_direct_sum(kernels):
    # independent per-configuration evaluation of the interior-class sum
    kernel = kernels(3, 1.0)
    pi = gibbs_distribution(3, 1.0)
    total = 0.0
    for w in range(512):
        spin = lambda p, q: 1.0 if (w >> ((q - 1) * 3 + p - 1)) & 1 else -1.0
        if spin(2, 2) != 1.0:
            continue
        expo = -2.0 * (spin(3, 2) + spin(2, 3))
        expo += -spin(1, 2) + spin(1, 3) - spin(1, 2) * spin(1, 3)
        expo += spin(3, 1) - spin(3, 2) - spin(3, 1) * spin(3, 2)
        total += pi[w] * math.exp(expo)
    expected = 2.0 * 81.0 * math.exp(2.0) * total
    assert ig.class_congestion_bound(kernel, ig.Site(2, 2, 3)) == pytest.approx(
        expected, rel=1e-12
    )


def test_mirrored_class_bounds_match_direct_orientation(kernels):
    # The implementation reduces mirrored classes to a canonical
    # orientation, relying on reflection invariance of the Gibbs weights.
    # Evaluate each mirrored class's sum directly in its own orientation
    # and require exact agreement.
    n = 3
    kernel = kernels(n, 2.0)
    pi = gibbs_distribution(n, 2.0)
    beta = 0.5

    def value_by_loop(condition_site, exponent):
        total = 0.0
        for w in range(512):
            spin = lambda p, q: 1.0 if (w >> ((q - 1) * n + p - 1)) & 1 else -1.0
            total += pi[w] * math.exp(beta * exponent(spin, condition_site(spin)))
        return total

    # corner-1n, transposed orientation of the (n,1) corner sum
    def corner_1n_exponent(spin, keep):
        if not keep:
            return -math.inf
        expo = 2.0 * (1.0 - spin(2, n))
        for j in range(1, n):
            expo += spin(1, j) - spin(2, j) - spin(1, j) * spin(2, j)
        return expo

    direct = 2.0 * 81.0 * math.exp(beta * (n - 1)) * value_by_loop(
        lambda spin: spin(1, n) == 1.0, corner_1n_exponent
    )
    assert ig.class_congestion_bound(kernel, ig.Site(1, 3, 3)) == pytest.approx(
        direct, rel=1e-12
    )

    # boundary-coln at (3, 2): column-1 sum mirrored through p -> n+1-p
    def coln_exponent_pos(spin, keep):
        if not keep:
            return -math.inf
        expo = -2.0 * (spin(n - 1, 2) + spin(n, 3))
        for i in range(2, n + 1):
            a, b = spin(n + 1 - i, 1), spin(n + 1 - i, 2)
            expo += a - b - a * b
        return expo

    def coln_exponent_neg(spin, keep):
        if not keep:
            return -math.inf
        expo = 2.0 * (1.0 + spin(n, 1))
        for i in range(2, n + 1):
            a, b = spin(n + 1 - i, 1), spin(n + 1 - i, 2)
            expo += a - b - a * b
        return expo

    direct = 81.0 * math.exp(beta * (n + 1)) * (
        value_by_loop(lambda spin: spin(3, 2) == 1.0, coln_exponent_pos)
        + value_by_loop(lambda spin: spin(3, 2) == -1.0, coln_exponent_neg)
    )
    assert ig.class_congestion_bound(kernel, ig.Site(3, 2, 3)) == pytest.approx(
        direct, rel=1e-12
    )

    # boundary-rown at (2, 3): row-1 sum mirrored through q -> n+1-q
    def rown_exponent_pos(spin, keep):
        if not keep:
            return -math.inf
        expo = -2.0 * (spin(3, n) + spin(2, n - 1))
        for i in range(1, n):
            a, b = spin(i, n), spin(i, n - 1)
            expo += a - b - a * b
        return expo

    def rown_exponent_neg(spin, keep):
        if not keep:
            return -math.inf
        expo = 2.0 * (1.0 + spin(1, n))
        for i in range(1, n):
            a, b = spin(i, n), spin(i, n - 1)
            expo += a - b - a * b
        return expo

    direct = 81.0 * math.exp(beta * (n + 1)) * (
        value_by_loop(lambda spin: spin(2, 3) == 1.0, rown_exponent_pos)
        + value_by_loop(lambda spin: spin(2, 3) == -1.0, rown_exponent_neg)
    )
    assert ig.class_congestion_bound(kernel, ig.Site(2, 3, 3)) == pytest.approx(
        direct, rel=1e-12
    )


@pytest.mark.parametrize("T", TEST_TEMPERATURES)
def test_class_domination_outside_interior(kernels, load_tables, T):
    # corner and boundary classes dominate their edges at n <= 3
    for n in (2, 3):
        kernel = kernels(n, T)
        ratios = bnd.congestion_ratios(kernel, load_tables(n, T))
        for k in range(1, n * n + 1):
            site = ig.Site.from_linear(k, n)
            if site.category == "interior":
                continue
            bound = ig.class_congestion_bound(kernel, site)
            observed = float(ratios[:, k - 1].max())
            assert observed <= bound * (1.0 + 1e-9), (n, T, site.category)


@pytest.mark.parametrize("T", TEST_TEMPERATURES)
def test_interior_class_bound_is_violated_as_printed(kernels, load_tables, T):
    # The single-sum interior form undershoots the true interior edge
    # congestion at n=3 for every finite temperature: the worst-case
    # substitution behind it is not jointly feasible.  The final
    # closed-form kappa ceiling still holds (checked above), so only this
    # intermediate per-class inequality fails.
    kernel = kernels(3, T)
    ratios = bnd.congestion_ratios(kernel, load_tables(3, T))
    site = ig.Site(2, 2, 3)
    bound = ig.class_congestion_bound(kernel, site)
    observed = float(ratios[:, site.bit].max())
    assert observed > bound


def test_bounds_report_shapes():
    report = ig.build_bounds_report(2, 1.0)
    payload = report.to_dict()
    assert payload["schema"] == 1
    assert payload["all_passed"] is True
    assert payload["flags"]["partition_ceiling_violated"] is True
    assert payload["exact"]["kappa"]["kappa"] >= 1.0
    assert set(payload["exact"]["class_bounds"]) == {
        "corner-11", "corner-n1", "corner-1n", "corner-nn"
    }

    formulas = ig.build_bounds_report(50, 1.0, formulas_only=True)
    payload = formulas.to_dict()
    assert payload["exact"] is None
    assert payload["all_passed"] is True
    assert payload["closed_form"]["log_gap"] == pytest.approx(
        -4.0 * math.log(50.0) - 202.0, rel=1e-13
    )


def test_report_interior_verdict_fails_honestly():
    report = ig.build_bounds_report(3, 2.0)
    by_name = {v.name: v for v in report.verdicts}
    interior = by_name["class-bound-dominates:interior"]
    assert not interior.passed
    others = [v for name, v in by_name.items()
              if name.startswith("class-bound-dominates:") and name != interior.name]
    assert all(v.passed for v in others)
    assert not report.all_passed
