"""Named verification verdicts tying the exact machinery together.

Every check compares an exactly computed quantity against either an
independent recomputation or an analytic right-hand side, and reports a
Verdict with the observed margin.  The suites here back both the `verify`
and `bounds` CLI commands and the acceptance tests.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import bounds as bnd
from .bounds import Verdict
from .kernel import (
    TransitionKernel,
    build_kernel,
    closed_form_flip_probability,
    enumerate_directed_edges,
)
from .model import (
    Site,
    SpinConfiguration,
    partition_function,
    spin_matrix,
)
from .paths import (
    EdgeLoadTable,
    accumulate_edge_loads,
    canonical_path,
    edge_loads_by_walking,
    length_weighted_pair_sum,
)
from .spectral import (
    Spectrum,
    exact_spectrum,
    tv_decay_all_starts,
    verify_tv_decay,
)


def kernel_verdicts(kernel: TransitionKernel) -> list[Verdict]:
    P_rows = kernel.flip_probs.sum(axis=1) + kernel.holding
    row_err = float(np.abs(P_rows - 1.0).max())
    verdicts = [
        Verdict(
            "rows-sum-to-one", row_err, 1e-12, 1e-12 - row_err, row_err <= 1e-12
        ),
        Verdict(
            "entries-nonnegative",
            float(min(kernel.flip_probs.min(), kernel.holding.min())),
            0.0,
            float(min(kernel.flip_probs.min(), kernel.holding.min())),
            bool(kernel.flip_probs.min() >= 0.0 and kernel.holding.min() >= 0.0),
        ),
        Verdict(
            "single-flip-connectivity",
            float(kernel.flip_probs.min()),
            0.0,
            float(kernel.flip_probs.min()),
            bool(kernel.flip_probs.min() > 0.0),
            note="every single-flip transition has positive probability",
        ),
        Verdict(
            "aperiodicity",
            float(kernel.holding.min()),
            0.0,
            float(kernel.holding.min()),
            bool(kernel.holding.min() >= 0.0),
            note="holding probabilities are non-negative (positive at finite T)",
        ),
    ]

    # detailed balance, residual relative to the local flux
    worst = 0.0
    for k in range(1, kernel.n_sites + 1):
        targets = kernel.flip_targets(k)
        forward = kernel.pi * kernel.flip_probs[:, k - 1]
        backward = kernel.pi[targets] * kernel.flip_probs[targets, k - 1]
        worst = max(worst, float((np.abs(forward - backward) / forward).max()))
    verdicts.append(
        Verdict("detailed-balance", worst, 1e-12, 1e-12 - worst, worst <= 1e-12)
    )

    # closed-form flip probabilities against the conditional-ratio route
    worst = 0.0
    for edge in enumerate_directed_edges(kernel.n):
        generic = float(
            kernel.flip_probs[edge.minus.bits, edge.site.bit]
        )
        closed = closed_form_flip_probability(edge, kernel.T)
        worst = max(worst, abs(generic - closed) / generic)
    verdicts.append(
        Verdict(
            "closed-form-flip-equivalence",
            worst,
            1e-14,
            1e-14 - worst,
            worst <= 1e-14,
        )
    )
    return verdicts


def path_verdicts(
    kernel: TransitionKernel,
    loads: EdgeLoadTable,
    walked: EdgeLoadTable | None = None,
    seed: int = 0,
    samples: int = 100000,
) -> list[Verdict]:
    n = kernel.n
    expected_count = 2 ** (kernel.n_sites - 1)
    verdicts = []
    if walked is None:
        walked = edge_loads_by_walking(kernel)

    count_ok = bool(
        (loads.counts == expected_count).all() and (walked.counts == expected_count).all()
    )
    verdicts.append(
        Verdict(
            "edge-traversal-count",
            float(walked.counts.min()),
            float(expected_count),
            0.0 if count_ok else float(walked.counts.min() - expected_count),
            count_ok,
            note="every directed edge carries exactly 2^(n^2-1) canonical paths",
        )
    )

    load_err = float(np.abs(loads.loads - walked.loads).max())
    verdicts.append(
        Verdict(
            "edge-load-accumulators-agree",
            load_err,
            1e-12,
            1e-12 - load_err,
            load_err <= 1e-12,
            note="per-edge characterization vs exhaustive path walking",
        )
    )

    total = loads.total()
    resummed = length_weighted_pair_sum(kernel, power=2)
    cons_err = abs(total - resummed) / max(abs(resummed), 1e-300)
    verdicts.append(
        Verdict(
            "load-conservation",
            total,
            resummed,
            1e-12 - cons_err,
            cons_err <= 1e-12,
            note="sum of loads equals the length-squared pair sum",
        )
    )

    # length law plus determinism of the construction
    rng = np.random.default_rng(seed)
    if kernel.n_states ** 2 <= samples:
        pairs = [
            (x, y) for x in range(kernel.n_states) for y in range(kernel.n_states)
        ]
    else:
        pairs = zip(
            rng.integers(0, kernel.n_states, size=samples),
            rng.integers(0, kernel.n_states, size=samples),
        )
    law_ok = True
    checked = 0
    for x_bits, y_bits in pairs:
        x = SpinConfiguration(n, int(x_bits))
        y = SpinConfiguration(n, int(y_bits))
        path = canonical_path(x, y)
        again = canonical_path(x, y)
        distance = (x.bits ^ y.bits).bit_count()
        if path.length != distance or again.sites != path.sites:
            law_ok = False
            break
        checked += 1
    verdicts.append(
        Verdict(
            "path-length-law",
            float(checked),
            float(checked),
            0.0,
            law_ok,
            note="|path(x,y)| = d(x,y), deterministic construction",
        )
    )
    return verdicts


def identity_verdicts(kernel: TransitionKernel) -> list[Verdict]:
    n = kernel.n
    pi = kernel.pi
    beta = kernel.beta
    spins = spin_matrix(n).astype(float)
    verdicts = []

    def s(p: int, q: int) -> np.ndarray:
        return spins[:, (q - 1) * n + p - 1]

    flip_all = np.arange(kernel.n_states)[::-1]  # bitwise complement ordering
    flip_err = float(np.abs(pi - pi[flip_all]).max())
    verdicts.append(
        Verdict(
            "global-flip-symmetry",
            flip_err,
            1e-12,
            1e-12 - flip_err,
            flip_err <= 1e-12,
        )
    )

    norm_err = abs(float(pi.sum()) - 1.0)
    verdicts.append(
        Verdict("pi-normalization", norm_err, 1e-12, 1e-12 - norm_err, norm_err <= 1e-12)
    )

    worst = 0.0
    for k in range(1, kernel.n_sites + 1):
        mass = float(pi[spins[:, k - 1] > 0].sum())
        worst = max(worst, abs(mass - 0.5))
    verdicts.append(
        Verdict("half-mass-per-site", worst, 1e-12, 1e-12 - worst, worst <= 1e-12)
    )

    interior = [
        Site(p, q, n)
        for q in range(2, n)
        for p in range(2, n)
    ]
    if interior:
        worst = 0.0
        for site in interior:
            p, q = site.p, site.q
            up = s(p, q) > 0
            lhs = float(
                (pi[up] * np.exp(-2.0 * beta * (s(p + 1, q) + s(p, q + 1))[up])).sum()
            )
            rhs = float(
                (pi[~up] * np.exp(2.0 * beta * (s(p - 1, q) + s(p, q - 1))[~up])).sum()
            )
            worst = max(worst, abs(lhs - rhs) / max(abs(lhs), abs(rhs)))
        verdicts.append(
            Verdict(
                "half-space-weight-symmetry",
                worst,
                1e-12,
                1e-12 - worst,
                worst <= 1e-12,
                note="interior-site identity linking the two spin half-spaces",
            )
        )

        worst = 0.0
        for site in interior:
            p, q = site.p, site.q
            up = s(p, q) > 0
            partners = np.arange(kernel.n_states) ^ (1 << site.bit)
            neighbor_sum = (s(p, q - 1) + s(p, q + 1) + s(p - 1, q) + s(p + 1, q))[up]
            lhs = pi[up]
            rhs = pi[partners[up]] * np.exp(2.0 * beta * neighbor_sum)
            worst = max(worst, float((np.abs(lhs - rhs) / lhs).max()))
        verdicts.append(
            Verdict(
                "spin-flip-pairing",
                worst,
                1e-12,
                1e-12 - worst,
                worst <= 1e-12,
                note="pi(w+) = pi(w-) * exp((2/T) * neighbour sum) at interior sites",
            )
        )

    pair_max = max(a - b - a * b for a in (-1, 1) for b in (-1, 1))
    pair_max_rev = max(-a + b - a * b for a in (-1, 1) for b in (-1, 1))
    verdicts.append(
        Verdict(
            "bond-bracket-maximum",
            float(max(pair_max, pair_max_rev)),
            3.0,
            0.0 if pair_max == pair_max_rev == 3 else -1.0,
            pair_max == 3 and pair_max_rev == 3,
        )
    )

    if n >= 3:
        limit = 3 * n + 1
        q = p = 2  # representative boundary/interior offsets (the only ones at n=3)
        expr_corner = 2.0 * (1.0 - s(n, 2))
        for i in range(1, n):
            expr_corner = expr_corner + s(i, 1) - s(i, 2) - s(i, 1) * s(i, 2)
        shared_col = np.zeros(kernel.n_states)
        for i in range(2, n + 1):
            shared_col = shared_col + s(i, q - 1) - s(i, q) - s(i, q - 1) * s(i, q)
        expr_col_pos = -2.0 * (s(2, q) + s(1, q + 1)) + shared_col
        expr_col_neg = 2.0 * (1.0 + s(1, q - 1)) + shared_col
        expr_interior = -2.0 * (s(p + 1, q) + s(p, q + 1))
        for i in range(1, p):
            expr_interior = expr_interior + (
                -s(i, q) + s(i, q + 1) - s(i, q) * s(i, q + 1)
            )
        for i in range(p + 1, n + 1):
            expr_interior = expr_interior + (
                s(i, q - 1) - s(i, q) - s(i, q - 1) * s(i, q)
            )
        observed = max(
            float(expr.max())
            for expr in (expr_corner, expr_col_pos, expr_col_neg, expr_interior)
        )
        verdicts.append(
            Verdict(
                "worst-case-exponents",
                observed,
                float(limit),
                float(limit) - observed,
                observed <= limit,
                note="class-bound exponents stay below 3n+1 over all configurations",
            )
        )
    return verdicts


def spectrum_verdicts(kernel: TransitionKernel, spectrum: Spectrum) -> list[Verdict]:
    beta0_err = abs(spectrum.beta0 - 1.0)
    trace = float(kernel.holding.sum())
    eig_sum = float(spectrum.eigenvalues.sum())
    trace_err = abs(eig_sum - trace)
    gap = 1.0 - spectrum.beta1
    return [
        Verdict("top-eigenvalue-is-one", spectrum.beta0, 1.0, 1e-10 - beta0_err,
                beta0_err <= 1e-10),
        Verdict("eigenvalues-in-open-interval", spectrum.beta_min, -1.0,
                spectrum.beta_min + 1.0, bool(spectrum.beta_min > -1.0)),
        Verdict("eigenvalue-sum-matches-trace", eig_sum, trace, 1e-8 - trace_err,
                trace_err <= 1e-8),
        Verdict("strict-spectral-gap", spectrum.beta1, 1.0, gap - 1e-12,
                gap > 1e-12),
    ]


def bound_verdicts(
    kernel: TransitionKernel,
    loads: EdgeLoadTable,
    spectrum: Spectrum | None,
) -> tuple[list[Verdict], bnd.KappaResult]:
    n, T = kernel.n, kernel.T
    result = bnd.kappa_exact(kernel, loads)
    kappa = result.kappa
    verdicts = [
        Verdict("kappa-at-least-one", kappa, 1.0, kappa - 1.0, kappa >= 1.0)
    ]

    if spectrum is not None:
        margin = (1.0 - spectrum.beta1) - 1.0 / kappa
        verdicts.append(
            Verdict(
                "beta1-below-congestion-bound",
                spectrum.beta1,
                bnd.beta1_bound_from_kappa(kappa),
                margin,
                margin >= -1e-9,
            )
        )
        bmin_margin = spectrum.beta_min - bnd.ingrassia_beta_min_bound(T)
        verdicts.append(
            Verdict(
                "beta-min-above-ingrassia-bound",
                spectrum.beta_min,
                bnd.ingrassia_beta_min_bound(T),
                bmin_margin,
                bmin_margin >= -1e-9,
            )
        )

    gap_margin = 1.0 / kappa - bnd.geometric_gap(n, T)
    verdicts.append(
        Verdict(
            "congestion-bound-below-closed-form",
            bnd.beta1_bound_from_kappa(kappa),
            bnd.geometric_beta1_bound(n, T),
            gap_margin,
            gap_margin >= -1e-9,
        )
    )

    log_margin = bnd.log_kappa_ceiling(n, T) - math.log(kappa)
    verdicts.append(
        Verdict(
            "kappa-below-closed-form-ceiling",
            kappa,
            bnd.kappa_ceiling(n, T),
            log_margin,
            log_margin >= -1e-9,
            note="margin reported in the log domain",
        )
    )

    for category in sorted(result.class_maxima):
        observed = result.class_maxima[category]
        bound_value = max(
            bnd.class_congestion_bound(kernel, Site.from_linear(k, n))
            for k in range(1, kernel.n_sites + 1)
            if Site.from_linear(k, n).category == category
        )
        rel_margin = (bound_value - observed) / bound_value
        verdicts.append(
            Verdict(
                f"class-bound-dominates:{category}",
                observed,
                bound_value,
                rel_margin,
                rel_margin >= -1e-9,
            )
        )
    return verdicts, result


def tv_verdicts(
    kernel: TransitionKernel, spectrum: Spectrum, horizon: int
) -> tuple[list[Verdict], np.ndarray]:
    tv = tv_decay_all_starts(kernel, horizon)
    exact = verify_tv_decay(kernel, spectrum.beta_star, horizon, tv=tv)
    closed = verify_tv_decay(
        kernel,
        bnd.geometric_beta_star_bound(kernel.n, kernel.T),
        horizon,
        tv=tv,
    )
    verdicts = [
        Verdict(
            "tv-decay-exact-beta-star",
            -exact.worst_margin,
            0.0,
            exact.worst_margin,
            exact.passed,
            note=f"worst start {exact.worst_state}, step {exact.worst_step}",
        ),
        Verdict(
            "tv-decay-closed-form-beta-star",
            -closed.worst_margin,
            0.0,
            closed.worst_margin,
            closed.passed,
            note=f"worst start {closed.worst_state}, step {closed.worst_step}",
        ),
    ]
    return verdicts, tv


def comparison_verdict(T_grid) -> Verdict:
    rows = bnd.comparison_curves(T_grid)
    worst = min(f - g for _, f, g in rows)
    return Verdict(
        "penalty-factor-ordering",
        worst,
        0.0,
        worst,
        worst >= 0.0,
        note="f(T) >= g(T) across the grid",
    )


def partition_ceiling_flag(n: int, T: float) -> dict:
    """Exact Z against the Ingrassia-style partition ceiling.

    The ceiling is expected to fail for this model's unnormalized
    Hamiltonian at finite T; the flag records whether it did.
    """
    exact = partition_function(n, T)
    ceiling = bnd.ingrassia_partition_ceiling(n, T)
    return {
        "Z_exact": exact,
        "ceiling": ceiling,
        "violated": bool(exact > ceiling * (1.0 + 1e-12)),
    }


@dataclass
class VerificationReport:
    """Verdict table produced by the `verify` command."""

    n: int
    T: float
    horizon: int
    seed: int
    samples: int
    verdicts: list = field(default_factory=list)
    tv: np.ndarray | None = None
    spectrum: Spectrum | None = None

    @property
    def all_passed(self) -> bool:
        return all(v.passed for v in self.verdicts)

    def to_dict(self) -> dict:
        return {
            "schema": 1,
            "n": self.n,
            "T": self.T,
            "horizon": self.horizon,
            "seed": self.seed,
            "samples": self.samples,
            "verdicts": [v.to_dict() for v in self.verdicts],
            "all_passed": self.all_passed,
        }


def run_verification(
    n: int,
    T: float,
    horizon: int = 50,
    seed: int = 0,
    samples: int = 100000,
    ceiling: int | None = None,
) -> VerificationReport:
    """Invariant suite behind `verify`: kernel laws, path laws, spin-space
    identities, spectrum sanity, and the two-sided TV decay checks."""
    kernel = build_kernel(n, T, ceiling)
    loads = accumulate_edge_loads(kernel, ceiling)
    spectrum = exact_spectrum(kernel)
    verdicts = []
    verdicts += kernel_verdicts(kernel)
    verdicts += path_verdicts(kernel, loads, seed=seed, samples=samples)
    verdicts += identity_verdicts(kernel)
    verdicts += spectrum_verdicts(kernel, spectrum)
    sandwich, _ = bound_verdicts(kernel, loads, spectrum)
    verdicts += [v for v in sandwich if not v.name.startswith("class-bound")]
    tv_checks, tv = tv_verdicts(kernel, spectrum, horizon)
    verdicts += tv_checks
    return VerificationReport(
        n=n,
        T=T,
        horizon=horizon,
        seed=seed,
        samples=samples,
        verdicts=verdicts,
        tv=tv,
        spectrum=spectrum,
    )


def build_bounds_report(
    n: int,
    T: float,
    formulas_only: bool = False,
    horizon: int | None = None,
    ceiling: int | None = None,
) -> bnd.BoundsReport:
    """Assemble the full bounds report; exact quantities only when the
    lattice is enumerable and formulas_only is off."""
    closed_form = {
        "beta1_bound": bnd.geometric_beta1_bound(n, T),
        "gap": bnd.geometric_gap(n, T),
        "log_gap": bnd.log_geometric_gap(n, T),
        "beta_star_bound": bnd.geometric_beta_star_bound(n, T),
        "ingrassia_beta_min": bnd.ingrassia_beta_min_bound(T),
        "ingrassia_beta1": bnd.ingrassia_beta1_bound(n, T),
        "ingrassia_gap": bnd.ingrassia_gap(n, T),
        "log_ingrassia_gap": bnd.log_ingrassia_gap(n, T),
        "log_kappa_ceiling": bnd.log_kappa_ceiling(n, T),
        "f": bnd.comparison_f(T),
        "g": bnd.comparison_g(T),
    }
    flags = {"beta_star_chain_holds": bnd.beta_star_chain_holds(n, T)}
    verdicts = [comparison_verdict([T])]

    if formulas_only:
        return bnd.BoundsReport(
            n=n,
            T=T,
            formulas_only=True,
            closed_form=closed_form,
            exact=None,
            verdicts=verdicts,
            flags=flags,
        )

    kernel = build_kernel(n, T, ceiling)
    loads = accumulate_edge_loads(kernel, ceiling)
    spectrum = exact_spectrum(kernel)
    bound_checks, kappa_result = bound_verdicts(kernel, loads, spectrum)
    verdicts += spectrum_verdicts(kernel, spectrum)
    verdicts += bound_checks
    partition_flag = partition_ceiling_flag(n, T)
    flags["partition_ceiling_violated"] = partition_flag["violated"]
    exact = {
        "Z": partition_flag["Z_exact"],
        "partition_ceiling": partition_flag["ceiling"],
        "kappa": kappa_result.to_dict(),
        "beta1_from_kappa": bnd.beta1_bound_from_kappa(kappa_result.kappa),
        "class_bounds": bnd.class_bounds_by_category(kernel),
        "spectrum": {
            "beta1": spectrum.beta1,
            "beta_min": spectrum.beta_min,
            "beta_star": spectrum.beta_star,
        },
    }
    return bnd.BoundsReport(
        n=n,
        T=T,
        formulas_only=False,
        closed_form=closed_form,
        exact=exact,
        verdicts=verdicts,
        flags=flags,
    )
