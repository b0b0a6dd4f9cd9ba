"""Single-site Gibbs sampler kernel for the 2-D Ising model.

One step picks a site uniformly among the n^2 sites and resamples its
spin from the conditional distribution given the rest, so

    P(x, y) = (1/n^2) * p_flip(x, site)   when y = x with one site flipped,
    P(x, x) = 1 - sum over sites of the flip terms,

and P(x, y) = 0 otherwise.  The kernel is stored sparsely as the
(2^(n*n), n*n) matrix of single-flip probabilities plus the implied
holding mass; it is immutable after construction and safe to share.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterator

import numpy as np

from .model import (
    Site,
    SpinConfiguration,
    gibbs_distribution,
    inverse_temperature,
    partition_function,
    require_enumerable,
    site_category,
    spin_matrix,
    validate_side,
)

DEFAULT_DENSE_CEILING = 2 ** 9


@dataclass(frozen=True)
class DirectedEdge:
    """Directed single-flip transition (minus -> plus) at `site`."""

    minus: SpinConfiguration
    site: Site

    def __post_init__(self):
        if self.site.n != self.minus.n:
            raise ValueError("site and configuration disagree on lattice size")

    @property
    def plus(self) -> SpinConfiguration:
        return self.minus.flip_site(self.site)

    @property
    def reverse(self) -> "DirectedEdge":
        return DirectedEdge(self.plus, self.site)


@dataclass(frozen=True, eq=False)
class TransitionKernel:
    """Exact Gibbs kernel: stationary vector plus per-site flip probabilities."""

    n: int
    T: float
    pi: np.ndarray          # (n_states,) stationary distribution
    flip_probs: np.ndarray  # (n_states, n_sites); [x, k-1] = P(x, x flipped at k)
    _dense: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def beta(self) -> float:
        return inverse_temperature(self.T)

    @property
    def n_sites(self) -> int:
        return self.n * self.n

    @property
    def n_states(self) -> int:
        return self.pi.shape[0]

    @property
    def holding(self) -> np.ndarray:
        """Diagonal entries, defined so that every row sums to exactly 1."""
        return 1.0 - self.flip_probs.sum(axis=1)

    def flip_targets(self, k: int) -> np.ndarray:
        """State index reached from every state by flipping linear site k."""
        return np.arange(self.n_states, dtype=np.int64) ^ (1 << (k - 1))

    def dense(self, ceiling: int = DEFAULT_DENSE_CEILING) -> np.ndarray:
        """Full transition matrix; guarded by the dense ceiling."""
        if self.n_states > ceiling:
            raise ValueError(
                f"dense kernel for n={self.n} needs {self.n_states} states, "
                f"above the dense ceiling {ceiling}"
            )
        if "P" not in self._dense:
            P = np.zeros((self.n_states, self.n_states))
            rows = np.arange(self.n_states)
            for k in range(1, self.n_sites + 1):
                P[rows, self.flip_targets(k)] = self.flip_probs[:, k - 1]
            P[rows, rows] = self.holding
            self._dense["P"] = P
        return self._dense["P"]

    def entry(self, x: SpinConfiguration, y: SpinConfiguration) -> float:
        """P(x, y) for arbitrary configurations."""
        diff = x.differing_sites(y)
        if len(diff) == 0:
            return float(self.holding[x.bits])
        if len(diff) == 1:
            return float(self.flip_probs[x.bits, diff[0] - 1])
        return 0.0


def build_kernel(n: int, T: float, ceiling: int | None = None) -> TransitionKernel:
    """Construct the exact kernel by enumeration (2^(n*n) states)."""
    validate_side(n)
    beta = inverse_temperature(T)
    n_states = require_enumerable(n, ceiling)
    spins = spin_matrix(n, ceiling)
    pi = gibbs_distribution(n, T, ceiling)

    n_sites = n * n
    flip_probs = np.empty((n_states, n_sites))
    for q in range(1, n + 1):
        for p in range(1, n + 1):
            site = Site(p, q, n)
            local = np.zeros(n_states, dtype=np.int64)
            for nb in site.neighbors():
                local += spins[:, nb.bit]
            s = spins[:, site.bit]
            flip_probs[:, site.bit] = 1.0 / (
                n_sites * (1.0 + np.exp(2.0 * beta * s * local))
            )
    return TransitionKernel(n=n, T=float(T), pi=pi, flip_probs=flip_probs)


def edge_flow(kernel: TransitionKernel, edge: DirectedEdge) -> float:
    """Equilibrium flux Q(e) = pi(minus) * P(minus, plus)."""
    if edge.minus.n != kernel.n:
        raise ValueError("edge belongs to a different lattice size")
    return float(kernel.pi[edge.minus.bits] * kernel.flip_probs[edge.minus.bits, edge.site.bit])


def flow_matrix(kernel: TransitionKernel) -> np.ndarray:
    """Q over all directed edges, indexed [state, site_bit]."""
    return kernel.pi[:, None] * kernel.flip_probs


def enumerate_directed_edges(
    n: int, ceiling: int | None = None
) -> Iterator[DirectedEdge]:
    """All 2^(n*n) * n^2 directed single-flip edges, each exactly once."""
    n_states = require_enumerable(n, ceiling)
    for bits in range(n_states):
        config = SpinConfiguration(n, bits)
        for k in range(1, n * n + 1):
            yield DirectedEdge(config, Site.from_linear(k, n))


# Closed-form flip probabilities by site class.  Only the three canonical
# classes carry explicit bond expressions; the remaining six are reduced to
# a canonical representative by reflecting the lattice, which leaves the
# Gibbs weights unchanged.

_REFLECTIONS = {
    "corner-11": (False, False, False),
    "corner-n1": (True, False, False),
    "corner-1n": (False, True, False),
    "corner-nn": (True, True, False),
    "boundary-col1": (False, False, False),
    "boundary-coln": (True, False, False),
    "boundary-row1": (False, False, True),
    "boundary-rown": (True, False, True),
    "interior": (False, False, False),
}


def _reflect(edge: DirectedEdge, flip_p: bool, flip_q: bool, transpose: bool):
    n = edge.minus.n
    mat = edge.minus.to_matrix()
    p, q = edge.site.p, edge.site.q
    if transpose:
        mat = mat.T
        p, q = q, p
    if flip_p:
        mat = mat[:, ::-1]
        p = n + 1 - p
    if flip_q:
        mat = mat[::-1, :]
        q = n + 1 - q
    return SpinConfiguration.from_matrix(mat), Site(p, q, n)


def closed_form_flip_probability(edge: DirectedEdge, T: float) -> float:
    """P(minus, plus) from the per-class closed form.

    The exponent collects the bonds between the flipped site and its
    existing neighbours: four for interior sites, three on a boundary,
    two in a corner (none for n = 1).  Must agree with the generic
    conditional-ratio computation on every edge.
    """
    beta = inverse_temperature(T)
    n = edge.minus.n
    cat = site_category(edge.site.p, edge.site.q, edge.minus.n)
    config, site = _reflect(edge, *_REFLECTIONS[cat])
    s = config.spin_at
    p, q = site.p, site.q
    if n == 1:
        bond_sum = 0
    elif cat == "interior":
        bond_sum = (
            s(p - 1, q) * s(p, q)
            + s(p, q) * s(p + 1, q)
            + s(p, q - 1) * s(p, q)
            + s(p, q) * s(p, q + 1)
        )
    elif cat.startswith("boundary"):
        # canonical frame: first column, 1 < q < n
        bond_sum = (
            s(1, q - 1) * s(1, q)
            + s(1, q) * s(1, q + 1)
            + s(1, q) * s(2, q)
        )
    else:
        # canonical frame: corner (1, 1)
        bond_sum = s(1, 1) * s(2, 1) + s(1, 1) * s(1, 2)
    return 1.0 / (n * n * (1.0 + math.exp((2.0 * beta) * bond_sum)))


def kernel_entries(kernel: TransitionKernel) -> Iterator[tuple[int, int, float]]:
    """(x, y, P(x, y)) triples over all nonzero entries, diagonal included."""
    for x in range(kernel.n_states):
        yield x, x, float(kernel.holding[x])
        for k in range(1, kernel.n_sites + 1):
            yield x, x ^ (1 << (k - 1)), float(kernel.flip_probs[x, k - 1])


def kernel_header(kernel: TransitionKernel) -> dict:
    """Metadata accompanying a kernel dump."""
    return {
        "n": kernel.n,
        "T": kernel.T,
        "Z": partition_function(kernel.n, kernel.T),
        "n_states": kernel.n_states,
    }
