"""Canonical paths between configurations and exact edge-load accounting.

The path from x to y flips the differing sites one at a time in
increasing linear order, so consecutive vertices differ at exactly one
site and the path length equals the Hamming distance.  A directed edge
(z, k) is traversed by precisely the ordered pairs (x, y) where x agrees
with z on linear sites >= k (sites below k free) and y agrees with the
flipped configuration on sites <= k (sites above k free): 2^(n*n - 1)
pairs for every edge.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .kernel import DirectedEdge, TransitionKernel
from .model import Site, SpinConfiguration, require_enumerable


@dataclass(frozen=True)
class CanonicalPath:
    """The unique chosen path between an ordered pair of configurations."""

    x: SpinConfiguration
    y: SpinConfiguration
    sites: tuple[int, ...]  # linear indices flipped, ascending

    @property
    def length(self) -> int:
        return len(self.sites)

    @property
    def vertices(self) -> tuple[SpinConfiguration, ...]:
        out = [self.x]
        for k in self.sites:
            out.append(out[-1].flip_linear(k))
        return tuple(out)

    @property
    def edges(self) -> tuple[DirectedEdge, ...]:
        out = []
        v = self.x
        for k in self.sites:
            out.append(DirectedEdge(v, Site.from_linear(k, v.n)))
            v = v.flip_linear(k)
        return tuple(out)


def canonical_path(x: SpinConfiguration, y: SpinConfiguration) -> CanonicalPath:
    """Deterministic path flipping the differing sites in scan order."""
    if x.n != y.n:
        raise ValueError("size mismatch between configurations")
    return CanonicalPath(x, y, x.differing_sites(y))


def pairs_through_edge(
    edge: DirectedEdge, ceiling: int | None = None
) -> Iterator[tuple[SpinConfiguration, SpinConfiguration]]:
    """Ordered pairs (x, y) whose canonical path traverses the edge."""
    n = edge.minus.n
    n_states = require_enumerable(n, ceiling)
    k = edge.site.linear
    z = edge.minus.bits
    zp = edge.plus.bits
    low_mask = (1 << (k - 1)) - 1
    upto_mask = (1 << k) - 1
    x_high = z & ~low_mask & (n_states - 1)
    y_low = zp & upto_mask
    for low in range(1 << (k - 1)):
        x = SpinConfiguration(n, x_high | low)
        for high in range(1 << (n * n - k)):
            yield x, SpinConfiguration(n, y_low | (high << k))


@dataclass(frozen=True, eq=False)
class EdgeLoadTable:
    """Per-directed-edge accumulation of |path| * pi(x) * pi(y).

    loads[z, k-1] and counts[z, k-1] refer to the edge flipping linear
    site k out of state z.
    """

    n: int
    loads: np.ndarray
    counts: np.ndarray

    def load(self, edge: DirectedEdge) -> float:
        return float(self.loads[edge.minus.bits, edge.site.bit])

    def count(self, edge: DirectedEdge) -> int:
        return int(self.counts[edge.minus.bits, edge.site.bit])

    def total(self) -> float:
        return float(self.loads.sum())


def _popcounts(n_states: int) -> np.ndarray:
    return np.bitwise_count(np.arange(n_states, dtype=np.uint64)).astype(np.int64)


def accumulate_edge_loads(
    kernel: TransitionKernel, ceiling: int | None = None
) -> EdgeLoadTable:
    """Edge loads via the per-edge pair characterization.

    Contributions are reduced with exact compensated summation so that
    downstream 1e-12 comparisons stay honest.
    """
    n = kernel.n
    n_states = require_enumerable(n, ceiling)
    n_sites = kernel.n_sites
    pi = kernel.pi
    pop = _popcounts(n_states)
    loads = np.empty((n_states, n_sites))
    counts = np.empty((n_states, n_sites), dtype=np.int64)
    for k in range(1, n_sites + 1):
        low_mask = (1 << (k - 1)) - 1
        upto_mask = (1 << k) - 1
        lows = np.arange(1 << (k - 1), dtype=np.int64)
        highs = np.arange(1 << (n_sites - k), dtype=np.int64) << k
        for z in range(n_states):
            xs = (z & ~low_mask & (n_states - 1)) | lows
            ys = ((z ^ (1 << (k - 1))) & upto_mask) | highs
            lengths = pop[xs[:, None] ^ ys[None, :]]
            terms = pi[xs][:, None] * pi[ys][None, :] * lengths
            loads[z, k - 1] = math.fsum(terms.ravel().tolist())
            counts[z, k - 1] = terms.size
    return EdgeLoadTable(n=n, loads=loads, counts=counts)


def edge_loads_by_walking(
    kernel: TransitionKernel, ceiling: int | None = None
) -> EdgeLoadTable:
    """Definition-level accumulator: walk every ordered pair's path.

    Quadratic in the state count; kept as the independent cross-check
    for accumulate_edge_loads.
    """
    n = kernel.n
    n_states = require_enumerable(n, ceiling)
    n_sites = kernel.n_sites
    pi = kernel.pi
    loads = [[[] for _ in range(n_sites)] for _ in range(n_states)]
    counts = np.zeros((n_states, n_sites), dtype=np.int64)
    for x in range(n_states):
        for y in range(n_states):
            diff = x ^ y
            if diff == 0:
                continue
            contribution = diff.bit_count() * pi[x] * pi[y]
            v = x
            for b in range(n_sites):
                if (diff >> b) & 1:
                    loads[v][b].append(contribution)
                    counts[v, b] += 1
                    v ^= 1 << b
    summed = np.array(
        [[math.fsum(cell) for cell in row] for row in loads]
    )
    return EdgeLoadTable(n=n, loads=summed, counts=counts)


def length_weighted_pair_sum(kernel: TransitionKernel, power: int = 1) -> float:
    """Sum over ordered pairs of d(x, y)^power * pi(x) * pi(y).

    With power=2 this equals the total of all edge loads, since a path
    of length m contributes m * pi(x) * pi(y) to each of its m edges.
    """
    n_states = kernel.n_states
    pop = _popcounts(n_states)
    pi = kernel.pi
    states = np.arange(n_states, dtype=np.int64)
    total = 0.0
    for x in range(n_states):
        lengths = pop[x ^ states].astype(float)
        total += float(pi[x] * (pi * lengths ** power).sum())
    return total
