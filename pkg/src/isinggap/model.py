"""2-D Ising model on the free-boundary square lattice.

Sites are addressed as (p, q) with p the column and q the row, both in
1..n.  The linear scan order is row-major: site (p, q) has linear index
k = (q-1)*n + p, and a configuration is stored as an integer bit mask
whose bit k-1 encodes the spin at linear site k (bit 1 <-> spin +1,
bit 0 <-> spin -1).  The energy convention is

    H(x) = sum of x_u * x_v over nearest-neighbour bonds (no wraparound)

and the Gibbs measure puts weight exp(H(x)/T), so aligned configurations
are the heaviest.  Infinite temperature is supported exactly through
T = math.inf (1/T == 0.0 in IEEE arithmetic).
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from typing import Iterator

import numpy as np

DEFAULT_STATE_CEILING = 2 ** 16
STATE_CEILING_ENV = "ISINGGAP_MAX_STATES"

SITE_CATEGORIES = (
    "corner-11",
    "corner-n1",
    "corner-1n",
    "corner-nn",
    "boundary-row1",
    "boundary-rown",
    "boundary-col1",
    "boundary-coln",
    "interior",
)


class LatticeTooLargeError(ValueError):
    """Raised when an exact-enumeration operation exceeds the state ceiling."""

    def __init__(self, n: int, ceiling: int):
        self.n = n
        self.ceiling = ceiling
        super().__init__(
            f"lattice n={n} has 2^{n * n} states, above the enumeration "
            f"ceiling {ceiling}"
        )


def state_ceiling() -> int:
    """Enumeration ceiling; override with the ISINGGAP_MAX_STATES env var."""
    raw = os.environ.get(STATE_CEILING_ENV)
    if raw is None:
        return DEFAULT_STATE_CEILING
    value = int(raw)
    if value < 2:
        raise ValueError(f"{STATE_CEILING_ENV} must be at least 2, got {value}")
    return value


def require_enumerable(n: int, ceiling: int | None = None) -> int:
    """Return 2^(n*n) after checking it against the enumeration ceiling."""
    if ceiling is None:
        ceiling = state_ceiling()
    n_states = 2 ** (n * n)
    if n_states > ceiling:
        raise LatticeTooLargeError(n, ceiling)
    return n_states


def validate_side(n: int) -> None:
    if not isinstance(n, (int, np.integer)) or n < 1:
        raise ValueError(f"lattice side must be a positive integer, got {n!r}")


def inverse_temperature(T: float) -> float:
    """1/T with the exact infinite-temperature limit (T=inf -> 0.0)."""
    if isinstance(T, bool) or not isinstance(T, (int, float, np.floating)):
        raise ValueError(f"temperature must be a positive real, got {T!r}")
    T = float(T)
    if math.isnan(T) or T <= 0.0:
        raise ValueError(f"temperature must be positive, got {T}")
    return 0.0 if math.isinf(T) else 1.0 / T


@dataclass(frozen=True)
class Site:
    """Lattice site (p, q): column p, row q, 1-based."""

    p: int
    q: int
    n: int

    def __post_init__(self):
        validate_side(self.n)
        if not (1 <= self.p <= self.n and 1 <= self.q <= self.n):
            raise ValueError(f"site ({self.p},{self.q}) outside 1..{self.n}")

    @classmethod
    def from_linear(cls, k: int, n: int) -> "Site":
        if not (1 <= k <= n * n):
            raise ValueError(f"linear index {k} outside 1..{n * n}")
        q, p = divmod(k - 1, n)
        return cls(p + 1, q + 1, n)

    @property
    def linear(self) -> int:
        return (self.q - 1) * self.n + self.p

    @property
    def bit(self) -> int:
        return self.linear - 1

    @property
    def category(self) -> str:
        return site_category(self.p, self.q, self.n)

    def neighbors(self) -> tuple["Site", ...]:
        out = []
        for dp, dq in ((1, 0), (-1, 0), (0, 1), (0, -1)):
            pp, qq = self.p + dp, self.q + dq
            if 1 <= pp <= self.n and 1 <= qq <= self.n:
                out.append(Site(pp, qq, self.n))
        return tuple(out)


def site_category(p: int, q: int, n: int) -> str:
    """Boundary classification of a site; n=1 degenerates to corner-11."""
    if n == 1:
        return "corner-11"
    first_p, last_p = p == 1, p == n
    first_q, last_q = q == 1, q == n
    if first_p and first_q:
        return "corner-11"
    if last_p and first_q:
        return "corner-n1"
    if first_p and last_q:
        return "corner-1n"
    if last_p and last_q:
        return "corner-nn"
    if first_q:
        return "boundary-row1"
    if last_q:
        return "boundary-rown"
    if first_p:
        return "boundary-col1"
    if last_p:
        return "boundary-coln"
    return "interior"


@dataclass(frozen=True)
class SpinConfiguration:
    """One +-1 spin assignment on the n x n lattice, bit-packed."""

    n: int
    bits: int

    def __post_init__(self):
        validate_side(self.n)
        if not (0 <= self.bits < 2 ** (self.n * self.n)):
            raise ValueError(f"bits {self.bits} out of range for n={self.n}")

    @classmethod
    def all_up(cls, n: int) -> "SpinConfiguration":
        return cls(n, 2 ** (n * n) - 1)

    @classmethod
    def all_down(cls, n: int) -> "SpinConfiguration":
        return cls(n, 0)

    @classmethod
    def from_matrix(cls, matrix) -> "SpinConfiguration":
        """Build from an (n, n) array of +-1 with rows indexed by q."""
        mat = np.asarray(matrix)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise ValueError(f"expected a square matrix, got shape {mat.shape}")
        n = mat.shape[0]
        if not np.all(np.abs(mat) == 1):
            raise ValueError("spins must be +-1")
        bits = 0
        for q in range(1, n + 1):
            for p in range(1, n + 1):
                if mat[q - 1, p - 1] == 1:
                    bits |= 1 << ((q - 1) * n + p - 1)
        return cls(n, bits)

    @property
    def n_sites(self) -> int:
        return self.n * self.n

    def spin_linear(self, k: int) -> int:
        if not (1 <= k <= self.n_sites):
            raise ValueError(f"linear index {k} outside 1..{self.n_sites}")
        return 1 if (self.bits >> (k - 1)) & 1 else -1

    def spin_at(self, p: int, q: int) -> int:
        return self.spin_linear((q - 1) * self.n + p)

    def flip_linear(self, k: int) -> "SpinConfiguration":
        if not (1 <= k <= self.n_sites):
            raise ValueError(f"linear index {k} outside 1..{self.n_sites}")
        return SpinConfiguration(self.n, self.bits ^ (1 << (k - 1)))

    def flip_site(self, site: Site) -> "SpinConfiguration":
        if site.n != self.n:
            raise ValueError("site belongs to a different lattice size")
        return self.flip_linear(site.linear)

    def global_flip(self) -> "SpinConfiguration":
        return SpinConfiguration(self.n, self.bits ^ (2 ** self.n_sites - 1))

    def to_matrix(self) -> np.ndarray:
        mat = np.empty((self.n, self.n), dtype=np.int64)
        for q in range(1, self.n + 1):
            for p in range(1, self.n + 1):
                mat[q - 1, p - 1] = self.spin_at(p, q)
        return mat

    def differing_sites(self, other: "SpinConfiguration") -> tuple[int, ...]:
        """Linear indices where the two configurations differ, ascending."""
        if other.n != self.n:
            raise ValueError("size mismatch between configurations")
        diff = self.bits ^ other.bits
        return tuple(k + 1 for k in range(self.n_sites) if (diff >> k) & 1)


def enumerate_configurations(n: int, ceiling: int | None = None) -> Iterator[SpinConfiguration]:
    n_states = require_enumerable(n, ceiling)
    for bits in range(n_states):
        yield SpinConfiguration(n, bits)


def bonds(n: int) -> list[tuple[int, int]]:
    """Nearest-neighbour bonds as pairs of linear indices (free boundary)."""
    out = []
    for q in range(1, n + 1):
        for p in range(1, n):
            out.append(((q - 1) * n + p, (q - 1) * n + p + 1))
    for p in range(1, n + 1):
        for q in range(1, n):
            out.append(((q - 1) * n + p, q * n + p))
    return out


def energy(x: SpinConfiguration) -> int:
    """Bond-alignment sum H(x); integer in [-2n(n-1), 2n(n-1)]."""
    return sum(x.spin_linear(a) * x.spin_linear(b) for a, b in bonds(x.n))


def hamming_distance(x: SpinConfiguration, y: SpinConfiguration) -> int:
    if x.n != y.n:
        raise ValueError("size mismatch between configurations")
    return (x.bits ^ y.bits).bit_count()


def spin_matrix(n: int, ceiling: int | None = None) -> np.ndarray:
    """(2^(n*n), n*n) array of +-1 spins, row s = configuration with bits s."""
    n_states = require_enumerable(n, ceiling)
    states = np.arange(n_states, dtype=np.int64)
    cols = [2 * ((states >> b) & 1) - 1 for b in range(n * n)]
    return np.stack(cols, axis=1)


def all_energies(n: int, ceiling: int | None = None) -> np.ndarray:
    """Energies of every configuration, indexed by bit mask."""
    spins = spin_matrix(n, ceiling)
    total = np.zeros(spins.shape[0], dtype=np.int64)
    for a, b in bonds(n):
        total += spins[:, a - 1] * spins[:, b - 1]
    return total


def partition_function(n: int, T: float, ceiling: int | None = None) -> float:
    """Z = sum over all configurations of exp(H(x)/T), by enumeration."""
    beta = inverse_temperature(T)
    energies = all_energies(n, ceiling).astype(float)
    shift = energies.max()
    return float(math.exp(beta * shift) * np.exp(beta * (energies - shift)).sum())


def gibbs_distribution(n: int, T: float, ceiling: int | None = None) -> np.ndarray:
    """Stationary vector pi indexed by bit mask (overflow-safe)."""
    beta = inverse_temperature(T)
    energies = all_energies(n, ceiling).astype(float)
    weights = np.exp(beta * (energies - energies.max()))
    return weights / weights.sum()


def stationary_probability(x: SpinConfiguration, T: float, Z: float) -> float:
    """pi(x) = exp(H(x)/T) / Z for a caller-supplied partition function."""
    if Z <= 0:
        raise ValueError(f"partition function must be positive, got {Z}")
    beta = inverse_temperature(T)
    return math.exp(beta * energy(x)) / Z


def conditional_flip_probability(x: SpinConfiguration, site: Site, T: float) -> float:
    """Probability that a single-site resampling at `site` flips the spin.

    Computed from the ratio of Boltzmann weights of the flipped and
    unflipped configurations (the normalising constant cancels).
    """
    if site.n != x.n:
        raise ValueError("site belongs to a different lattice size")
    beta = inverse_temperature(T)
    flipped = x.flip_site(site)
    return 1.0 / (1.0 + math.exp(beta * (energy(x) - energy(flipped))))
