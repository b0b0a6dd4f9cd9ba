"""Exact spectrum of the Gibbs kernel and total-variation decay checks.

Reversibility makes S = diag(pi)^1/2 P diag(pi)^-1/2 symmetric with the
same eigenvalues as P, so a dense symmetric eigensolver recovers the
full spectrum exactly for enumerable lattices.  Larger lattices can
still obtain the extremal eigenvalues through a sparse iterative solver.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sparse
import scipy.sparse.linalg as sparse_linalg

from .kernel import DEFAULT_DENSE_CEILING, TransitionKernel

SYMMETRY_TOLERANCE = 1e-10


class ReversibilityError(RuntimeError):
    """Symmetrized kernel is not symmetric: detailed balance is broken upstream."""


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Eigenvalues of the kernel, sorted descending."""

    eigenvalues: np.ndarray

    @property
    def beta0(self) -> float:
        return float(self.eigenvalues[0])

    @property
    def beta1(self) -> float:
        return float(self.eigenvalues[1])

    @property
    def beta_min(self) -> float:
        return float(self.eigenvalues[-1])

    @property
    def beta_star(self) -> float:
        return max(self.beta1, abs(self.beta_min))

    def multiplicities(self, tol: float = 1e-8) -> list[tuple[float, int]]:
        """Distinct eigenvalues with multiplicities, clustering within tol."""
        out: list[tuple[float, int]] = []
        for value in self.eigenvalues:
            value = float(value)
            if out and abs(out[-1][0] - value) <= tol:
                out[-1] = (out[-1][0], out[-1][1] + 1)
            else:
                out.append((value, 1))
        return out


def symmetrized_kernel(kernel: TransitionKernel) -> np.ndarray:
    """Dense symmetrization of P; raises if the residual betrays a
    detailed-balance violation."""
    P = kernel.dense()
    root = np.sqrt(kernel.pi)
    S = root[:, None] * P / root[None, :]
    residual = float(np.abs(S - S.T).max())
    if residual > SYMMETRY_TOLERANCE:
        raise ReversibilityError(
            f"symmetrization residual {residual:.3e} exceeds {SYMMETRY_TOLERANCE}"
        )
    return 0.5 * (S + S.T)


def exact_spectrum(
    kernel: TransitionKernel, dense_ceiling: int = DEFAULT_DENSE_CEILING
) -> Spectrum:
    """Full eigenvalue list via dense symmetric eigendecomposition."""
    if kernel.n_states > dense_ceiling:
        raise ValueError(
            f"dense spectrum needs {kernel.n_states} states, above the dense "
            f"ceiling {dense_ceiling}; use extremal_eigenvalues instead"
        )
    S = symmetrized_kernel(kernel)
    eigenvalues = np.linalg.eigvalsh(S)[::-1].copy()
    return Spectrum(eigenvalues=eigenvalues)


def _sparse_symmetrized(kernel: TransitionKernel) -> sparse.csr_matrix:
    n_states, n_sites = kernel.n_states, kernel.n_sites
    root = np.sqrt(kernel.pi)
    states = np.arange(n_states, dtype=np.int64)
    rows = [states] * (n_sites + 1)
    cols = [kernel.flip_targets(k) for k in range(1, n_sites + 1)] + [states]
    vals = [
        root * kernel.flip_probs[:, k - 1] / root[kernel.flip_targets(k)]
        for k in range(1, n_sites + 1)
    ] + [kernel.holding]
    S = sparse.coo_matrix(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
        shape=(n_states, n_states),
    ).tocsr()
    residual = abs(S - S.T).max()
    if residual > SYMMETRY_TOLERANCE:
        raise ReversibilityError(
            f"symmetrization residual {residual:.3e} exceeds {SYMMETRY_TOLERANCE}"
        )
    return S


def extremal_eigenvalues(kernel: TransitionKernel) -> tuple[float, float]:
    """(beta1, beta_min) by sparse iteration; no full spectrum needed."""
    S = _sparse_symmetrized(kernel)
    top = np.sort(sparse_linalg.eigsh(S, k=2, which="LA", return_eigenvectors=False))
    bottom = sparse_linalg.eigsh(S, k=1, which="SA", return_eigenvectors=False)
    return float(top[0]), float(bottom[0])


def tv_distance(row: np.ndarray, pi: np.ndarray, tol: float = 1e-10) -> float:
    """Total-variation distance, half the L1 distance of the two vectors."""
    row = np.asarray(row, dtype=float)
    pi = np.asarray(pi, dtype=float)
    if row.shape != pi.shape:
        raise ValueError("probability vectors must have equal length")
    for name, vec in (("row", row), ("pi", pi)):
        total = float(vec.sum())
        if abs(total - 1.0) > tol or (vec < -tol).any():
            raise ValueError(f"{name} is not a probability vector (sum={total})")
    return 0.5 * float(np.abs(row - pi).sum())


def power_rows(kernel: TransitionKernel, start: int, horizon: int) -> np.ndarray:
    """Rows of P^k from a point mass at `start`, k = 0..horizon."""
    if horizon < 0:
        raise ValueError("horizon must be non-negative")
    P = kernel.dense()
    rows = np.empty((horizon + 1, kernel.n_states))
    row = np.zeros(kernel.n_states)
    row[start] = 1.0
    rows[0] = row
    for k in range(1, horizon + 1):
        row = row @ P
        rows[k] = row
    return rows


def tv_decay_all_starts(kernel: TransitionKernel, horizon: int) -> np.ndarray:
    """tv(P^k(x, .), pi) for every start x and k = 0..horizon, shape
    (horizon+1, n_states)."""
    P = kernel.dense()
    M = np.eye(kernel.n_states)
    pi = kernel.pi
    out = np.empty((horizon + 1, kernel.n_states))
    for k in range(horizon + 1):
        out[k] = 0.5 * np.abs(M - pi[None, :]).sum(axis=1)
        if k < horizon:
            M = M @ P
    return out


@dataclass(frozen=True, eq=False)
class TvDecayCheck:
    """Worst margins of the two-sided decay inequality over all (x, k)."""

    horizon: int
    beta_star: float
    worst_margin: float        # min over (x, k) of rhs - lhs
    worst_state: int
    worst_step: int
    passed: bool
    tv: np.ndarray             # (horizon+1, n_states) table, reusable for reports


def verify_tv_decay(
    kernel: TransitionKernel,
    beta_star: float,
    horizon: int,
    tol: float = 1e-10,
    tv: np.ndarray | None = None,
) -> TvDecayCheck:
    """Check 4*tv^2 <= ((1-pi(x))/pi(x)) * beta_star^(2k) for all x, k.

    `beta_star` may be the exact value or any upper bound for it; the
    inequality must hold either way.
    """
    if tv is None:
        tv = tv_decay_all_starts(kernel, horizon)
    pi = kernel.pi
    prefactor = (1.0 - pi) / pi
    worst = (math.inf, -1, -1)
    for k in range(horizon + 1):
        margins = prefactor * beta_star ** (2 * k) + tol - 4.0 * tv[k] ** 2
        idx = int(np.argmin(margins))
        if margins[idx] < worst[0]:
            worst = (float(margins[idx]), idx, k)
    return TvDecayCheck(
        horizon=horizon,
        beta_star=beta_star,
        worst_margin=worst[0],
        worst_state=worst[1],
        worst_step=worst[2],
        passed=worst[0] >= 0.0,
        tv=tv,
    )


def fitted_decay_rate(
    kernel: TransitionKernel,
    start: int,
    k_lo: int = 20,
    k_hi: int = 50,
    tv: np.ndarray | None = None,
) -> float:
    """Geometric rate of tv(k) fitted on log scale over k in [k_lo, k_hi]."""
    if tv is None:
        tv = tv_decay_all_starts(kernel, k_hi)
    ks = np.arange(k_lo, k_hi + 1)
    values = tv[k_lo : k_hi + 1, start]
    if (values <= 0).any():
        raise ValueError("tv reached zero inside the fit window")
    slope = np.polyfit(ks, np.log(values), 1)[0]
    return float(math.exp(slope))
