"""Matplotlib rendering of report figures next to the delimited outputs."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np


def comparison_figure(rows: list[dict], n_list: list[int], path: str | Path) -> Path:
    """f/g curves and the log-gap curves of the two bounds per lattice side."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    Ts = [row["T"] for row in rows]
    fig, (ax_fg, ax_gap) = plt.subplots(1, 2, figsize=(11, 4.2))

    ax_fg.plot(Ts, [row["f"] for row in rows], label="f(T) = exp(4/T)", color="tab:blue")
    ax_fg.plot(
        Ts,
        [row["g"] for row in rows],
        label="g(T) = 2/(1 + exp(-1/(2T)))",
        color="tab:orange",
    )
    ax_fg.set_xlabel("T")
    ax_fg.set_yscale("log")
    ax_fg.set_title("per-step penalty factors")
    ax_fg.legend()
    ax_fg.grid(True, alpha=0.3)

    for n in n_list:
        ax_gap.plot(
            Ts,
            [row[f"log_geometric_gap_n{n}"] / np.log(10.0) for row in rows],
            label=f"canonical-path gap, n={n}",
        )
        ax_gap.plot(
            Ts,
            [row[f"log_ingrassia_gap_n{n}"] / np.log(10.0) for row in rows],
            linestyle="--",
            label=f"Ingrassia gap, n={n}",
        )
    ax_gap.set_xlabel("T")
    ax_gap.set_ylabel("log10 spectral-gap lower bound")
    ax_gap.set_title("gap bounds")
    if n_list:
        ax_gap.legend(fontsize=8)
    ax_gap.grid(True, alpha=0.3)

    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def spectrum_figure(eigenvalues: np.ndarray, n: int, T: float, path: str | Path) -> Path:
    """Sorted eigenvalues of the kernel."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig, ax = plt.subplots(figsize=(7, 4.2))
    ax.plot(np.arange(len(eigenvalues)), eigenvalues, ".", markersize=4)
    ax.axhline(0.0, color="grey", linewidth=0.8)
    ax.set_xlabel("eigenvalue index (descending)")
    ax.set_ylabel("eigenvalue")
    ax.set_title(f"Gibbs kernel spectrum, n={n}, T={T}")
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def tv_decay_figure(
    tv: np.ndarray,
    bound_exact: np.ndarray,
    bound_closed_form: np.ndarray,
    worst_state: int,
    path: str | Path,
) -> Path:
    """Worst-start TV decay against both decay envelopes."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    ks = np.arange(tv.shape[0])
    fig, ax = plt.subplots(figsize=(7, 4.2))
    ax.semilogy(ks, np.maximum(tv.max(axis=1), 1e-300), label="max over starts tv(k)")
    ax.semilogy(
        ks, np.maximum(tv[:, worst_state], 1e-300), ":", label=f"start {worst_state}"
    )
    ax.semilogy(ks, bound_exact, "--", label="envelope, exact beta*")
    ax.semilogy(ks, bound_closed_form, "-.", label="envelope, closed-form beta*")
    ax.set_xlabel("k")
    ax.set_ylabel("total-variation distance")
    ax.legend(fontsize=8)
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def class_bounds_figure(
    class_maxima: dict, class_bounds: dict, n: int, T: float, path: str | Path
) -> Path:
    """Observed per-class congestion maxima against the per-class bounds."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    categories = sorted(class_bounds)
    observed = [class_maxima[c] for c in categories]
    bound = [class_bounds[c] for c in categories]
    xs = np.arange(len(categories))
    fig, ax = plt.subplots(figsize=(8, 4.2))
    ax.bar(xs - 0.2, observed, width=0.4, label="max load(e)/Q(e)")
    ax.bar(xs + 0.2, bound, width=0.4, label="class bound")
    ax.set_yscale("log")
    ax.set_xticks(xs)
    ax.set_xticklabels(categories, rotation=30, ha="right", fontsize=8)
    ax.set_title(f"edge congestion by site class, n={n}, T={T}")
    ax.legend()
    ax.grid(True, axis="y", alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path
