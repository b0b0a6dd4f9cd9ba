"""Command-line interface: spectrum, bounds, compare, and verify.

Every command writes machine-readable artifacts (deterministic JSON/CSV)
into --out, and report-style commands render a matplotlib figure next to
the delimited output.  Exit codes: 0 all checks passed, 1 at least one
verdict failed, 2 usage error, 3 enumeration/dense ceiling exceeded.
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

import numpy as np

from . import bounds as bnd
from . import checks, figures, report_io
from .kernel import build_kernel, kernel_entries, kernel_header
from .model import LatticeTooLargeError, state_ceiling
from .paths import accumulate_edge_loads
from .spectral import exact_spectrum, extremal_eigenvalues

EXIT_OK = 0
EXIT_VERDICT_FAILED = 1
EXIT_USAGE = 2
EXIT_TOO_LARGE = 3


def parse_temperature(text: str) -> float:
    if text.strip().lower() in ("inf", "infinity"):
        return math.inf
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid temperature {text!r}")
    if math.isnan(value) or value <= 0:
        raise argparse.ArgumentTypeError(f"temperature must be positive, got {text}")
    return value


def parse_grid(text: str) -> list[float]:
    text = text.strip()
    if not text:
        raise argparse.ArgumentTypeError("temperature grid is empty")
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise argparse.ArgumentTypeError(
                f"grid must be start:stop:step, got {text!r}"
            )
        start, stop, step = (float(p) for p in parts)
        if step <= 0 or start <= 0 or stop < start:
            raise argparse.ArgumentTypeError(f"bad grid range {text!r}")
        count = int(round((stop - start) / step))
        grid = [start + i * step for i in range(count + 1) if start + i * step <= stop + 1e-12]
    else:
        grid = [parse_temperature(part) for part in text.split(",") if part.strip()]
    if not grid:
        raise argparse.ArgumentTypeError("temperature grid is empty")
    return grid


def parse_int_list(text: str) -> list[int]:
    try:
        values = [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid integer list {text!r}")
    if not values or any(v < 1 for v in values):
        raise argparse.ArgumentTypeError(f"lattice sides must be positive: {text!r}")
    return values


def _print_verdicts(verdicts) -> None:
    for v in verdicts:
        status = "PASS" if v.passed else "FAIL"
        print(f"{status}  {v.name}  margin={v.margin:.6g}")


def cmd_spectrum(args) -> int:
    out = Path(args.out)
    kernel = build_kernel(args.n, args.T, args.ceiling)
    if args.extremal:
        beta1, beta_min = extremal_eigenvalues(kernel)
        payload = {
            "schema": 1,
            "n": args.n,
            "T": args.T,
            "mode": "extremal",
            "beta1": beta1,
            "beta_min": beta_min,
            "beta_star": max(beta1, abs(beta_min)),
        }
        path = report_io.write_json(out / "spectrum.json", payload)
        print(f"wrote {path}")
        return EXIT_OK

    try:
        spectrum = exact_spectrum(kernel)
    except ValueError as exc:
        print(
            report_io.dumps(
                {"schema": 1, "error": "dense-spectrum-too-large", "detail": str(exc)}
            ),
            end="",
        )
        return EXIT_TOO_LARGE
    payload = {
        "schema": 1,
        "n": args.n,
        "T": args.T,
        "mode": "dense",
        "n_states": kernel.n_states,
        "beta1": spectrum.beta1,
        "beta_min": spectrum.beta_min,
        "beta_star": spectrum.beta_star,
        "multiplicities": [[v, c] for v, c in spectrum.multiplicities()],
    }
    wrote = [report_io.write_json(out / "spectrum.json", payload)]
    wrote.append(
        report_io.write_csv(
            out / "eigenvalues.csv",
            ["index", "eigenvalue"],
            [(i, float(v)) for i, v in enumerate(spectrum.eigenvalues)],
        )
    )
    if args.dump_kernel:
        wrote.append(
            report_io.write_csv(
                out / "kernel.csv",
                ["x", "y", "probability"],
                kernel_entries(kernel),
            )
        )
        wrote.append(
            report_io.write_json(
                out / "kernel.json", {"schema": 1, **kernel_header(kernel)}
            )
        )
    if args.figure:
        wrote.append(
            figures.spectrum_figure(
                spectrum.eigenvalues, args.n, args.T, out / "spectrum.png"
            )
        )
    for path in wrote:
        print(f"wrote {path}")
    return EXIT_OK


def cmd_bounds(args) -> int:
    out = Path(args.out)
    report = checks.build_bounds_report(
        args.n, args.T, formulas_only=args.formulas_only, ceiling=args.ceiling
    )
    wrote = [report_io.write_json(out / "bounds_report.json", report.to_dict())]
    if not args.formulas_only:
        if args.dump_loads:
            kernel = build_kernel(args.n, args.T, args.ceiling)
            loads = accumulate_edge_loads(kernel, args.ceiling)
            rows = (
                (state, k, float(loads.loads[state, k - 1]), int(loads.counts[state, k - 1]))
                for state in range(kernel.n_states)
                for k in range(1, kernel.n_sites + 1)
            )
            wrote.append(
                report_io.write_csv(
                    out / "edge_loads.csv", ["state", "site", "load", "count"], rows
                )
            )
        if args.figure:
            wrote.append(
                figures.class_bounds_figure(
                    report.exact["kappa"]["class_maxima"],
                    report.exact["class_bounds"],
                    args.n,
                    args.T,
                    out / "class_bounds.png",
                )
            )
    _print_verdicts(report.verdicts)
    for path in wrote:
        print(f"wrote {path}")
    return EXIT_OK if report.all_passed else EXIT_VERDICT_FAILED


def cmd_compare(args) -> int:
    out = Path(args.out)
    grid = args.T_grid
    n_list = args.n_list
    rows = []
    for T in grid:
        row = {
            "T": T,
            "f": bnd.comparison_f(T),
            "g": bnd.comparison_g(T),
            "crossover_n": bnd.smallest_n_geometric_beats_ingrassia(
                T, args.crossover_n_max
            ),
        }
        for n in n_list:
            row[f"geometric_gap_n{n}"] = bnd.geometric_gap(n, T)
            row[f"log_geometric_gap_n{n}"] = bnd.log_geometric_gap(n, T)
            row[f"ingrassia_gap_n{n}"] = bnd.ingrassia_gap(n, T)
            row[f"log_ingrassia_gap_n{n}"] = bnd.log_ingrassia_gap(n, T)
        rows.append(row)

    header = ["T", "f", "g", "crossover_n"]
    for n in n_list:
        header += [
            f"geometric_gap_n{n}",
            f"log_geometric_gap_n{n}",
            f"ingrassia_gap_n{n}",
            f"log_ingrassia_gap_n{n}",
        ]
    csv_rows = [
        [row["T"], row["f"], row["g"],
         "" if row["crossover_n"] is None else row["crossover_n"]]
        + [row[column] for column in header[4:]]
        for row in rows
    ]
    wrote = [report_io.write_csv(out / "comparison.csv", header, csv_rows)]
    if args.figure:
        wrote.append(figures.comparison_figure(rows, n_list, out / "comparison.png"))

    verdict = checks.comparison_verdict(grid)
    _print_verdicts([verdict])
    for T, row in zip(grid, rows):
        crossover = row["crossover_n"]
        label = crossover if crossover is not None else f"> {args.crossover_n_max}"
        print(f"T={T:g}: smallest n with canonical-path gap above Ingrassia gap: {label}")
    for path in wrote:
        print(f"wrote {path}")
    return EXIT_OK if verdict.passed else EXIT_VERDICT_FAILED


def cmd_verify(args) -> int:
    out = Path(args.out)
    report = checks.run_verification(
        args.n,
        args.T,
        horizon=args.horizon,
        seed=args.seed,
        samples=args.samples,
        ceiling=args.ceiling,
    )
    wrote = [report_io.write_json(out / "verify_report.json", report.to_dict())]

    tv = report.tv
    spectrum = report.spectrum
    beta_star = spectrum.beta_star
    closed_star = bnd.geometric_beta_star_bound(args.n, args.T)
    pi = build_kernel(args.n, args.T, args.ceiling).pi
    prefactor = 0.5 * np.sqrt((1.0 - pi) / pi)

    def tv_rows():
        for k in range(tv.shape[0]):
            for x in range(tv.shape[1]):
                yield (
                    k,
                    x,
                    float(tv[k, x]),
                    float(prefactor[x] * beta_star ** k),
                    float(prefactor[x] * closed_star ** k),
                )

    wrote.append(
        report_io.write_csv(
            out / "tv_decay.csv",
            ["k", "x", "tv", "bound_exact_beta_star", "bound_closed_form"],
            tv_rows(),
        )
    )
    if args.figure:
        worst = int(np.argmax(tv[min(args.horizon, 1)]))
        ks = np.arange(tv.shape[0])
        wrote.append(
            figures.tv_decay_figure(
                tv,
                prefactor[worst] * beta_star ** ks,
                prefactor[worst] * closed_star ** ks,
                worst,
                out / "tv_decay.png",
            )
        )
    _print_verdicts(report.verdicts)
    for path in wrote:
        print(f"wrote {path}")
    return EXIT_OK if report.all_passed else EXIT_VERDICT_FAILED


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="isinggap",
        description=(
            "Exact verification toolkit for spectral-gap bounds of the "
            "single-site Gibbs sampler on the 2-D free-boundary Ising lattice."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, temperature=True):
        p.add_argument("--n", type=int, required=True, help="lattice side length")
        if temperature:
            p.add_argument(
                "--T",
                type=parse_temperature,
                required=True,
                help="temperature (positive real or 'inf')",
            )
        p.add_argument("--out", default=".", help="output directory")
        p.add_argument(
            "--ceiling",
            type=int,
            default=None,
            help=f"enumeration ceiling override (default {state_ceiling()})",
        )
        p.add_argument(
            "--no-figure",
            dest="figure",
            action="store_false",
            help="skip rendering the PNG figure",
        )

    p = sub.add_parser("spectrum", help="exact eigenvalues of the Gibbs kernel")
    common(p)
    p.add_argument(
        "--extremal",
        action="store_true",
        help="compute only beta1/beta_min with a sparse iterative solver",
    )
    p.add_argument(
        "--dump-kernel",
        action="store_true",
        help="also write the kernel as CSV triples with a JSON header",
    )
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("bounds", help="exact kappa and every analytic bound")
    common(p)
    p.add_argument(
        "--formulas-only",
        action="store_true",
        help="evaluate closed-form bounds only (any n, no enumeration)",
    )
    p.add_argument(
        "--dump-loads", action="store_true", help="also write the edge-load table CSV"
    )
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("compare", help="rank the two closed-form gap bounds")
    p.add_argument(
        "--T-grid",
        dest="T_grid",
        type=parse_grid,
        required=True,
        help="temperatures, 'start:stop:step' or comma list",
    )
    p.add_argument(
        "--n-list",
        dest="n_list",
        type=parse_int_list,
        default=[5, 10, 20],
        help="lattice sides for the gap columns (default 5,10,20)",
    )
    p.add_argument(
        "--crossover-n-max",
        type=int,
        default=200,
        help="largest n scanned for the gap crossover (default 200)",
    )
    p.add_argument("--out", default=".", help="output directory")
    p.add_argument(
        "--no-figure", dest="figure", action="store_false", help="skip the PNG figure"
    )
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("verify", help="run the full invariant suite")
    common(p)
    p.add_argument("--horizon", type=int, default=50, help="TV decay horizon")
    p.add_argument("--seed", type=int, default=0, help="seed for sampled path checks")
    p.add_argument(
        "--samples",
        type=int,
        default=100000,
        help="sampled pairs for the path-length law on non-exhaustive lattices",
    )
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except LatticeTooLargeError as exc:
        print(
            report_io.dumps(
                {
                    "schema": 1,
                    "error": "lattice-too-large",
                    "n": exc.n,
                    "ceiling": exc.ceiling,
                }
            ),
            end="",
        )
        return EXIT_TOO_LARGE


if __name__ == "__main__":
    sys.exit(main())
