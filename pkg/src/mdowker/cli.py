"""Command-line interface: ``mdowker build | hilbert | duality-check | experiment``.

Exit codes: 0 success, 1 check failure, 2 input error, 3 guard violation.
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

import numpy as np

from .bifiltration import BuildParams, build_measure_dowker, minimize_bidegrees
from .core import GuardError, LambdaMatrix
from .duality import DualityReport, check_dowker_duality, check_total_weight_duality
from .experiments import AnnulusParams, run_annulus_experiment, run_er_experiment
from .formats import (
    InputError,
    format_bifiltration,
    format_hilbert_csv,
    format_pgm,
    parse_bifiltration,
    read_matrix_csv,
)
from .homology import hilbert_grid
from .relations import distance_lambda, knn_rank_lambda, make_rng

EXIT_OK, EXIT_CHECK, EXIT_INPUT, EXIT_GUARD = 0, 1, 2, 3


def _emit(text: str, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


def _read_text(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def _load_csv(path: str, header: bool) -> np.ndarray:
    return read_matrix_csv(path, header=header)


def cmd_build(args) -> int:
    if (args.points is None) == (args.lambda_ is None):
        raise InputError("give exactly one of --points or --lambda")
    halve = not args.no_halve
    if args.lambda_ is not None:
        L = LambdaMatrix(_load_csv(args.lambda_, args.header))
    else:
        X = _load_csv(args.points, args.header)
        W = _load_csv(args.witnesses, args.header) if args.witnesses else X
        if args.relation == "knn":
            if args.witnesses:
                raise InputError("--relation knn ranks a cloud against itself; drop --witnesses")
            L = knn_rank_lambda(X)
            halve = False
        else:
            L = distance_lambda(X, W, args.relation)
    params = BuildParams(m_max=args.mmax, dim_max=args.dim,
                         r_max=args.rmax if args.rmax is not None else math.inf, halve_radii=halve)
    C = build_measure_dowker(L, params)
    if args.minimize:
        C = minimize_bidegrees(C)
    _emit(format_bifiltration(C, negate_weight=args.negate_weight), args.out)
    return EXIT_OK


def _parse_list(text: str, name: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise InputError(f"{name}: expected comma-separated numbers") from None


def _parse_range(text: str, name: str) -> tuple[float, float, int]:
    parts = text.split(":")
    if len(parts) != 3:
        raise InputError(f"{name}: expected LO:HI:COUNT")
    try:
        lo, hi, count = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise InputError(f"{name}: expected LO:HI:COUNT") from None
    if count < 1 or hi < lo:
        raise InputError(f"{name}: need COUNT >= 1 and HI >= LO")
    return lo, hi, count


def _m_grid(args, C) -> list:
    if args.m_values:
        values = sorted(_parse_list(args.m_values, "--m-values"))
    elif args.m_range:
        lo, hi, count = _parse_range(args.m_range, "--m-range")
        values = np.linspace(lo, hi, count).tolist()
    else:
        top = int(C.weights.max()) if len(C) else 1
        values = list(range(1, top + 1))
    return [int(v) if float(v).is_integer() else v for v in values]


def _r_grid(args, C) -> list[float]:
    if args.r_range:
        lo, hi, count = _parse_range(args.r_range, "--r-range")
    else:
        finite = C.radii[np.isfinite(C.radii)] if len(C) else np.zeros(0)
        lo, hi, count = 0.0, float(finite.max()) if finite.size else 1.0, 50
    if args.r_spacing == "quantile":
        inside = np.unique(C.radii[(C.radii >= lo) & (C.radii <= hi)]) if len(C) else np.zeros(0)
        if inside.size == 0:
            return np.linspace(lo, hi, count).tolist()
        return np.unique(np.quantile(inside, np.linspace(0, 1, count))).tolist()
    return np.linspace(lo, hi, count).tolist()


def cmd_hilbert(args) -> int:
    C = parse_bifiltration(_read_text(args.input))
    if args.degree < 0:
        raise InputError("--degree must be non-negative")
    grid = hilbert_grid(C, _m_grid(args, C), _r_grid(args, C), args.degree, method=args.method)
    _emit(format_hilbert_csv(grid), args.out)
    if args.heatmap:
        Path(args.heatmap).write_text(format_pgm(grid), encoding="utf-8")
    return EXIT_OK


def _duality_instance(L: LambdaMatrix, r: float, classical: bool) -> DualityReport:
    report = check_total_weight_duality(L, r, range(1, L.col_count + 1))
    if classical:
        report.extend(check_dowker_duality(L, r))
    return report


def cmd_duality_check(args) -> int:
    reports = []
    if args.relation:
        R = _load_csv(args.relation, args.header)
        if not np.all((R == 0) | (R == 1)):
            raise InputError("--relation expects a 0/1 matrix")
        reports.append(_duality_instance(LambdaMatrix.from_indicator(R == 1), 0.0, args.classical))
    elif args.lambda_:
        if args.radius is None:
            raise InputError("--lambda needs --radius")
        L = LambdaMatrix(_load_csv(args.lambda_, args.header))
        reports.append(_duality_instance(L, args.radius, args.classical))
    elif args.random:
        rng = make_rng(args.seed)
        for _ in range(args.random):
            rows, cols = rng.integers(1, args.max_size + 1, size=2)
            R = rng.random((rows, cols)) < args.density
            reports.append(_duality_instance(LambdaMatrix.from_indicator(R), 0.0, args.classical))
    else:
        raise InputError("give --relation, --lambda or --random")
    failed = 0
    csv_parts = []
    for i, report in enumerate(reports):
        failed += not report.passed
        if len(reports) == 1:
            sys.stdout.write(report.to_text())
        elif not report.passed:
            sys.stdout.write(f"instance {i}:\n" + report.to_text())
        csv_parts.append(report.to_csv(instance=i, header=(i == 0)))
    if len(reports) > 1:
        status = "PASS" if not failed else "FAIL"
        sys.stdout.write(f"{len(reports) - failed}/{len(reports)} instances agree {status}\n")
    if args.csv:
        Path(args.csv).write_text("".join(csv_parts), encoding="utf-8")
    return EXIT_CHECK if failed else EXIT_OK


def cmd_experiment(args) -> int:
    out = Path(args.outdir)
    out.mkdir(parents=True, exist_ok=True)
    if args.which == "annulus":
        params = AnnulusParams(n=args.n, seed=args.seed, m_max=args.mmax,
                               m_values=tuple(range(1, args.mmax + 1)),
                               r_values=tuple(np.linspace(0.0, args.rmax, args.r_count).tolist()))
        result = run_annulus_experiment(params)
        for name, grid in result.grids.items():
            (out / f"hilbert_{name}.csv").write_text(format_hilbert_csv(grid), encoding="utf-8")
            (out / f"hilbert_{name}.pgm").write_text(format_pgm(grid), encoding="utf-8")
        lines = ["cloud,build_seconds,homology_seconds"]
        lines += [f"{name},{b:.6f},{h:.6f}" for name, b, h in result.timing_rows()]
        (out / "timings.csv").write_text("\n".join(lines) + "\n", encoding="utf-8")
    else:
        p_grid = np.linspace(0.0, 1.0, args.p_count).tolist()
        result = run_er_experiment(args.n, list(range(1, args.mmax + 1)), p_grid, args.seed)
        for grid in (result.h0, result.h1):
            stem = f"er_H{grid.homology_degree}"
            (out / f"{stem}.csv").write_text(format_hilbert_csv(grid), encoding="utf-8")
            (out / f"{stem}.pgm").write_text(format_pgm(grid), encoding="utf-8")
        (out / "timings.csv").write_text(f"total_seconds\n{result.seconds:.6f}\n", encoding="utf-8")
    sys.stdout.write(f"wrote {out}\n")
    return EXIT_OK


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mdowker", description="Bifiltered measure Dowker complexes.")
    sub = parser.add_subparsers(dest="command", required=True)

    b = sub.add_parser("build", help="build a bifiltration file")
    b.add_argument("--points", help="point cloud CSV (vertices)")
    b.add_argument("--witnesses", help="witness cloud CSV (default: the points themselves)")
    b.add_argument("--relation", choices=["euclidean", "cosine", "knn"], default="euclidean")
    b.add_argument("--lambda", dest="lambda_", help="dense lambda matrix CSV (rows = vertices)")
    b.add_argument("--mmax", type=_positive_int, default=1)
    b.add_argument("--dim", type=int, default=1)
    b.add_argument("--rmax", type=float)
    b.add_argument("--no-halve", action="store_true", help="use L <= r instead of L <= 2r")
    b.add_argument("--header", action="store_true", help="skip the first line of input CSVs")
    b.add_argument("--negate-weight", action="store_true")
    b.add_argument("--minimize", action="store_true", help="drop dominated bidegrees")
    b.add_argument("--out")
    b.set_defaults(func=cmd_build)

    h = sub.add_parser("hilbert", help="Hilbert function grid of a bifiltration file")
    h.add_argument("input")
    h.add_argument("--degree", type=int, default=0)
    h.add_argument("--m-values", help="comma-separated weights")
    h.add_argument("--m-range", help="LO:HI:COUNT")
    h.add_argument("--r-range", help="LO:HI:COUNT")
    h.add_argument("--r-spacing", choices=["linear", "quantile"], default="linear")
    h.add_argument("--method", choices=["persistence", "slices"], default="persistence")
    h.add_argument("--out")
    h.add_argument("--heatmap", help="write a PGM heatmap here")
    h.set_defaults(func=cmd_hilbert)

    d = sub.add_parser("duality-check", help="compare Betti numbers across the duality")
    d.add_argument("--relation", help="0/1 relation CSV")
    d.add_argument("--lambda", dest="lambda_")
    d.add_argument("--radius", type=float)
    d.add_argument("--random", type=_positive_int, help="number of random relations")
    d.add_argument("--max-size", type=_positive_int, default=6)
    d.add_argument("--density", type=float, default=0.5)
    d.add_argument("--seed", type=int, default=0)
    d.add_argument("--classical", action="store_true", help="also check the m = 1 transpose duality")
    d.add_argument("--header", action="store_true")
    d.add_argument("--csv", help="write per-instance rows here")
    d.set_defaults(func=cmd_duality_check)

    e = sub.add_parser("experiment", help="run the annulus or random-matrix example")
    e.add_argument("which", choices=["annulus", "er"])
    e.add_argument("--outdir", required=True)
    e.add_argument("--seed", type=int, default=0)
    e.add_argument("--n", type=_positive_int, default=None)
    e.add_argument("--mmax", type=_positive_int, default=None)
    e.add_argument("--rmax", type=float, default=0.5, help="annulus: largest radius on the grid")
    e.add_argument("--r-count", type=_positive_int, default=50)
    e.add_argument("--p-count", type=_positive_int, default=20)
    e.set_defaults(func=cmd_experiment)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "experiment":
        if args.n is None:
            args.n = 256 if args.which == "annulus" else 100
        if args.mmax is None:
            args.mmax = 50 if args.which == "annulus" else 10
    try:
        return args.func(args)
    except GuardError as exc:
        print(f"guard violation: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except (InputError, ValueError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
