"""Command-line pipeline: build, transform, select, approximate, cluster."""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

import numpy as np

from . import io
from .complexes import SimplicialComplex
from .dictionaries import ghwt, haar_basis, hglet, reorder_f2c
from .meshing import (
    citation_complex,
    delaunay_sample,
    interpolate_image,
    sample_points,
    synthetic_grid,
)
from .operators import laplacian, signed_adjacency
from .partition import build_tree
from .pipeline import APPROX_METHODS, approximation_curves, clustering_report
from .selection import CostSpec, analyze, best_basis, greedy_select, omp

VARIANT_NAMES = {"comb": "combinatorial", "combinatorial": "combinatorial",
                 "sym": "sym", "wt": "wt", "rw": "rw"}

STRATUM_NAMES = {0: "vertices", 1: "edges", 2: "triangles"}


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _add_common(parser):
    parser.add_argument("--seed", type=int, default=0, help="seed for all randomness")
    parser.add_argument(
        "--threads",
        type=int,
        default=int(os.environ.get("SIMPLEXWAVE_THREADS", "1")),
        help="upper bound on worker parallelism (results never depend on it; "
        "defaults to the SIMPLEXWAVE_THREADS environment variable)",
    )


def _load_complex_arg(path) -> SimplicialComplex:
    if str(path).endswith((".txt", ".edges")):
        return io.load_edge_list(path)
    return io.load_complex(path)


def _stratum_label(kappa: int, count: int) -> str:
    name = STRATUM_NAMES.get(kappa, f"{kappa}-simplices")
    return f"{count} {name}"


def cmd_complex(args) -> None:
    if args.action == "info":
        c = _load_complex_arg(args.input)
        parts = [
            _stratum_label(kappa, c.size(kappa)) for kappa in range(c.kappa_max + 1)
        ]
        print(", ".join(parts))
        return
    if args.from_simplices:
        c = _load_complex_arg(args.from_simplices)
    elif args.from_edges:
        c = io.load_edge_list(args.from_edges)
    elif args.from_coauthors:
        data = io._json_load(args.from_coauthors)
        try:
            records = [(r["authors"], r.get("citations", 0)) for r in data]
        except (KeyError, TypeError) as exc:
            raise io.DataError(f"{args.from_coauthors}: {exc}") from exc
        c, values = citation_complex(records)
        if args.signals_prefix:
            for kappa, vals in values.items():
                io.dump_signal(
                    vals, c, kappa, f"{args.signals_prefix}.k{kappa}.json"
                )
    elif args.delaunay:
        points = sample_points(args.delaunay, args.seed)
        c = delaunay_sample(points)
        if args.signals_prefix:
            np.savetxt(f"{args.signals_prefix}.points.csv", points, delimiter=",")
    else:
        raise _UsageError("complex build needs an input source")
    io.dump_complex(c, args.output)
    print(f"wrote {args.output}: " + ", ".join(
        _stratum_label(k, c.size(k)) for k in range(c.kappa_max + 1)
    ))


def cmd_laplacian(args) -> None:
    c = _load_complex_arg(args.input)
    variant = VARIANT_NAMES[args.variant]
    l = laplacian(c, args.kappa, variant)
    matrix = signed_adjacency(l).matrix if args.signed else l.matrix
    if args.output:
        if args.format == "coo":
            io.dump_matrix_coo(matrix, args.output)
        else:
            io.dump_matrix_csv(matrix, args.output)
    else:
        for row in matrix.toarray():
            print(",".join(f"{x:.12g}" for x in row))


def cmd_partition(args) -> None:
    c = _load_complex_arg(args.input)
    tree = build_tree(c, args.kappa, args.variant)
    io.dump_tree(tree, args.output)
    print(
        f"wrote {args.output}: depth {tree.j_max}, "
        f"{tree.region_count(tree.j_max)} leaves"
    )


def cmd_dict(args) -> None:
    c = _load_complex_arg(args.input)
    tree = io.load_tree(args.tree) if args.tree else build_tree(c, args.kappa)
    if tree.kappa != args.kappa:
        raise io.DataError(
            f"{args.tree}: tree is for stratum {tree.kappa}, not {args.kappa}"
        )
    if args.kind == "haar":
        weights = c.weights(args.kappa) if args.weighted else None
        d = haar_basis(tree, weights=weights)
    elif args.kind == "hglet":
        d = hglet(tree, c, VARIANT_NAMES[args.variant])
    else:
        d = ghwt(tree)
        if args.ordering == "f2c":
            d = reorder_f2c(d)
    io.dump_dictionary(d, args.output)
    print(f"wrote {args.output}: {d.atom_count()} atoms over {d.j_max + 1} levels")


def _load_dict_and_signal(args):
    d = io.load_dictionary(args.dictionary)
    c = _load_complex_arg(args.complex) if args.complex else None
    if args.signal.endswith(".csv"):
        f = np.asarray(io.load_signal_matrix(args.signal))[0]
    else:
        if c is None:
            raise _UsageError("a JSON signal needs --complex to resolve keys")
        f = io.load_signal(args.signal, c, d.kappa)
    if f.shape != (d.n,):
        raise io.DataError(
            f"{args.signal}: signal length {f.shape[0]} does not match {d.n}"
        )
    return d, f


def cmd_bestbasis(args) -> None:
    d, f = _load_dict_and_signal(args)
    table = analyze(d, f)
    selection = best_basis(table, CostSpec.parse(args.cost), args.direction.upper())
    io.dump_selection(selection, args.output, extra={"cost": args.cost})
    if args.coeffs_out:
        io.dump_coefficients_csv(table, args.coeffs_out)
    print(
        f"wrote {args.output}: {len(selection.blocks)} blocks, "
        f"cost {selection.total_cost:.6g}"
    )


def cmd_omp(args) -> None:
    d, f = _load_dict_and_signal(args)
    pairs = omp(d, f, args.terms, args.tol)
    io.dump_pursuit(pairs, args.output)
    if args.coeffs_out:
        io.dump_coefficients_csv(analyze(d, f), args.coeffs_out)
    print(f"wrote {args.output}: {len(pairs)} atoms")


def cmd_greedy(args) -> None:
    d, f = _load_dict_and_signal(args)
    pairs = greedy_select(d, f, args.terms)
    io.dump_pursuit(pairs, args.output)
    if args.coeffs_out:
        io.dump_coefficients_csv(analyze(d, f), args.coeffs_out)
    print(f"wrote {args.output}: {len(pairs)} atoms")


def _approx_inputs(args):
    if args.synthetic:
        points = sample_points(args.points, args.seed)
        c = delaunay_sample(points)
        grid = synthetic_grid(args.synthetic, args.grid)
        signals = interpolate_image(c, grid, points)
        if args.kappa not in signals:
            raise io.DataError(f"synthetic stratum {args.kappa} not available")
        return c, signals[args.kappa]
    if args.image:
        if not args.complex:
            points = sample_points(args.points, args.seed)
            c = delaunay_sample(points)
            coords = points
        else:
            raise _UsageError("--image builds its own triangulation; drop --complex")
        grid = io.load_pgm(args.image)
        signals = interpolate_image(c, grid, coords)
        return c, signals[args.kappa]
    if not (args.complex and args.signal):
        raise _UsageError("approx needs --synthetic, --image, or --complex/--signal")
    c = _load_complex_arg(args.complex)
    f = io.load_signal(args.signal, c, args.kappa)
    return c, f


def cmd_approx(args) -> None:
    methods = (
        list(APPROX_METHODS) if args.method == "all" else args.method.split(",")
    )
    c, f = _approx_inputs(args)
    curves = approximation_curves(c, args.kappa, f, methods)
    io.dump_curves_csv(curves, args.output)
    print(f"wrote {args.output}: {len(curves)} curves over n={c.size(args.kappa)}")
    if not args.no_plot:
        from .plots import plot_error_curves

        figure = args.plot or str(Path(args.output).with_suffix(".png"))
        plot_error_curves(curves, figure)
        print(f"wrote {figure}")


def cmd_kscore(args) -> None:
    d = io.load_dictionary(args.dictionary)
    signals = io.load_signal_matrix(args.signals)
    if signals.shape[1] != d.n:
        raise io.DataError(
            f"{args.signals}: row length {signals.shape[1]} does not match {d.n}"
        )
    terms = [int(t) for t in args.terms.split(",")]
    clusters = [int(t) for t in args.clusters.split(",")]
    rows = clustering_report(d, signals, terms, clusters, args.seed)
    io.dump_kscore_csv(rows, args.output)
    print(f"wrote {args.output}: {len(rows)} rows")
    if not args.no_plot:
        from .plots import plot_kscore

        figure = args.plot or str(Path(args.output).with_suffix(".png"))
        plot_kscore(rows, figure)
        print(f"wrote {figure}")


def _build_parser() -> _Parser:
    parser = _Parser(prog="simplexwave", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("complex", help="build or inspect a complex")
    p.add_argument("action", choices=["build", "info"])
    p.add_argument("input", nargs="?", help="complex file for info")
    p.add_argument("--from-simplices", help="complex JSON file")
    p.add_argument("--from-edges", help="edge list text file")
    p.add_argument("--from-coauthors", help="co-authorship records JSON")
    p.add_argument("--delaunay", type=int, help="triangulate N seeded points")
    p.add_argument("--signals-prefix", help="also write derived signals/points")
    p.add_argument("-o", "--output", help="output complex JSON")
    _add_common(p)
    p.set_defaults(func=cmd_complex)

    p = sub.add_parser("laplacian", help="assemble a Hodge Laplacian")
    p.add_argument("input")
    p.add_argument("--kappa", type=int, required=True)
    p.add_argument("--variant", choices=sorted(VARIANT_NAMES), default="sym")
    p.add_argument("--signed", action="store_true", help="emit diag(L) - L")
    p.add_argument("--format", choices=["coo", "csv"], default="csv")
    p.add_argument("-o", "--output")
    _add_common(p)
    p.set_defaults(func=cmd_laplacian)

    p = sub.add_parser("partition", help="hierarchical bipartition tree")
    p.add_argument("input")
    p.add_argument("--kappa", type=int, required=True)
    p.add_argument("--variant", choices=["sym", "rw"], default="rw")
    p.add_argument("-o", "--output", required=True)
    _add_common(p)
    p.set_defaults(func=cmd_partition)

    p = sub.add_parser("dict", help="build a dictionary over a tree")
    p.add_argument("input")
    p.add_argument("tree", nargs="?")
    p.add_argument("--kind", choices=["haar", "hglet", "ghwt"], required=True)
    p.add_argument("--kappa", type=int, required=True)
    p.add_argument("--variant", choices=["comb", "sym"], default="sym")
    p.add_argument("--ordering", choices=["c2f", "f2c"], default="c2f")
    p.add_argument(
        "--weighted", action="store_true",
        help="haar kind only: use the stratum weights for sums and norms",
    )
    p.add_argument("-o", "--output", required=True)
    _add_common(p)
    p.set_defaults(func=cmd_dict)

    for name, func, extras in (
        ("bestbasis", cmd_bestbasis, "cost"),
        ("omp", cmd_omp, "terms"),
        ("greedy", cmd_greedy, "terms"),
    ):
        p = sub.add_parser(name, help=f"{name} selection from a dictionary")
        p.add_argument("dictionary")
        p.add_argument("signal", help="signal JSON (with --complex) or CSV row")
        p.add_argument("--complex", help="complex JSON for signal key lookup")
        if extras == "cost":
            p.add_argument("--cost", default="l1", help="l1, lp:<p>, or entropy")
            p.add_argument("--direction", choices=["c2f", "f2c"], default="c2f")
        else:
            p.add_argument("--terms", type=int, required=True)
            if name == "omp":
                p.add_argument("--tol", type=float, default=0.0)
        p.add_argument("--coeffs-out", help="also write the coefficient CSV")
        p.add_argument("-o", "--output", required=True)
        _add_common(p)
        p.set_defaults(func=func)

    p = sub.add_parser("approx", help="nonlinear approximation error curves")
    p.add_argument("--complex")
    p.add_argument("--signal")
    p.add_argument("--synthetic", choices=["ramp", "bumps", "checker"])
    p.add_argument("--image", help="PGM image to interpolate")
    p.add_argument("--points", type=int, default=1024)
    p.add_argument("--grid", type=int, default=256)
    p.add_argument("--kappa", type=int, required=True)
    p.add_argument("--method", default="all",
                   help="comma list of " + ",".join(APPROX_METHODS) + " or 'all'")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--plot", help="figure path (default: output stem + .png)")
    p.add_argument("--no-plot", action="store_true")
    _add_common(p)
    p.set_defaults(func=cmd_approx)

    p = sub.add_parser("kscore", help="cluster-quality scores of features")
    p.add_argument("dictionary")
    p.add_argument("signals", help="CSV matrix, one signal per row")
    p.add_argument("--terms", default="5,10")
    p.add_argument("--clusters", default="2,3")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--plot", help="figure path (default: output stem + .png)")
    p.add_argument("--no-plot", action="store_true")
    _add_common(p)
    p.set_defaults(func=cmd_kscore)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    if getattr(args, "threads", 1) < 1:
        print("usage error: --threads must be at least 1", file=sys.stderr)
        return 1
    os.environ["SIMPLEXWAVE_THREADS"] = str(getattr(args, "threads", 1))
    try:
        args.func(args)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except (io.DataError, ValueError, KeyError, IndexError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
