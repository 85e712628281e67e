"""Command line driver.

Exit status: 0 when the run agrees with the expected outcome, 1 when a
counterexample was found (it is printed), 2 on input errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import experiments as ex
from . import matrices as mx
from .charpoly import coefficient_identities
from .errors import InputError
from .graph import load_graph
from .periodicity import TAU_MAX, decide_periodicity

EXIT_OK, EXIT_COUNTEREXAMPLE, EXIT_INPUT = 0, 1, 2

MATRICES = {
    "H": lambda g, eta, mode: mx.hermitian_adjacency(g, eta, mode),
    "D": lambda g, eta, mode: mx.degree_matrix(g, mode),
    "Hnorm": lambda g, eta, mode: mx.normalized_hermitian(g, eta, mode),
    "DinvH": lambda g, eta, mode: mx.random_walk_hermitian(g, eta, mode),
    "K": lambda g, eta, mode: mx.boundary_matrix(g, mode),
    "C": lambda g, eta, mode: mx.coin_matrix(g, mode),
    "S": lambda g, eta, mode: mx.shift_matrix(g, eta, mode),
    "U": lambda g, eta, mode: mx.time_evolution(g, eta, mode),
}


def _add_eta(p: argparse.ArgumentParser, required: bool = True) -> None:
    grp = p.add_mutually_exclusive_group(required=required)
    grp.add_argument("--eta", help="rational angle A/B, meaning eta = 2*pi*A/B (1/4 is pi/2)")
    grp.add_argument("--eta-float", type=float, help="angle in radians (numeric pipeline only)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mixedwalk", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="decide periodicity of one graph file")
    p.add_argument("--graph", required=True, type=Path)
    _add_eta(p)
    p.add_argument("--tau-max", type=int, default=TAU_MAX)
    p.add_argument("--json", type=Path, help="write the full report here")
    p.add_argument("--figure", type=Path, help="write the U spectrum plot here")

    p = sub.add_parser("enumerate-complete", help="decide every orientation of K_n")
    p.add_argument("--n", type=int, required=True)
    _add_eta(p)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", type=Path, help="directory for report.json, report.csv and figure.png")

    p = sub.add_parser("verify-known", help="check a periodic family from the literature")
    p.add_argument("--family", required=True, choices=ex.FAMILIES)
    p.add_argument("--params", type=int, nargs="+", required=True)
    _add_eta(p, required=False)
    p.add_argument("--out", type=Path)

    p = sub.add_parser("prime-scan", help="mixed graphs on a prime number of vertices")
    p.add_argument("--p", type=int, required=True)
    _add_eta(p)
    p.add_argument("--samples", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--k", type=int, nargs="+", help="degrees of the sampled regular graphs")
    p.add_argument("--out", type=Path)

    p = sub.add_parser("dump", help="write one matrix as CSV")
    p.add_argument("--graph", required=True, type=Path)
    p.add_argument("--matrix", required=True, choices=sorted(MATRICES))
    _add_eta(p, required=False)
    p.add_argument("--numeric", action="store_true")
    p.add_argument("--out", type=Path)
    return parser


def _eta(args, default: str | None = None):
    if args.eta is None and args.eta_float is None and default is not None:
        return ex.parse_eta(default, None)
    return ex.parse_eta(args.eta, args.eta_float)


def _write_experiment(rep: ex.ExperimentReport, out: Path | None) -> None:
    if out is None:
        return
    from .plotting import plot_experiment

    out.mkdir(parents=True, exist_ok=True)
    (out / "report.json").write_text(json.dumps(rep.to_dict(), indent=1) + "\n")
    (out / "report.csv").write_text(rep.to_csv())
    plot_experiment(rep, out / "figure.png")
    print(f"wrote {out}/report.json, report.csv, figure.png")


def _finish_experiment(rep: ex.ExperimentReport, out: Path | None) -> int:
    print(f"{rep.experiment} {rep.params}: {len(rep.rows)} instances, {rep.aggregate} "
          f"({rep.wall_time:.2f}s)")
    print(f"expected: {rep.expected}")
    _write_experiment(rep, out)
    if rep.consistent:
        print("consistent")
        return EXIT_OK
    print(f"COUNTEREXAMPLES: {len(rep.counterexamples)}")
    for row in rep.counterexamples[:20]:
        print("  " + json.dumps(row))
    return EXIT_COUNTEREXAMPLE


def cmd_analyze(args) -> int:
    g = load_graph(args.graph)
    eta = _eta(args)
    report = decide_periodicity(g, eta, args.tau_max)
    idents = coefficient_identities(g, eta)
    print(f"graph: n={g.n} m={g.m} regular={g.is_regular()} undirected={g.is_undirected} eta={eta}")
    print(f"verdict: {report.verdict}" + (f" tau={report.tau}" if report.tau else ""))
    print(f"method: {report.method}")
    for name, state in report.conditions.items():
        print(f"  {name}: {state}")
    if report.witness:
        print(f"witness: {report.witness}")
    if report.eigen_orders:
        print("eigenvalue orders: " + ", ".join(f"{d}x{e}" for d, e in report.eigen_orders))
    print(f"coefficient identities ({idents.mode}):")
    for c in idents.checks:
        print(f"  [{'ok' if c.holds else 'FAIL'}] {c.name}: {c.lhs} vs {c.rhs}")
    if args.json:
        doc = {"schema": ex.SCHEMA, "graph": g.to_dict(), "eta": ex._eta_to_json(eta), **report.to_dict(),
               "identities": idents.to_dict()}
        args.json.write_text(json.dumps(doc, indent=1) + "\n")
    if args.figure:
        from .plotting import plot_spectrum

        plot_spectrum(g, eta, args.figure, report.tau)
    return EXIT_OK if idents.all_hold else EXIT_COUNTEREXAMPLE


def cmd_dump(args) -> int:
    g = load_graph(args.graph)
    eta = _eta(args, default="0/1")
    mode = mx.NUMERIC if args.numeric else mx.EXACT
    mat = MATRICES[args.matrix](g, eta, mode)
    if args.out:
        with open(args.out, "w") as fh:
            mx.dump_csv(mat, fh)
    else:
        mx.dump_csv(mat, sys.stdout)
    return EXIT_OK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "analyze":
            return cmd_analyze(args)
        if args.command == "dump":
            return cmd_dump(args)
        if args.command == "enumerate-complete":
            rep = ex.enumerate_complete(args.n, _eta(args), workers=args.workers)
        elif args.command == "verify-known":
            rep = ex.verify_known(args.family, args.params, _eta(args, default="0/1"))
        else:
            rep = ex.prime_scan(args.p, _eta(args), samples=args.samples, seed=args.seed, degrees=args.k)
        return _finish_experiment(rep, args.out)
    except (InputError, mx.IrrationalEntries, mx.NonRegularExactNormalization, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
