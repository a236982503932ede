"""Command-line entry point: ``tree-uncover <subcommand> ...``.

Exit status is 0 on success, 1 for invalid input and 2 when an internal
consistency check fails (oracle mismatch, non-integral exact count).
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from fractions import Fraction

import numpy as np

from tree_uncover import asymptotics, exact, harness, oracle
from tree_uncover.trees import (InvalidTreeError, LabeledTree, RngStream,
                                sample_uniform_rooted_tree, sample_uniform_tree)
from tree_uncover.uncover import interpolated_Z, uncover_path, uncover_snapshots


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def fmt(value) -> str:
    if isinstance(value, Fraction):
        return exact.exact_str(value)
    if isinstance(value, (bool, np.bool_)):
        return str(bool(value)).lower()
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format(float(value), ".12g")
    return str(value)


def _json_value(value):
    if isinstance(value, Fraction):
        return exact.exact_str(value)
    if isinstance(value, dict):
        return {str(k): _json_value(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_json_value(v) for v in value]
    if isinstance(value, np.generic):
        return value.item()
    return value


def int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def float_list(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


class Output:
    """Collects rows or a JSON document and writes them once, to stdout or a file."""

    def __init__(self, args):
        self.format = args.format
        self.path = args.output_path

    def write_text(self, text: str) -> None:
        if self.path:
            with open(self.path, "w", newline="") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)

    def table(self, header, rows, document=None) -> None:
        if self.format == "json":
            doc = document if document is not None else [dict(zip(header, r)) for r in rows]
            self.write_text(json.dumps(_json_value(doc), indent=2) + "\n")
            return
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(header)
        writer.writerows([fmt(v) for v in row] for row in rows)
        self.write_text(buf.getvalue())

    def value(self, value, document) -> None:
        if self.format == "json":
            self.write_text(json.dumps(_json_value(document), indent=2) + "\n")
        else:
            self.write_text(fmt(value) + "\n")


# -- subcommands ---------------------------------------------------------------------


def cmd_sample_tree(args, out: Output) -> int:
    stream = RngStream(args.seed, 0)
    if args.rooted:
        rt = sample_uniform_rooted_tree(args.n, stream)
        tree, root = rt.tree, rt.root
    else:
        tree, root = sample_uniform_tree(args.n, stream), None
    out.table(["u", "v"], tree.edges, tree.to_dict(root))
    return 0


def _load_tree(args):
    if args.tree:
        with open(args.tree) as fh:
            data = json.load(fh)
        tree = LabeledTree.from_dict(data)
        return tree, data.get("root")
    if args.n is None:
        raise ValueError("give --n or --tree")
    rt = sample_uniform_rooted_tree(args.n, RngStream(args.seed, 0))
    return rt.tree, rt.root


def cmd_uncover(args, out: Output) -> int:
    tree, root = _load_tree(args)
    if args.root is not None:
        root = args.root
    ks = args.k or []
    path, reports = uncover_snapshots(tree, ks, root)
    if not ks:
        comps = path.components()
        out.table(["j", "k_j", "components"],
                  [(j, kj, comps[j - 1]) for j, kj in enumerate(path.k, start=1)],
                  {"n": tree.n, "root": root, "k": list(path.k)})
        return 0
    rows = [(r.k, r.root_cluster, r.largest, len(r.sizes), " ".join(map(str, r.sizes)))
            for r in reports]
    out.table(["k", "root_cluster", "largest", "components", "sizes"], rows,
              {"n": tree.n, "root": root, "k": list(path.k),
               "clusters": [json.loads(r.to_json()) for r in reports]})
    return 0


def _need(args, *names):
    missing = [f"--{n.replace('_', '-')}" for n in names if getattr(args, n) is None]
    if missing:
        raise ValueError(f"{args.formula} needs {', '.join(missing)}")


EXACT_FORMULAS = {
    "partial-count": (("n", "js", "as_"), lambda a: exact.count_trees_partial_sequence(a.n, a.js, a.as_)),
    "full-count": (("as_",), lambda a: exact.count_trees_full_sequence(a.as_)),
    "gf": (("n", "js"), None),
    "cluster-count": (("n", "k", "rs"), lambda a: exact.count_trees_with_clusters(a.n, a.k, a.rs)),
    "root-cluster-pmf": (("n", "k", "m"), lambda a: exact.root_cluster_pmf(a.n, a.k, a.m)),
    "rooted-count": (("n", "k", "m"), lambda a: exact.count_rooted_trees_root_cluster(a.n, a.k, a.m)),
    "root-cluster-mean": (("n", "k"), lambda a: exact.root_cluster_expectation(a.n, a.k)),
    "root-cluster-mean-integral": (("n", "k"), lambda a: exact.root_cluster_expectation_integral(a.n, a.k)),
    "vertex-cluster-pmf": (("n", "k", "m"), lambda a: exact.uncovered_vertex_cluster_pmf(a.n, a.k, a.m)),
    "expected-components": (("n", "k", "r"), lambda a: exact.expected_components(a.n, a.k, a.r)),
    "expected-edges": (("n", "j"), lambda a: exact.expected_edges(a.n, a.j)),
    "variance-edges": (("n", "k"), lambda a: exact.variance_edges(a.n, a.k)),
    "abel-check": (("n", "k"), lambda a: exact.abel_identity_check(a.n, a.k)),
}


def cmd_exact(args, out: Output) -> int:
    needed, fn = EXACT_FORMULAS[args.formula]
    _need(args, *needed)
    params = {name.rstrip("_"): getattr(args, name) for name in needed}
    if args.formula == "gf":
        coeffs = exact.uncover_gf_coefficients(args.n, args.js)
        rows = [(" ".join(map(str, a)), c) for a, c in sorted(coeffs.items())]
        out.table(["as", "count"], rows,
                  {"formula": "gf", "params": params,
                   "coefficients": [{"as": list(a), "count": c} for a, c in sorted(coeffs.items())]})
        return 0
    value = fn(args)
    out.value(value, {"formula": args.formula, "params": params, "value": value})
    return 0


def cmd_limits(args, out: Output) -> int:
    regime = args.regime
    if regime in ("central", "supercritical-fixed"):
        law = asymptotics.LimitLaw(regime, alpha=args.alpha, d=args.d)
        rows = [(m, law.pmf(m)) for m in range(args.max + 1)]
        out.table(["m", "pmf"], rows, {"regime": regime, "alpha": args.alpha, "d": args.d,
                                        "total_mass": law.total_mass(),
                                        "pmf": [p for _, p in rows]})
        return 0
    if regime == "kappa":
        _need_val(args.c, "--c")
        out.value(asymptotics.kappa(args.c),
                  {"c": args.c, "kappa": asymptotics.kappa(args.c),
                   "quadrature": asymptotics.critical_mean(args.c)})
        return 0
    if regime == "largest-tail":
        _need_val(args.c, "--c")
        _need_val(args.alpha, "--alpha")
        value = asymptotics.largest_component_tail_limit(args.c, args.alpha)
        out.value(value, {"c": args.c, "alpha": args.alpha, "tail": value})
        return 0
    law = asymptotics.LimitLaw(regime, c=args.c)
    xs = args.x or [float(x) for x in np.linspace(0.05, 1.0 if regime == "critical" else 5.0, 20)]
    rows = [(x, law.density(x)) for x in xs]
    out.table(["x", "density"], rows, {"regime": regime, "c": args.c,
                                        "total_mass": law.total_mass(),
                                        "density": [{"x": x, "f": f} for x, f in rows]})
    return 0


def _need_val(value, flag):
    if value is None:
        raise ValueError(f"missing {flag}")


def cmd_oracle_verify(args, out: Output) -> int:
    results = oracle.verify(args.n, args.suite)
    doc = {"n": args.n, "suite": args.suite, "passed": all(r.passed for r in results),
           "results": [r.to_dict() for r in results]}
    out.write_text(json.dumps(doc, indent=2) + "\n")
    return 0 if doc["passed"] else 2


def _simulation_config(args, kind) -> harness.ExperimentConfig:
    k = args.k
    if k is None and args.d is not None:
        k = args.n - args.d
    if k is None and args.c is not None:
        k = args.n - round(args.c * math.sqrt(args.n))
    return harness.ExperimentConfig(
        kind=kind, n=args.n, samples=args.samples, seed=args.seed, k=k,
        js=tuple(args.js or ()), grid=tuple(args.grid or ()), regime=args.regime,
        c=args.c, alpha=args.alpha, source=args.source, threads=args.threads,
        paths_csv=args.paths_csv, limit_samples=args.limit_samples)


def cmd_simulate(args, out: Output) -> int:
    if args.experiment == "edges":
        if not args.grid and not args.js:
            args.grid = [0.25, 0.5, 0.75]
        report = harness.run_edge_moment_experiment(_simulation_config(args, "edges"))
        main, cols = "process", ["t", "mean_Z", "var_Z"]
    elif args.experiment == "clusters":
        report = harness.run_cluster_experiment(_simulation_config(args, "clusters"))
        main, cols = "pmf", ["m", "empirical", "exact"]
    else:
        report = harness.run_largest_component_experiment(_simulation_config(args, "largest"))
        main, cols = "quantiles", ["q", "Cmax_over_n"]
    if args.format == "json":
        out.write_text(report.to_json() + "\n")
    elif args.format == "text":
        out.write_text(report.to_text())
    else:
        out.table(cols, [[row[c] for c in cols] for row in report.tables[main]])
    return 0


def cmd_plotdata(args, out: Output) -> int:
    fig = args.figure
    stream = RngStream(args.seed, 0)
    if fig == "fig1":
        n = args.n or 100
        tree = sample_uniform_tree(n, stream)
        steps = args.k or sorted({min(n, 12 + 11 * i) for i in range(9)} | {n})
        rows = []
        adj = tree.neighbors()
        for k in steps:
            label = _component_labels(adj, k)
            rows.extend((k, v, label[v]) for v in range(1, k + 1))
        out.table(["k", "vertex", "component"], rows,
                  {"n": n, "edges": [list(e) for e in tree.edges],
                   "snapshots": [{"k": k, "component": [r[2] for r in rows if r[0] == k]}
                                 for k in steps]})
    elif fig == "fig2":
        n = args.n or 1000
        path = uncover_path(sample_uniform_tree(n, stream))
        comps = path.components()
        out.table(["j", "k_j", "components"],
                  [(j, kj, comps[j - 1]) for j, kj in enumerate(path.k, start=1)])
    else:
        n = args.n or 10000
        path = uncover_path(sample_uniform_tree(n, stream))
        points = args.points or n
        rows = []
        for i in range(points + 1):
            t = i / points
            rows.append((t, path.at(math.floor(t * n)) / (n - 1), interpolated_Z(path, t)))
        out.table(["t", "scaled_k", "Z"], rows)
    return 0


def _component_labels(adj, k):
    # smallest label in each component of the forest on 1..k
    label = {}
    for v in range(1, k + 1):
        if v in label:
            continue
        label[v] = v
        stack = [v]
        while stack:
            x = stack.pop()
            for w in adj[x]:
                if w <= k and w not in label:
                    label[w] = v
                    stack.append(w)
    return label


# -- parser --------------------------------------------------------------------------


def _add_common(p, formats=("csv", "json")):
    p.add_argument("--format", choices=formats, default="csv", help="output format")
    p.add_argument("--output-path", default=None, help="write here instead of stdout")
    p.add_argument("--seed", type=int, default=42, help="64-bit seed")
    p.add_argument("--threads", type=int, default=None,
                   help="worker threads (default: available CPUs; TREE_UNCOVER_THREADS overrides)")
    return p


def build_parser() -> argparse.ArgumentParser:
    fmt_cls = argparse.ArgumentDefaultsHelpFormatter
    parser = _Parser(prog="tree-uncover", description="Uncovering random labeled trees.",
                     formatter_class=fmt_cls)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = _add_common(sub.add_parser("sample-tree", formatter_class=fmt_cls,
                                  help="draw a uniform labeled tree"))
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--rooted", action="store_true", help="also draw a uniform root")
    p.set_defaults(func=cmd_sample_tree)

    p = _add_common(sub.add_parser("uncover", formatter_class=fmt_cls,
                                  help="uncover path and cluster snapshots of one tree"))
    p.add_argument("--n", type=int, default=None, help="sample a tree of this size")
    p.add_argument("--tree", default=None, help="JSON file {n, edges, root}")
    p.add_argument("--k", type=int_list, default=None, help="snapshot steps, e.g. 10,20")
    p.add_argument("--root", type=int, default=None)
    p.set_defaults(func=cmd_uncover)

    p = _add_common(sub.add_parser("exact", formatter_class=fmt_cls,
                                  help="evaluate an exact formula"))
    p.add_argument("formula", choices=sorted(EXACT_FORMULAS))
    for name in ("n", "k", "m", "r", "j"):
        p.add_argument(f"--{name}", type=int, default=None)
    p.add_argument("--js", type=int_list, default=None)
    p.add_argument("--as", dest="as_", type=int_list, default=None)
    p.add_argument("--rs", type=int_list, default=None)
    p.set_defaults(func=cmd_exact)

    p = _add_common(sub.add_parser("limits", formatter_class=fmt_cls,
                                  help="limit laws of the root cluster and related constants"))
    p.add_argument("regime", choices=("central", "subcritical", "critical", "supercritical",
                                      "supercritical-fixed", "kappa", "largest-tail"))
    p.add_argument("--alpha", type=float, default=None)
    p.add_argument("--c", type=float, default=None)
    p.add_argument("--d", type=int, default=None)
    p.add_argument("--max", type=int, default=30, help="largest atom for discrete laws")
    p.add_argument("--x", type=float_list, default=None, help="density evaluation points")
    p.set_defaults(func=cmd_limits)

    p = _add_common(sub.add_parser("oracle-verify", formatter_class=fmt_cls,
                                  help="compare exact formulas with exhaustive enumeration"))
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--suite", choices=oracle.SUITES, default="all")
    p.set_defaults(func=cmd_oracle_verify)

    p = sub.add_parser("simulate", formatter_class=fmt_cls, help="Monte Carlo experiments")
    _add_common(p, ("csv", "json", "text"))
    p.add_argument("experiment", choices=("edges", "clusters", "largest"))
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--d", type=int, default=None, help="sets k = n - d")
    p.add_argument("--c", type=float, default=None, help="sets k = n - round(c sqrt(n))")
    p.add_argument("--alpha", type=float, default=None)
    p.add_argument("--regime", choices=harness.REGIMES, default=None)
    p.add_argument("--js", type=int_list, default=None)
    p.add_argument("--grid", type=float_list, default=None)
    p.add_argument("--source", choices=("tree", "recursive"), default="tree")
    p.add_argument("--limit-samples", type=int, default=0)
    p.add_argument("--paths-csv", default=None, help="stream a few raw paths here")
    p.set_defaults(func=cmd_simulate)

    p = _add_common(sub.add_parser("plotdata", formatter_class=fmt_cls,
                                  help="data behind the snapshot, path and process figures"))
    p.add_argument("figure", choices=("fig1", "fig2", "fig3"))
    p.add_argument("--n", type=int, default=None, help="defaults: 100, 1000, 10000")
    p.add_argument("--k", type=int_list, default=None, help="fig1 snapshot steps")
    p.add_argument("--points", type=int, default=None, help="fig3 grid size (default n)")
    p.set_defaults(func=cmd_plotdata)
    # the defaults formatter only annotates flags that carry help text
    for sub_parser in sub.choices.values():
        for action in sub_parser._actions:
            if action.help is None:
                action.help = action.dest.rstrip("_").replace("_", " ")
    return parser


def dispatch(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return 1
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    out = Output(args)
    try:
        return args.func(args, out)
    except (exact.NonIntegralCountError, AssertionError, exact.QuadratureError) as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, InvalidTreeError, TypeError, OSError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(dispatch())


if __name__ == "__main__":
    main()
