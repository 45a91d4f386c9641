"""Command-line interface.

Subcommands: ``gram`` (pairwise kernel matrix), ``features`` (sparse
per-graph vectors), ``stats`` (corpus summary), ``dag-growth`` (shared-DAG
size diagnostic), ``dump-dag`` (DOT export of one decomposition), and a
hidden ``oracle`` for generating reference values from the slow path.

Output files are written atomically: a failed run leaves no partial file
behind, and the exit code is nonzero.
"""

from __future__ import annotations

import argparse
import math
import os
import random
import sys

from .bigdag import fit_loglog_exponent, growth_rows
from .decompose import dag_to_dot, decompose
from .errors import OddKernelError
from .features import (
    KernelConfig,
    SparseFeatureVector,
    feature_vector,
    format_feature_line,
)
from .graphs import Dataset, dataset_stats, load_edge_list, load_tu_dataset
from .gram import gram, write_gram_csv, write_gram_libsvm, write_timing
from .oracle import oracle_st_kernel, oracle_stplus_kernel
from .ordering import CodeInterner, canonical_codes


def _default_threads() -> int:
    env = os.environ.get("ODD_THREADS", "")
    try:
        return max(1, int(env))
    except ValueError:
        return 1


def _parse_depth(text: str) -> int | None:
    if text in ("inf", "unbounded"):
        return None
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError("depth must be >= 0 or 'inf'")
    return value


def _add_dataset_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--dataset", required=True, help="dataset directory (tu) or file (edgelist)")
    parser.add_argument("--format", choices=("tu", "edgelist"), default="edgelist")
    parser.add_argument("--name", default=None, help="dataset name override (tu format)")


def _add_kernel_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--kernel", choices=("st", "st+"), default="st")
    parser.add_argument("--h", type=int, default=1)
    parser.add_argument("--lambda", dest="lam", type=float, default=1.0)
    parser.add_argument("--weighting", choices=("exp", "tanh"), default="exp")
    parser.add_argument("--normalize", action="store_true")
    parser.add_argument(
        "--stplus-include-limited-visits",
        action="store_true",
        help="st+ superset variant: also count every depth-limited visit",
    )


def _load(args) -> Dataset:
    if args.format == "tu":
        return load_tu_dataset(args.dataset, args.name)
    return load_edge_list(args.dataset)


def _config(args, h: int | None = None, lam: float | None = None) -> KernelConfig:
    return KernelConfig(
        kind=args.kernel,
        h=args.h if h is None else h,
        lam=args.lam if lam is None else lam,
        weighting=args.weighting,
        normalize=args.normalize,
        stplus_include_limited_visits=args.stplus_include_limited_visits,
    )


def _atomic_write(path: str, writer) -> None:
    tmp = path + ".tmp"
    try:
        writer(tmp)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.remove(tmp)
        raise


def _grid(args) -> list[tuple[int, float]]:
    hs = [args.h] if args.h_grid is None else [int(tok) for tok in args.h_grid.split(",")]
    lams = [args.lam] if args.lambda_grid is None else [float(tok) for tok in args.lambda_grid.split(",")]
    return [(h, lam) for h in hs for lam in lams]


def cmd_gram(args) -> int:
    dataset = _load(args)
    combos = _grid(args)
    sweep = args.h_grid is not None or args.lambda_grid is not None
    for h, lam in combos:
        config = _config(args, h=h, lam=lam)
        result = gram(
            dataset,
            config,
            threads=args.threads,
            via_big2dag=args.via_big2dag,
            memory_budget_mb=args.max_feature_mb,
        )
        out = f"{args.out}.h{h}.l{lam:g}.{args.out_format}" if sweep else args.out
        if args.out_format == "csv":
            _atomic_write(out, lambda p: write_gram_csv(result, p))
        else:
            _atomic_write(out, lambda p: write_gram_libsvm(result, dataset.targets, p))
        _atomic_write(out + ".timing.json", lambda p: write_timing(result, p))
    return 0


def cmd_features(args) -> int:
    dataset = _load(args).preprocessed()
    if not dataset.graphs:
        raise OddKernelError("empty dataset")
    config = _config(args)
    interner = CodeInterner()
    vectors = [feature_vector(g, config, interner) for g in dataset.graphs]
    if args.normalize:
        normed = []
        for vec in vectors:
            norm = math.sqrt(sum(w * w for w in vec.weights.values()))
            weights = {c: w / norm for c, w in vec.weights.items()}
            normed.append(SparseFeatureVector(weights, vec.scheme, vec.lam, vec.h, vec.kind))
        vectors = normed

    def writer(path):
        with open(path, "w", encoding="utf-8") as f:
            for i, vec in enumerate(vectors):
                line = format_feature_line(
                    vec, dataset.target_of(i), interner, expand=args.expand_codes
                )
                f.write(line + "\n")

    _atomic_write(args.out, writer)
    return 0


def cmd_stats(args) -> int:
    stats = dataset_stats(_load(args))
    pos = stats["positive_fraction"]
    print(f"graphs:            {stats['graph_count']}")
    print(f"positive fraction: {'-' if pos is None else format(pos, '.4f')}")
    print(f"mean nodes:        {stats['mean_nodes']:.2f}")
    print(f"mean edges:        {stats['mean_edges']:.2f}")
    print(f"max degree:        {stats['max_degree']}")
    return 0


def cmd_dag_growth(args) -> int:
    dataset = _load(args).preprocessed()
    if not dataset.graphs:
        raise OddKernelError("empty dataset")
    rows = growth_rows(dataset, args.h)

    def writer(path):
        with open(path, "w", encoding="utf-8") as f:
            f.write("graph_id,n_nodes,bigdag_nodes\n")
            for gid, n, b in rows:
                f.write(f"{gid},{n},{b}\n")

    _atomic_write(args.out, writer)
    try:
        print(f"fitted log-log exponent: {fit_loglog_exponent(rows):.4f}")
    except ValueError as exc:
        print(f"fitted log-log exponent: n/a ({exc})")
    return 0


def cmd_dump_dag(args) -> int:
    dataset = _load(args).preprocessed()
    try:
        graph = dataset.graphs[args.graph]
    except IndexError:
        raise OddKernelError(f"graph index {args.graph} out of range") from None
    dag = decompose(graph, args.root, args.h)
    codes = None
    if args.codes:
        codes = canonical_codes(dag, CodeInterner()).codes
    text = dag_to_dot(dag, codes)
    if args.out:
        def writer(path):
            with open(path, "w", encoding="utf-8") as f:
                f.write(text)

        _atomic_write(args.out, writer)
    else:
        sys.stdout.write(text)
    return 0


def cmd_oracle(args) -> int:
    lam = args.lam
    if args.random is not None:
        rng = random.Random(args.seed)
        for case in range(args.random):
            g1 = _random_graph(rng)
            g2 = _random_graph(rng)
            st = oracle_st_kernel(g1, g2, args.h, lam)
            stp = oracle_stplus_kernel(g1, g2, args.h, lam)
            sup = oracle_stplus_kernel(g1, g2, args.h, lam, include_limited_visits=True)
            print(f"case {case}: n=({g1.n},{g2.n}) h={args.h} lam={lam:g} st={st} st+={stp} st+sup={sup}")
        return 0
    if args.dataset is None:
        raise OddKernelError("oracle needs --dataset unless --random is given")
    dataset = _load(args).preprocessed()
    i, j = args.pair
    g1, g2 = dataset.graphs[i], dataset.graphs[j]
    if args.kernel == "st":
        value = oracle_st_kernel(g1, g2, args.h, lam)
    else:
        value = oracle_stplus_kernel(g1, g2, args.h, lam, args.stplus_include_limited_visits)
    print(value)
    return 0


def _random_graph(rng: random.Random):
    from .graphs import LabeledGraph

    n = rng.randint(1, 8)
    labels = [rng.choice("abc") for _ in range(n)]
    edges = [
        (u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < 0.35
    ]
    return LabeledGraph(labels, edges)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="oddk",
        description="Graph kernels over shortest-path DAG decompositions",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gram", help="compute a pairwise kernel matrix")
    _add_dataset_args(p)
    _add_kernel_args(p)
    p.add_argument("--via-big2dag", action="store_true", help="shared single-scan path (st/exp only)")
    p.add_argument("--out", required=True)
    p.add_argument("--out-format", choices=("csv", "libsvm"), default="csv")
    p.add_argument("--threads", type=int, default=_default_threads())
    p.add_argument("--h-grid", default=None, help="comma-separated depths, one matrix each")
    p.add_argument("--lambda-grid", default=None, help="comma-separated lambdas, one matrix each")
    p.add_argument(
        "--max-feature-mb",
        type=float,
        default=None,
        help="abort if materialized feature vectors exceed this budget",
    )
    p.set_defaults(func=cmd_gram)

    p = sub.add_parser("features", help="export sparse feature vectors")
    _add_dataset_args(p)
    _add_kernel_args(p)
    p.add_argument("--expand-codes", action="store_true", help="write canonical strings instead of codes")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_features)

    p = sub.add_parser("stats", help="print corpus statistics")
    _add_dataset_args(p)
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("dag-growth", help="per-graph shared-DAG node counts")
    _add_dataset_args(p)
    p.add_argument("--h", type=_parse_depth, default=None, help="depth limit or 'inf' (default)")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_dag_growth)

    p = sub.add_parser("dump-dag", help="DOT export of one decomposition DAG")
    _add_dataset_args(p)
    p.add_argument("--graph", type=int, required=True)
    p.add_argument("--root", type=int, required=True)
    p.add_argument("--h", type=_parse_depth, default=None)
    p.add_argument("--codes", action="store_true", help="annotate nodes with canonical codes")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_dump_dag)

    p = sub.add_parser("oracle")  # reference values for test fixtures; intentionally undocumented
    p.add_argument("--dataset", default=None)
    p.add_argument("--format", choices=("tu", "edgelist"), default="edgelist")
    p.add_argument("--name", default=None)
    p.add_argument("--pair", type=int, nargs=2, default=(0, 1), metavar=("I", "J"))
    p.add_argument("--kernel", choices=("st", "st+"), default="st")
    p.add_argument("--h", type=_parse_depth, default=1)
    p.add_argument("--lambda", dest="lam", type=float, default=1.0)
    p.add_argument("--stplus-include-limited-visits", action="store_true")
    p.add_argument("--random", type=int, default=None, help="generate N random cases instead")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_oracle)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "via_big2dag", False) and args.kernel != "st":
        parser.error("--via-big2dag supports only --kernel st")
    if getattr(args, "via_big2dag", False) and args.weighting != "exp":
        parser.error("--via-big2dag supports only --weighting exp")
    try:
        return args.func(args)
    except (OddKernelError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
