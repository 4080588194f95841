"""Batch command line: selection, coverage math, and a seeded benchmark.

Exit codes: 0 on success, 1 for any input error (bad flags included),
2 for internal failures. Summaries go to stdout, diagnostics and the
resolved configuration to stderr; machine-readable results only ever
land in the file named by --output.
"""

from __future__ import annotations

import argparse
import sys
import time

import numpy as np

from .coverage import empirical_coverage, expected_coverage, find_k_for_coverage
from .io_formats import read_embeddings, read_labels, read_result, write_result
from .selectors import run_selection
from .similarity import DEFAULT_ROW_CAP, pairwise_distances
from .synthetic import gaussian_mixture
from .types import METHODS, EmbeddingSet, InputError, SelectionConfig

_CLI_KERNELS = ("shifted-cosine", "cosine", "rbf")


class _Parser(argparse.ArgumentParser):
    # Flag problems are input errors (exit 1), not argparse's default exit 2.
    def error(self, message):
        raise InputError(message)


def _threads_arg(value: str):
    if value == "auto":
        return None
    try:
        threads = int(value)
    except ValueError:
        raise InputError(f"threads must be a positive integer or 'auto', got {value!r}") from None
    if threads < 1:
        raise InputError("threads must be a positive integer")
    return threads


def _echo_config(config: SelectionConfig) -> None:
    print(
        f"config: alpha={config.alpha} gamma={config.gamma} method={config.method} "
        f"similarity={config.similarity} rbf_bandwidth={config.rbf_bandwidth} "
        f"seed={config.seed} threads={config.threads or 'auto'}",
        file=sys.stderr,
    )


def _load_embedding_set(embeddings_path, labels_path) -> EmbeddingSet:
    vectors = read_embeddings(embeddings_path)
    labels = read_labels(labels_path)
    if len(labels) != vectors.shape[0]:
        raise InputError(
            f"label count {len(labels)} does not match embedding rows {vectors.shape[0]}"
        )
    return EmbeddingSet.from_arrays(vectors, labels)


def cmd_select(args) -> int:
    config = SelectionConfig(
        alpha=args.alpha,
        gamma=args.gamma,
        method=args.method,
        similarity=args.similarity.replace("-", "_"),
        rbf_bandwidth=args.rbf_bandwidth,
        seed=args.seed,
        threads=args.threads,
    )
    config.validate()
    _echo_config(config)
    emb = _load_embedding_set(args.embeddings, args.labels)
    result = run_selection(emb, config)
    print("class k budget objective coverage")
    for cls in result.classes:
        k = cls.k if cls.k is not None else "-"
        print(f"{cls.label} {k} {cls.budget} {cls.objective:.12g} "
              f"{cls.empirical_coverage:.12g}")
    phases = " ".join(f"{name}={dt:.3f}s" for name, dt in result.timings.items())
    print(f"phase wall-clock: {phases}", file=sys.stderr)
    if args.output:
        write_result(result, args.output)
        print(f"result written to {args.output}", file=sys.stderr)
    return 0


def cmd_find_k(args) -> int:
    print(f"config: n={args.n} s={args.s} gamma={args.gamma}", file=sys.stderr)
    plan = find_k_for_coverage(args.n, args.s, args.gamma)
    if plan.capped:
        print(
            f"warning: k capped at {plan.k}; expected coverage "
            f"{plan.achieved:.12g} misses the target {plan.gamma}",
            file=sys.stderr,
        )
    print(f"k={plan.k} expected_coverage={plan.achieved:.12g}")
    return 0


def cmd_expected_coverage(args) -> int:
    print(f"config: n={args.n} s={args.s} k={args.k}", file=sys.stderr)
    value = expected_coverage(args.n, args.s, args.k)
    print(f"expected_coverage={value:.12g}")
    return 0


def cmd_coverage(args) -> int:
    print(
        f"config: embeddings={args.embeddings} labels={args.labels} "
        f"selection={args.selection} k={args.k if args.k is not None else 'stored'}",
        file=sys.stderr,
    )
    emb = _load_embedding_set(args.embeddings, args.labels)
    doc = read_result(args.selection)
    id_to_row = {int(i): r for r, i in enumerate(emb.ids)}
    print("class coverage")
    for entry in doc.get("per_class", []):
        label = entry["class"]
        matches = np.flatnonzero(emb.label_values == label)
        if matches.size == 0:
            raise InputError(f"selection references unknown class {label}")
        rows = emb.class_rows(int(matches[0]))
        row_set = {int(r): local for local, r in enumerate(rows)}
        local_sel = []
        for sid in entry["selected_ids"]:
            row = id_to_row.get(int(sid))
            if row is None or row not in row_set:
                raise InputError(f"selection references unknown id {sid} for class {label}")
            local_sel.append(row_set[row])
        k = args.k if args.k is not None else entry.get("k")
        if k is None:
            if len(local_sel) == rows.size:
                print(f"{label} 1")
                continue
            raise InputError(f"class {label} has no stored k; pass --k")
        dist = pairwise_distances(emb.vectors[rows])
        value = empirical_coverage(dist, local_sel, int(k))
        print(f"{label} {value:.12g}")
    return 0


def build_coverage_table(emb: EmbeddingSet, alphas, gamma: float, seed: int,
                         similarity: str = "shifted_cosine") -> tuple[str, dict]:
    """Coverage of every method at every pruning ratio, as a fixed-width
    table string plus the raw values keyed by (method, alpha)."""
    values: dict[tuple[str, float], float] = {}
    timings: dict[tuple[str, float], dict] = {}
    for method in METHODS:
        for alpha in alphas:
            config = SelectionConfig(alpha=alpha, gamma=gamma, method=method,
                                     similarity=similarity, seed=seed)
            result = run_selection(emb, config)
            covered = sum(c.empirical_coverage * c.size for c in result.classes)
            values[(method, alpha)] = covered / result.total_samples
            timings[(method, alpha)] = result.timings
    width = max(len(m) for m in METHODS)
    lines = [f"{'alpha':<{width}} " + " ".join(f"{a:>8.2f}" for a in alphas)]
    for method in METHODS:
        cells = " ".join(f"{values[(method, a)]:>8.4f}" for a in alphas)
        lines.append(f"{method:<{width}} {cells}")
    return "\n".join(lines) + "\n", {"coverage": values, "timings": timings}


def cmd_bench(args) -> int:
    if args.n > DEFAULT_ROW_CAP:
        need = args.n * args.n * 8
        raise InputError(
            f"per-class size {args.n} exceeds the dense-matrix cap of "
            f"{DEFAULT_ROW_CAP}; a class matrix would need ~{need / 1e9:.1f} GB"
        )
    for alpha in args.alpha:
        if not (0.0 <= alpha < 1.0):
            raise InputError("alpha must be >= 0 and < 1")
    print(
        f"config: n={args.n} d={args.d} classes={args.classes} "
        f"alpha={','.join(str(a) for a in args.alpha)} gamma={args.gamma} seed={args.seed}",
        file=sys.stderr,
    )
    t0 = time.perf_counter()
    emb = gaussian_mixture(args.classes, args.n, args.d, args.seed)
    print(f"dataset: {emb.n} points, {emb.dim} dims, {emb.n_classes} classes "
          f"({time.perf_counter() - t0:.3f}s)")
    table, raw = build_coverage_table(emb, args.alpha, args.gamma, args.seed)
    for (method, alpha), phases in raw["timings"].items():
        total = sum(phases.values())
        detail = " ".join(f"{name}={dt:.3f}s" for name, dt in phases.items())
        print(f"{method} alpha={alpha:.2f}: total={total:.3f}s {detail}")
    print()
    print(f"coverage by method and pruning ratio (gamma={args.gamma})")
    print(table, end="")
    return 0


def build_parser() -> _Parser:
    parser = _Parser(
        prog="subzerocore",
        description="Training-free coreset selection toolkit",
    )
    sub = parser.add_subparsers(dest="command", metavar="command")
    fmt = argparse.ArgumentDefaultsHelpFormatter

    p = sub.add_parser("select", help="select a coreset from embeddings/labels",
                       formatter_class=fmt)
    p.add_argument("--embeddings", required=True, help="binary embedding file")
    p.add_argument("--labels", required=True, help="index,label CSV file")
    p.add_argument("--alpha", type=float, required=True,
                   help="pruning ratio: fraction of samples removed")
    p.add_argument("--gamma", type=float, default=0.6, help="coverage target")
    p.add_argument("--method", choices=METHODS, default="subzerocore",
                   help="selection method")
    p.add_argument("--similarity", choices=_CLI_KERNELS, default="shifted-cosine",
                   help="similarity kernel")
    p.add_argument("--rbf-bandwidth", type=float, default=1.0,
                   help="bandwidth for the rbf kernel")
    p.add_argument("--seed", type=int, default=0, help="seed for the random baseline")
    p.add_argument("--threads", type=_threads_arg, default=None, metavar="N|auto",
                   help="worker thread bound (default: auto)")
    p.add_argument("--output", default=None, help="write the result document here")
    p.set_defaults(handler=cmd_select)

    p = sub.add_parser("find-k", help="invert expected coverage to a neighborhood size",
                       formatter_class=fmt)
    p.add_argument("--n", type=int, required=True, help="ground-set size")
    p.add_argument("--s", type=int, required=True, help="coreset size")
    p.add_argument("--gamma", type=float, default=0.6, help="coverage target")
    p.set_defaults(handler=cmd_find_k)

    p = sub.add_parser("expected-coverage",
                       help="closed-form expected coverage of a random subset",
                       formatter_class=fmt)
    p.add_argument("--n", type=int, required=True, help="ground-set size")
    p.add_argument("--s", type=int, required=True, help="coreset size")
    p.add_argument("--k", type=int, required=True, help="neighborhood size")
    p.set_defaults(handler=cmd_expected_coverage)

    p = sub.add_parser("coverage", help="recompute empirical coverage of a stored selection",
                       formatter_class=fmt)
    p.add_argument("--embeddings", required=True, help="binary embedding file")
    p.add_argument("--labels", required=True, help="index,label CSV file")
    p.add_argument("--selection", required=True, help="result document from select")
    p.add_argument("--k", type=int, default=None,
                   help="neighborhood size (default: the k stored per class)")
    p.set_defaults(handler=cmd_coverage)

    p = sub.add_parser("bench", help="run all methods on a seeded synthetic dataset",
                       formatter_class=fmt)
    p.add_argument("--n", type=int, required=True, help="points per class")
    p.add_argument("--d", type=int, default=16, help="embedding dimension")
    p.add_argument("--classes", type=int, default=10, help="number of classes")
    p.add_argument("--alpha", type=float, nargs="+", required=True,
                   help="one or more pruning ratios")
    p.add_argument("--gamma", type=float, default=0.6, help="coverage target")
    p.add_argument("--seed", type=int, default=0, help="dataset seed")
    p.set_defaults(handler=cmd_bench)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        handler = getattr(args, "handler", None)
        if handler is None:
            parser.print_usage(sys.stderr)
            print("error: a subcommand is required", file=sys.stderr)
            return 1
        return handler(args)
    except SystemExit as exc:  # argparse --help
        return 0 if exc.code in (None, 0) else int(exc.code)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # pragma: no cover - defensive
        print(f"internal error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
