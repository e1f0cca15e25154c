"""Command-line front end.

Subcommands cover the full pipeline: gen (ensemble to graph files),
features / label (graph files to feature CSV), train / eval (feature CSV
to tree and metrics), solve (one graph, one query), sweep / dsweep
(ensemble config to aggregate CSVs). Every run echoes its resolved
semantic configuration into the output as # comment lines; execution-only
knobs like --jobs are deliberately not part of that echo, so outputs stay
byte-identical across worker counts.

Exit codes: 0 success (solve: found / YES), 1 solve: no solution / NO,
2 solve: unknown (budget ran out), 64 usage errors, 65 unreadable input
data, 74 I/O errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import bigraph, dtree, features, phaselab, solver

USAGE_EXIT = 64
DATA_EXIT = 65
IO_EXIT = 74


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse defaults to exit code 2
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(USAGE_EXIT)


def _read_graph(path: str) -> tuple[bigraph.BipartiteGraph, int]:
    """Read a graph file with observation-log semantics.

    w is the raw record count; for duplicate-free edge lists that equals
    |E|, so both formats go through the same path.
    """
    text = Path(path).read_text(encoding="utf-8")
    return bigraph.from_observation_log(text)


def _budget_from(arg: int | None) -> solver.SearchBudget:
    return solver.SearchBudget(arg) if arg is not None and arg > 0 else solver.UNLIMITED


def _cmd_gen(args) -> int:
    config = phaselab.config_from_json(Path(args.config).read_text(encoding="utf-8"))
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    uniform = isinstance(config.generator, phaselab.UniformGenerator)
    suffix = "edges" if uniform else "log"
    for index in range(config.instance_count):
        graph, _ = phaselab.generate_instance(config, index)
        if uniform:
            body = bigraph.to_edge_list(graph)
        else:
            seed = phaselab.instance_seed(config.seed, index)
            gen = config.generator
            records = phaselab.powerlaw_records(
                gen.u_pool, gen.v_pool, gen.w_observations, gen.exponent, seed
            )
            body = "".join(f"{a} {t}\n" for a, t in records)
        header = (
            f"# config: {phaselab.config_to_json(config)}\n"
            f"# instance: {index}\n"
        )
        (out_dir / f"instance_{index:05d}.{suffix}").write_text(
            header + body, encoding="utf-8"
        )
    print(f"wrote {config.instance_count} files to {out_dir}")
    return 0


def _collect_features(paths, budget: solver.SearchBudget | None):
    rows = []
    for path in paths:
        graph, w = _read_graph(path)
        fv = features.extract_features(graph, w)
        if budget is not None:
            fv = fv.with_label(features.label_instance(graph, budget))
        rows.append(fv)
    return rows


def _write_feature_output(rows, out: str, config_note: str) -> None:
    text = f"# config: {config_note}\n" + features.features_csv_text(rows)
    Path(out).write_text(text, encoding="utf-8")


def _cmd_features(args) -> int:
    rows = _collect_features(args.graphs, None)
    _write_feature_output(rows, args.out, f"features files={len(args.graphs)}")
    print(f"wrote {len(rows)} feature rows to {args.out}")
    return 0


def _cmd_label(args) -> int:
    budget = solver.SearchBudget(args.budget)
    rows = _collect_features(args.graphs, budget)
    note = f"label budget={args.budget} files={len(args.graphs)}"
    _write_feature_output(rows, args.out, note)
    hard = sum(1 for fv in rows if fv.label is features.Label.HARD)
    print(f"wrote {len(rows)} labeled rows to {args.out} ({hard} HARD)")
    return 0


def _cmd_train(args) -> int:
    dataset = features.read_features_csv(Path(args.data).read_text(encoding="utf-8"))
    params = dtree.TrainParams(args.min_leaf, args.max_depth, args.min_gain_ratio)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    note = (
        f"train data={Path(args.data).name} min_leaf={params.min_leaf} "
        f"max_depth={params.max_depth} min_gain_ratio={params.min_gain_ratio} "
        f"cv={args.cv} seed={args.seed}"
    )
    if args.cv:
        reports, tree = dtree.kfold_cv(dataset, args.cv, params, args.seed)
        lines = [f"# config: {note}", "fold,accuracy,fpr,fnr,auc"]
        for i, rep in enumerate(reports):
            auc = "" if rep.auc is None else repr(rep.auc)
            lines.append(f"{i},{rep.accuracy!r},{rep.fpr!r},{rep.fnr!r},{auc}")
        (out_dir / "cv_metrics.csv").write_text("\n".join(lines) + "\n", encoding="utf-8")
    else:
        tree = dtree.train_c45(dataset, params)
    (out_dir / "tree.json").write_text(dtree.tree_to_json(tree), encoding="utf-8")
    (out_dir / "tree.txt").write_text(
        f"# config: {note}\n" + dtree.tree_to_text(tree), encoding="utf-8"
    )
    print(f"trained on {len(dataset)} rows; tree depth {tree.depth()}; wrote {out_dir}")
    return 0


def _cmd_eval(args) -> int:
    dataset = features.read_features_csv(Path(args.data).read_text(encoding="utf-8"))
    tree = dtree.tree_from_json(Path(args.tree).read_text(encoding="utf-8"))
    report = dtree.evaluate(tree, dataset)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    note = f"eval data={Path(args.data).name} tree={Path(args.tree).name}"
    metrics = [
        f"# config: {note}",
        "metric,value",
        f"fpr,{report.fpr!r}",
        f"fnr,{report.fnr!r}",
        f"accuracy,{report.accuracy!r}",
        f"auc,{'' if report.auc is None else repr(report.auc)}",
        f"single_class,{str(report.single_class).lower()}",
    ]
    (out_dir / "metrics.csv").write_text("\n".join(metrics) + "\n", encoding="utf-8")
    if report.roc_points is not None:
        (out_dir / "roc.csv").write_text(
            f"# config: {note}\n" + dtree.eval_csv_text(report.roc_points, ("fpr", "tpr")),
            encoding="utf-8",
        )
    if report.pr_points is not None:
        (out_dir / "pr.csv").write_text(
            f"# config: {note}\n"
            + dtree.eval_csv_text(report.pr_points, ("recall", "precision")),
            encoding="utf-8",
        )
    print(
        f"evaluated {len(dataset)} rows: accuracy {report.accuracy:.4f}, "
        f"fpr {report.fpr:.4f}, fnr {report.fnr:.4f}"
    )
    return 0


def _cmd_solve(args) -> int:
    graph, _ = _read_graph(args.graph)
    budget = _budget_from(args.budget)
    mode = solver.BlacklistMode(args.blacklist)
    verdict: bool | None
    if args.t is not None:
        report, verdict = solver.decide(
            graph, args.t, args.z, budget,
            blacklist_mode=mode, guarantee_check=args.guarantee_check,
        )
    elif args.max_weight:
        report = solver.find_max_weight_of_size(
            graph, args.z, budget,
            blacklist_mode=mode, guarantee_check=args.guarantee_check,
        )
        verdict = None if report.budget_exhausted else report.found
    else:
        report = solver.find_biclique(
            graph, args.z, budget,
            blacklist_mode=mode, guarantee_check=args.guarantee_check,
        )
        verdict = None if report.budget_exhausted else report.found
    budget_note = args.budget if args.budget else "unlimited"
    print(
        f"# config: graph={Path(args.graph).name} z={args.z} t={args.t} "
        f"max_weight={args.max_weight} budget={budget_note} "
        f"blacklist={mode.value} guarantee_check={args.guarantee_check}"
    )
    if report.budget_exhausted:
        outcome = "unknown"
    elif report.found:
        outcome = "found"
    else:
        outcome = "no-solution"
    print(f"outcome: {outcome}")
    if report.biclique is not None:
        bc = report.biclique
        print(f"weight: {bc.weight}")
        print(f"size: {bc.size}")
        print("u_set: " + " ".join(graph.u_label(i) for i in bc.u_set))
        print("v_set: " + " ".join(graph.v_label(j) for j in bc.v_set))
    print(f"combinations_explored: {report.combinations_explored}")
    print(f"blacklist_skips: {report.blacklist_skips}")
    print(f"max_r_reached: {report.max_r_reached}")
    print(f"budget_exhausted: {str(report.budget_exhausted).lower()}")
    if verdict is None:
        return 2
    return 0 if verdict else 1


def _cmd_sweep(args) -> int:
    config = phaselab.config_from_json(Path(args.config).read_text(encoding="utf-8"))
    result = phaselab.run_sweep(config, bin_width=args.bin_width, jobs=args.jobs)
    phaselab.write_sweep_csv(result, args.out)
    print(f"wrote {len(result.rows)} bins to {args.out}")
    return 0


def _cmd_dsweep(args) -> int:
    config = phaselab.config_from_json(Path(args.config).read_text(encoding="utf-8"))
    d_values = [int(part) for part in args.d_values.split(",") if part.strip()]
    result = phaselab.run_distance_sweep(config, d_values, jobs=args.jobs)
    phaselab.write_distance_csv(result, args.out)
    print(
        f"wrote {len(result.rows)} distance rows to {args.out} "
        f"({result.n_skipped} instances skipped)"
    )
    return 0


def build_parser() -> _Parser:
    parser = _Parser(
        prog="bicliquelab",
        description="Biclique search lab: solve, featurize, classify, sweep.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="write ensemble instances as graph files")
    p.add_argument("--config", required=True, help="ensemble config JSON path")
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=_cmd_gen)

    p = sub.add_parser("features", help="extract feature CSV from graph files")
    p.add_argument("graphs", nargs="+", help="edge-list or observation-log files")
    p.add_argument("--out", required=True, help="output CSV path")
    p.set_defaults(func=_cmd_features)

    p = sub.add_parser("label", help="extract features plus EASY/HARD labels")
    p.add_argument("graphs", nargs="+")
    p.add_argument("--out", required=True)
    p.add_argument(
        "--budget",
        type=int,
        default=features.DEFAULT_LABEL_BUDGET,
        help="combination budget for the labeling run",
    )
    p.set_defaults(func=_cmd_label)

    p = sub.add_parser("train", help="train a gain-ratio tree from labeled CSV")
    p.add_argument("--data", required=True, help="labeled feature CSV")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--min-leaf", type=int, default=2)
    p.add_argument("--max-depth", type=int, default=25)
    p.add_argument("--min-gain-ratio", type=float, default=0.0)
    p.add_argument("--cv", type=int, default=0, help="k for k-fold CV (0 = plain fit)")
    p.add_argument("--seed", type=int, default=0, help="shuffling seed for --cv")
    p.set_defaults(func=_cmd_train)

    p = sub.add_parser("eval", help="evaluate a stored tree on labeled CSV")
    p.add_argument("--data", required=True)
    p.add_argument("--tree", required=True, help="tree.json path")
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=_cmd_eval)

    p = sub.add_parser("solve", help="search one graph for a size-z biclique")
    p.add_argument("graph", help="edge-list or observation-log file")
    p.add_argument("--z", type=int, required=True, help="target set size")
    p.add_argument("--t", type=int, default=None, help="decide weight >= t instead")
    p.add_argument(
        "--max-weight",
        action="store_true",
        help="return the weight-maximal size-z biclique",
    )
    p.add_argument("--budget", type=int, default=0, help="0 means unlimited")
    p.add_argument(
        "--blacklist",
        choices=[m.value for m in solver.BlacklistMode],
        default=solver.BlacklistMode.SUBSET.value,
    )
    p.add_argument(
        "--guarantee-check",
        action="store_true",
        help="answer z > z_max requests at zero cost via the gram bound",
    )
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("sweep", help="order-parameter sweep over an ensemble")
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--bin-width", type=float, default=phaselab.DEFAULT_BIN_WIDTH)
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("dsweep", help="cost sweep against distance d = z_max - z")
    p.add_argument("--config", required=True)
    p.add_argument("--d-values", required=True, help="comma-separated d list")
    p.add_argument("--out", required=True)
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=_cmd_dsweep)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else USAGE_EXIT
    try:
        return args.func(args)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return IO_EXIT
    except (bigraph.GraphParseError, ValueError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return DATA_EXIT


if __name__ == "__main__":
    sys.exit(main())
