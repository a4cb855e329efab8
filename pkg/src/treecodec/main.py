"""
treecodec Command Line

One binary with a subcommand per experiment step. Every random choice flows
from ``--seed`` through named substreams, so a command is reproducible from
its flags alone.

Usage::

    treecodec gen-dataset --kind community-small --count 100 --output cs.txt
    treecodec split --dataset cs.txt --out-dir splits/
    treecodec train --dataset splits/community-small-train.txt --output model.json
    treecodec sample --model model.json --count 100 --output samples.txt
    treecodec eval-stats --reference splits/community-small-test.txt \\
        --generated samples.txt --output mmd.csv

Exit codes: 0 success, 1 usage error, 2 data error.
"""

from __future__ import annotations

import argparse
import logging
import sys
from collections.abc import Callable, Sequence
from pathlib import Path
from typing import Any, NoReturn

from rich import box
from rich.console import Console
from rich.table import Table

from treecodec import __version__
from treecodec.core.config import settings
from treecodec.core.errors import DecompositionError, GraphFormatError, TreeCodecError, UsageError
from treecodec.core.logging import setup_logging
from treecodec.core.random import substream
from treecodec.models.dataset import Dataset
from treecodec.models.graph import Graph, Permutation
from treecodec.models.sequence import DecisionSequence
from treecodec.schemas.reports import (
    LobsterRow,
    MmdRow,
    NllRow,
    NllSummaryRow,
    SpaceRow,
    TdStatsRow,
)
from treecodec.schemas.run import RunConfig
from treecodec.services.codec import SequenceMethod, decision_counts, encode_graph
from treecodec.services.datasets import (
    PRESETS,
    generate_preset,
    load_dataset,
    save_dataset,
    split_dataset,
)
from treecodec.services.decision_model import (
    DecisionModel,
    count_summary,
    load_model,
    save_model,
    train_count_model,
    train_tree_model,
    uniform_model,
)
from treecodec.services.decomposition import (
    bfs_layer_decomposition,
    is_minimal,
    minimal_decomposition,
    validate_decomposition,
    width,
)
from treecodec.services.experiments import ArtifactWriter, ExperimentPipeline
from treecodec.services.graphs import (
    bfs_layers,
    parse_edge_list,
    random_connected_graph,
    random_permutation,
    require_connected,
    serialize_edge_list,
)
from treecodec.services.process import replay_sequence
from treecodec.services.statistics import Kernel

logger = logging.getLogger(__name__)

console = Console(highlight=False, soft_wrap=True)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2


# ---------------------------------------------------------------------------
# Console Helpers
# ---------------------------------------------------------------------------


def log_info(msg: str) -> None:
    console.print(f"[blue]ℹ[/blue] {msg}")


def log_success(msg: str) -> None:
    console.print(f"[green]✓[/green] {msg}")


def log_error(msg: str) -> None:
    Console(stderr=True, highlight=False, soft_wrap=True).print(f"[red]✗[/red] {msg}")


def _table(title: str, rows: Sequence[Any], columns: Sequence[str]) -> Table:
    table = Table(title=title, box=box.ROUNDED)
    for column in columns:
        table.add_column(column, justify="right" if column != columns[0] else "left")
    for row in rows:
        values = row.model_dump()
        table.add_row(*(_cell(values[c]) for c in columns))
    return table


def _cell(value: Any) -> str:
    if isinstance(value, float):
        return f"{value:.4f}"
    return "-" if value is None else str(value)


# ---------------------------------------------------------------------------
# Argument parsing
# ---------------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    """Argument errors raise :class:`UsageError` instead of exiting with 2."""

    def error(self, message: str) -> NoReturn:
        raise UsageError(message)


def _methods(text: str) -> list[SequenceMethod]:
    try:
        return [SequenceMethod(token.strip()) for token in text.split(",") if token.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"unknown method in '{text}' (use td,bfs,dfs)") from exc


def _named_path(text: str) -> tuple[str, Path]:
    name, sep, path = text.partition("=")
    if not sep or not name or not path:
        raise argparse.ArgumentTypeError(f"expected NAME=PATH, got '{text}'")
    return name, Path(path)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="treecodec", description="Tree-decomposition graph codec toolkit")
    parser.add_argument("--version", action="version", version=f"treecodec {__version__}")
    parser.add_argument("--log-level", default=None, help="Override TREECODEC_LOG_LEVEL")
    sub = parser.add_subparsers(dest="command", required=True)

    def command(name: str, help_text: str, handler: Callable[[argparse.Namespace], int]) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_text, description=help_text)
        p.add_argument("--seed", type=int, default=settings.SEED, help="Root seed")
        p.set_defaults(handler=handler)
        return p

    p = command("decompose", "Minimal tree decomposition of one graph with checks", cmd_decompose)
    source = p.add_mutually_exclusive_group(required=True)
    source.add_argument("--input", type=Path, help="Edge-list file")
    source.add_argument("--random", type=int, metavar="N", help="Random connected G(N, p) instead")
    p.add_argument("--p", type=float, default=0.3, help="Edge probability for --random")
    p.add_argument("--shuffle", action="store_true", help="Random tie order instead of identity")
    p.add_argument("--output", type=Path, help="Write the decomposition record here")

    p = command("encode", "Graph to decision sequence", cmd_encode)
    p.add_argument("--input", type=Path, required=True)
    p.add_argument("--output", type=Path, required=True)
    p.add_argument("--identity", action="store_true", help="Use the identity ordering")

    p = command("decode", "Decision sequence to graph", cmd_decode)
    p.add_argument("--input", type=Path, required=True)
    p.add_argument("--output", type=Path, required=True)
    p.add_argument("--decomposition", type=Path, help="Also write the replayed decomposition")

    p = command("space", "Distinct sequences per graph for td/bfs/dfs", cmd_space)
    p.add_argument("--dataset", type=Path, required=True)
    p.add_argument("--perms", type=int, default=settings.SPACE_PERMS)
    p.add_argument("--methods", type=_methods, default=list(SequenceMethod))
    p.add_argument("--output", type=Path, default=Path("space.csv"))

    p = command("td-stats", "Minimal decomposition shape per graph", cmd_td_stats)
    p.add_argument("--dataset", type=Path, required=True)
    p.add_argument("--output", type=Path, default=Path("td_stats.csv"))

    p = command("gen-dataset", "Generate a synthetic dataset", cmd_gen_dataset)
    p.add_argument("--kind", choices=list(PRESETS), required=True)
    p.add_argument("--count", type=int)
    p.add_argument("--min-n", type=int)
    p.add_argument("--max-n", type=int)
    p.add_argument("--p-in", type=float, help="Community: intra-community edge probability")
    p.add_argument("--inter-frac", type=float, help="Community: cross edges per node")
    p.add_argument("--backbone", type=float, help="Lobster: expected backbone length")
    p.add_argument("--p1", type=float, help="Lobster: level-1 growth probability")
    p.add_argument("--p2", type=float, help="Lobster: level-2 growth probability")
    p.add_argument("--output", type=Path, required=True)

    p = command("split", "70/10/20 split of a dataset", cmd_split)
    p.add_argument("--dataset", type=Path, required=True)
    p.add_argument("--out-dir", type=Path, required=True)

    p = command("train", "Train a count model", cmd_train)
    p.add_argument("--dataset", type=Path, required=True)
    p.add_argument("--output", type=Path, required=True)
    p.add_argument("--epochs", type=int, default=settings.EPOCHS)
    p.add_argument("--alpha", type=float, default=settings.ALPHA)
    p.add_argument("--trees", action="store_true", help="Tree-length stage only")

    for name, handler in (("sample", cmd_sample), ("sample-trees", cmd_sample_trees)):
        p = command(name, f"Draw {'trees' if name == 'sample-trees' else 'graphs'} from a model", handler)
        p.add_argument("--model", required=True, help="Model file, or 'uniform'")
        p.add_argument("--count", type=int, default=100)
        p.add_argument("--max-nodes", type=int, default=settings.MAX_NODES)
        p.add_argument("--plr-cap", type=int, help="Defaults to the model's cap")
        p.add_argument("--output", type=Path, required=True)

    p = command("eval-nll", "Expected and marginal NLL per split", cmd_eval_nll)
    p.add_argument("--model", required=True, help="Model file, or 'uniform'")
    p.add_argument("--split", type=_named_path, action="append", required=True, metavar="NAME=PATH")
    p.add_argument("--perms", type=int, default=settings.NLL_PERMS)
    p.add_argument("--plr-cap", type=int, help="Cap of the uniform model")
    p.add_argument("--trees", action="store_true", help="Score tree PLRs only")
    p.add_argument("--label", help="Model label in the CSV (default: file stem)")
    p.add_argument("--output", type=Path, default=Path("nll.csv"))
    p.add_argument("--per-graph", type=Path, help="Also write one row per graph")

    p = command("eval-stats", "MMD of graph statistics against a reference set", cmd_eval_stats)
    p.add_argument("--reference", type=Path, required=True)
    p.add_argument("--generated", type=Path, required=True)
    p.add_argument("--train", type=Path, help="Also report the train set against the reference")
    p.add_argument("--kernel", choices=[k.value for k in Kernel], default=Kernel.GAUSSIAN_EMD.value)
    p.add_argument("--sigma", type=float, default=settings.MMD_SIGMA)
    p.add_argument("--output", type=Path, default=Path("mmd.csv"))
    p.add_argument("--json", type=Path, help="Also write the JSON report")

    p = command("lobster-acc", "Fraction of lobster trees in a dataset", cmd_lobster_acc)
    p.add_argument("--dataset", type=Path, required=True)
    p.add_argument("--label", default=None)
    p.add_argument("--output", type=Path)

    return parser


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------


def _read_graph(path: Path) -> Graph:
    return parse_edge_list(path.read_text(encoding="utf-8"))


def _model(spec: str, plr_cap: int | None = None) -> DecisionModel:
    if spec == "uniform":
        return uniform_model(plr_cap)
    return load_model(Path(spec))


def _positive(name: str, value: int) -> None:
    if value < 1:
        raise UsageError(f"--{name} ({value}) must be positive")


def cmd_decompose(args: argparse.Namespace) -> int:
    if args.input is not None:
        g = _read_graph(args.input)
        source = str(args.input)
    else:
        _positive("random", args.random)
        g = random_connected_graph(args.random, args.p, substream(args.seed, "graph"))
        source = f"G({args.random}, {args.p})"
    if g.n < 1:
        raise GraphFormatError("decompose needs at least one node")
    require_connected(g, "decompose")
    order = (
        random_permutation(g.n, substream(args.seed, "perms")) if args.shuffle else Permutation.identity(g.n)
    )
    run = RunConfig(command="decompose", seed=args.seed, paths=_paths(input=args.input, output=args.output))

    td = minimal_decomposition(g, order)
    minimal = is_minimal(td)
    report = validate_decomposition(g, td)
    k = width(td)
    bound = g.n - k + 1

    layer_td = bfs_layer_decomposition(g, order.order[0])
    max_layer = max(len(layer) for layer in bfs_layers(g, order.order[0], Permutation.identity(g.n)))
    layer_ok = validate_decomposition(g, layer_td).ok and width(layer_td) <= 2 * max_layer

    log_info(f"{source}: n={g.n}, m={g.m}")
    console.print(f"validation: {report.summary()}")
    console.print(f"minimal: {'yes' if minimal else 'no'}")
    console.print(f"width: {k}")
    console.print(f"r={td.r} {'≤' if td.r <= bound else '>'} n−k+1={bound}")
    console.print(
        f"bfs-layer width {width(layer_td)} {'≤' if layer_ok else '>'} 2×max layer={2 * max_layer}"
    )
    with ArtifactWriter(run) as writer:
        if args.output is not None:
            writer.write_text(args.output, td.to_text())
        if not (report.ok and minimal and td.r <= bound and layer_ok):
            raise DecompositionError(f"{source}: decomposition checks failed")
    return EXIT_OK


def cmd_encode(args: argparse.Namespace) -> int:
    g = _read_graph(args.input)
    perm = Permutation.identity(g.n) if args.identity else random_permutation(g.n, substream(args.seed, "perms"))
    ds = encode_graph(g, perm)
    counts = decision_counts(ds, width(minimal_decomposition(g, perm)))
    run = RunConfig(
        command="encode",
        seed=args.seed,
        paths=_paths(input=args.input, output=args.output),
        options={"identity": args.identity},
    )
    with ArtifactWriter(run) as writer:
        writer.write_text(args.output, ds.to_text())
    log_success(
        f"Encoded n={g.n}, m={g.m}: r={counts.r}, k={counts.k}, {counts.total} charged decisions "
        f"(tree {counts.tree_steps}, share {counts.sharing_steps}, add {counts.add_steps}, "
        f"edge {counts.edge_steps})"
    )
    return EXIT_OK


def cmd_decode(args: argparse.Namespace) -> int:
    ds = DecisionSequence.from_text(args.input.read_text(encoding="utf-8"))
    result = replay_sequence(ds)
    run = RunConfig(
        command="decode",
        seed=args.seed,
        paths=_paths(input=args.input, output=args.output, decomposition=args.decomposition),
    )
    with ArtifactWriter(run) as writer:
        writer.write_text(args.output, serialize_edge_list(result.graph))
        if args.decomposition is not None:
            writer.write_text(args.decomposition, result.decomposition.to_text())
    log_success(f"Decoded n={result.graph.n}, m={result.graph.m} from {ds.r} supernodes")
    return EXIT_OK


def cmd_space(args: argparse.Namespace) -> int:
    _positive("perms", args.perms)
    if not args.methods:
        raise UsageError("--methods selects nothing")
    ds = load_dataset(args.dataset)
    run = RunConfig(
        command="space",
        seed=args.seed,
        n_perms=args.perms,
        paths=_paths(dataset=args.dataset, output=args.output),
        options={"methods": [m.value for m in args.methods]},
    )
    rows = ExperimentPipeline(args.seed).space(ds, args.perms, args.methods)
    with ArtifactWriter(run) as writer:
        writer.write_csv(args.output, rows, SpaceRow)
    log_success(f"{len(rows)} graphs → {args.output}")
    return EXIT_OK


def cmd_td_stats(args: argparse.Namespace) -> int:
    ds = load_dataset(args.dataset)
    run = RunConfig(command="td-stats", seed=args.seed, paths=_paths(dataset=args.dataset, output=args.output))
    rows = ExperimentPipeline(args.seed).td_stats(ds)
    with ArtifactWriter(run) as writer:
        writer.write_csv(args.output, rows, TdStatsRow)
    widths = [r.width for r in rows]
    log_success(
        f"{len(rows)} graphs → {args.output} (width {min(widths)}..{max(widths)}, "
        f"min slack {min(r.slack for r in rows)})"
    )
    return EXIT_OK


def cmd_gen_dataset(args: argparse.Namespace) -> int:
    flags = {
        "count": args.count,
        "min_n": args.min_n,
        "max_n": args.max_n,
        "p_in": args.p_in,
        "inter_frac": args.inter_frac,
        "expected_backbone": args.backbone,
        "p1": args.p1,
        "p2": args.p2,
    }
    overrides = {k: v for k, v in flags.items() if v is not None}
    run = RunConfig(
        command="gen-dataset",
        seed=args.seed,
        paths=_paths(output=args.output),
        options={"kind": args.kind, **overrides},
    )
    ds = generate_preset(args.kind, args.seed, **overrides)
    with ArtifactWriter(run) as writer:
        save_dataset(ds, writer.track(args.output))
    sizes = ds.node_counts
    log_success(f"{len(ds)} {args.kind} graphs (n {min(sizes)}..{max(sizes)}) → {args.output}")
    return EXIT_OK


def cmd_split(args: argparse.Namespace) -> int:
    ds = load_dataset(args.dataset)
    run = RunConfig(command="split", seed=args.seed, paths=_paths(dataset=args.dataset, out_dir=args.out_dir))
    parts = split_dataset(ds, args.seed)
    with ArtifactWriter(run) as writer:
        for part in parts:
            save_dataset(part, writer.track(args.out_dir / f"{part.name}.txt"))
    log_success(" / ".join(f"{p.name}: {len(p)}" for p in parts))
    return EXIT_OK


def cmd_train(args: argparse.Namespace) -> int:
    _positive("epochs", args.epochs)
    ds = load_dataset(args.dataset)
    if args.trees:
        model = train_tree_model(ds.graphs, alpha=args.alpha)
    else:
        model = train_count_model(ds.graphs, epochs=args.epochs, alpha=args.alpha, seed=args.seed)
    run = RunConfig(
        command="train",
        seed=args.seed,
        alpha=args.alpha,
        plr_cap=model.plr_cap,
        paths=_paths(dataset=args.dataset, output=args.output),
        options={"epochs": args.epochs, "trees": args.trees},
    )
    with ArtifactWriter(run) as writer:
        save_model(model, writer.track(args.output), run=run.model_dump(mode="json"))
    summary = ", ".join(f"{k} {v}" for k, v in count_summary(model).items())
    log_success(f"Model → {args.output} (plr_cap={model.plr_cap}; {summary})")
    return EXIT_OK


def _sample(args: argparse.Namespace, trees: bool) -> int:
    _positive("count", args.count)
    _positive("max-nodes", args.max_nodes)
    model = _model(args.model, args.plr_cap)
    pipeline = ExperimentPipeline(args.seed)
    draw = pipeline.sample_trees if trees else pipeline.sample_graphs
    ds = draw(model, args.count, args.max_nodes, args.plr_cap)
    run = RunConfig(
        command="sample-trees" if trees else "sample",
        seed=args.seed,
        plr_cap=args.plr_cap or model.plr_cap,
        max_nodes=args.max_nodes,
        alpha=model.alpha,
        paths=_paths(model=args.model, output=args.output),
        options={"count": args.count},
    )
    with ArtifactWriter(run) as writer:
        save_dataset(ds, writer.track(args.output))
    sizes = ds.node_counts
    log_success(f"{len(ds)} samples (n {min(sizes)}..{max(sizes)}) → {args.output}")
    return EXIT_OK


def cmd_sample(args: argparse.Namespace) -> int:
    return _sample(args, trees=False)


def cmd_sample_trees(args: argparse.Namespace) -> int:
    return _sample(args, trees=True)


def cmd_eval_nll(args: argparse.Namespace) -> int:
    _positive("perms", args.perms)
    model = _model(args.model, args.plr_cap)
    label = args.label or ("uniform" if args.model == "uniform" else Path(args.model).stem)
    splits: list[tuple[str, Dataset]] = [(name, load_dataset(path)) for name, path in args.split]
    run = RunConfig(
        command="eval-nll",
        seed=args.seed,
        plr_cap=model.plr_cap,
        alpha=model.alpha,
        n_perms=args.perms,
        paths=_paths(model=args.model, output=args.output, per_graph=args.per_graph)
        | {f"split:{name}": str(path) for name, path in args.split},
        options={"trees": args.trees, "label": label},
    )

    pipeline = ExperimentPipeline(args.seed)
    per_graph: list[NllRow] = []
    summary: list[NllSummaryRow] = []
    for name, ds in splits:
        rows = pipeline.nll_rows(model, ds, name, args.perms, trees=args.trees)
        per_graph.extend(rows)
        summary.append(pipeline.summarize_nll(rows, name, label))

    with ArtifactWriter(run) as writer:
        writer.write_csv(args.output, summary, NllSummaryRow)
        if args.per_graph is not None:
            writer.write_csv(args.per_graph, per_graph, NllRow)
    console.print(_table("NLL", summary, list(NllSummaryRow.model_fields)))
    return EXIT_OK


def cmd_eval_stats(args: argparse.Namespace) -> int:
    if args.sigma <= 0:
        raise UsageError(f"--sigma ({args.sigma}) must be positive")
    kernel = Kernel(args.kernel)
    reference = load_dataset(args.reference)
    generated = load_dataset(args.generated)
    run = RunConfig(
        command="eval-stats",
        seed=args.seed,
        sigma=args.sigma,
        paths=_paths(
            reference=args.reference,
            generated=args.generated,
            train=args.train,
            output=args.output,
            json=args.json,
        ),
        options={"kernel": kernel.value},
    )
    logger.info("MMD kernel=%s sigma=%.4f", kernel, args.sigma)

    pipeline = ExperimentPipeline(args.seed)
    rows: list[MmdRow] = []
    if args.train is not None:
        rows.append(pipeline.mmd_row("train", reference, load_dataset(args.train), kernel, args.sigma))
    rows.append(pipeline.mmd_row("generated", reference, generated, kernel, args.sigma))

    with ArtifactWriter(run) as writer:
        writer.write_csv(args.output, rows, MmdRow)
        if args.json is not None:
            report = pipeline.mmd_report(rows, kernel, args.sigma)
            writer.write_json(args.json, report.model_dump(mode="json"))
    console.print(_table(f"MMD ({kernel.value}, σ={args.sigma})", rows, list(MmdRow.model_fields)))
    return EXIT_OK


def cmd_lobster_acc(args: argparse.Namespace) -> int:
    ds = load_dataset(args.dataset)
    row: LobsterRow = ExperimentPipeline.lobster_row(args.label or ds.name, ds)
    run = RunConfig(
        command="lobster-acc", seed=args.seed, paths=_paths(dataset=args.dataset, output=args.output)
    )
    with ArtifactWriter(run) as writer:
        if args.output is not None:
            writer.write_csv(args.output, [row], LobsterRow)
    console.print(f"lobster accuracy: {row.accuracy:.4f} ({row.graphs} graphs)")
    return EXIT_OK


def _paths(**paths: Path | str | None) -> dict[str, str]:
    return {name: str(path) for name, path in paths.items() if path is not None}


# ---------------------------------------------------------------------------
# Main
# ---------------------------------------------------------------------------


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        log_error(f"usage: {exc}")
        return EXIT_USAGE

    setup_logging(args.log_level)
    logger.info("treecodec %s %s (seed=%d)", __version__, args.command, args.seed)
    try:
        return int(args.handler(args))
    except UsageError as exc:
        log_error(f"usage: {exc}")
        return EXIT_USAGE
    except (TreeCodecError, OSError) as exc:
        logger.error("%s failed: %s", args.command, exc)
        log_error(str(exc))
        return EXIT_DATA
    except ValueError as exc:
        log_error(f"usage: {exc}")
        return EXIT_USAGE


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
