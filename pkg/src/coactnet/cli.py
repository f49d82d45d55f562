"""Command-line entry point.

Batch workflow: ``synth`` or a real corpus -> ``build`` -> ``filter`` /
``sweep`` / ``analyze`` / ``overlap`` -> ``export`` -> ``serve`` for the
interactive explorer. ``analyze`` runs the whole pipeline from the
config in one shot.
"""

from __future__ import annotations

import json
import os
import random
import sys
from typing import Dict, Optional

import click

from coactnet import export, filtering, metrics, plots, similarity, synthgen, tuning
from coactnet.filtering import EvidenceUnavailableError
from coactnet.ingest import parse_dataset_file, serialize_records, summarize
from coactnet.model import FilterSpec, Layer, LayerKind
from coactnet.pipeline import (
    ConfigError,
    PipelineConfig,
    load_config,
    run_pipeline,
    sweep_rows_as_dicts,
)

EXIT_MISSING_CORPUS = 2
EXIT_BAD_CONFIG = 3


@click.group()
@click.option("--config", "config_path", type=click.Path(), default=None, help="Pipeline config file (YAML).")
@click.option("--out", "out_dir", type=click.Path(), default="out", show_default=True, help="Artifact directory.")
@click.option("--seed", type=int, default=0, show_default=True, help="RNG seed for synthetic generation.")
@click.option("--threads", type=int, default=None, help="Worker threads for heavy kernels.")
@click.option("--drop-low-info-frames", is_flag=True, help="Drop gradient-free frames before video matching.")
@click.pass_context
def main(ctx, config_path, out_dir, seed, threads, drop_low_info_frames):
    """Multilayer co-action network toolkit."""
    if threads:
        try:
            import numba

            numba.set_num_threads(threads)
        except ImportError:
            pass
    ctx.obj = {
        "config_path": config_path,
        "out": out_dir,
        "seed": seed,
        "drop_low_info_frames": drop_low_info_frames,
    }


def _load_pipeline_config(ctx, corpus: Optional[str] = None) -> PipelineConfig:
    overrides = {}
    if corpus:
        overrides["corpus"] = corpus
    if ctx.obj["drop_low_info_frames"]:
        overrides["drop_low_info_frames"] = True
    try:
        return load_config(ctx.obj["config_path"], overrides)
    except ConfigError as exc:
        click.echo(f"invalid config: {exc}", err=True)
        sys.exit(EXIT_BAD_CONFIG)


def _parse_corpus(ctx, config: PipelineConfig):
    if not config.corpus:
        click.echo("no corpus given (use --corpus or the config file)", err=True)
        sys.exit(EXIT_MISSING_CORPUS)
    if not os.path.exists(config.corpus):
        click.echo(f"corpus not found: {config.corpus}", err=True)
        sys.exit(EXIT_MISSING_CORPUS)
    return parse_dataset_file(config.corpus)


def _load_built_layers(out_dir: str) -> Dict[LayerKind, Layer]:
    import glob

    layers: Dict[LayerKind, Layer] = {}
    for path in sorted(glob.glob(os.path.join(out_dir, "layers", "*.json"))):
        layer, _names = export.load_layer(path)
        layers[layer.kind] = layer
    if not layers:
        click.echo(f"no built layers under {out_dir}; run `build` first", err=True)
        sys.exit(1)
    return layers


def _load_one_layer(out_dir: str, kind_str: str) -> Layer:
    kind = LayerKind.from_string(kind_str)
    path = os.path.join(out_dir, "layers", f"{kind.value}.json")
    if not os.path.exists(path):
        click.echo(f"layer {kind.value} not built under {out_dir}", err=True)
        sys.exit(1)
    layer, _names = export.load_layer(path)
    return layer


@main.command()
@click.option("--corpus", type=click.Path(), default=None)
@click.pass_context
def ingest(ctx, corpus):
    """Validate a corpus and write its summary."""
    config = _load_pipeline_config(ctx, corpus)
    posts, summary, report = _parse_corpus(ctx, config)
    out = ctx.obj["out"]
    export.write_atomic(os.path.join(out, "summary.json"), export.canonical_json(summary.as_dict()))
    export.write_atomic(
        os.path.join(out, "parse_report.json"),
        export.canonical_json(
            {"errors": [[line, msg] for line, msg in report.errors], "duplicates": report.duplicates}
        ),
    )
    click.echo(f"{summary.post_count} posts from {summary.user_count} accounts")
    if report.errors:
        click.echo(f"{len(report.errors)} malformed lines skipped", err=True)


@main.command()
@click.option("--corpus", type=click.Path(), default=None)
@click.pass_context
def build(ctx, corpus):
    """Build the co-action layers and persist them."""
    from coactnet.pipeline import build_layers

    config = _load_pipeline_config(ctx, corpus)
    posts, summary, _report = _parse_corpus(ctx, config)
    usernames = {p.user_id: p.username for p in posts}
    out = ctx.obj["out"]
    export.write_atomic(os.path.join(out, "summary.json"), export.canonical_json(summary.as_dict()))
    layers = build_layers(posts, config)
    for kind in sorted(layers, key=lambda k: k.value):
        export.dump_layer(layers[kind], os.path.join(out, "layers", f"{kind.value}.json"), usernames)
        stats = metrics.layer_stats(layers[kind])
        click.echo(f"{kind.value}: {stats.node_count} nodes, {stats.edge_count} edges")


@main.command("filter")
@click.option("--layer", "kind_str", required=True, help="Layer kind (name or code).")
@click.option("--variant", required=True, help="frequency | frequency_above_average | temporal | none")
@click.option("--value", type=int, default=None)
@click.pass_context
def filter_cmd(ctx, kind_str, variant, value):
    """Apply one filter to a built layer and write the snapshot."""
    out = ctx.obj["out"]
    layer = _load_one_layer(out, kind_str)
    try:
        spec = FilterSpec(variant, value)
        snapshot = filtering.apply_filter(layer, spec)
    except (ValueError, EvidenceUnavailableError) as exc:
        click.echo(str(exc), err=True)
        sys.exit(1)
    payload = {
        "snapshot_id": snapshot.snapshot_id,
        "kind": layer.kind.value,
        "filter": {"variant": spec.variant, "value": spec.value, "label": spec.label},
        "stats": snapshot.stats.as_dict(),
    }
    export.write_atomic(
        os.path.join(out, "snapshots", f"{layer.kind.value}__{spec.label}.json"),
        export.canonical_json(payload),
    )
    export.write_atomic(
        os.path.join(out, "edges", f"{layer.kind.value}__{spec.label}.csv"),
        export.edges_to_csv(snapshot.layer),
    )
    click.echo(export.canonical_json(payload), nl=False)


@main.command()
@click.option("--corpus", type=click.Path(), default=None)
@click.pass_context
def analyze(ctx, corpus):
    """Run the full pipeline: ingest, build, filter, analyze, export."""
    config = _load_pipeline_config(ctx, corpus)
    try:
        result = run_pipeline(config, ctx.obj["out"])
    except FileNotFoundError as exc:
        click.echo(str(exc), err=True)
        sys.exit(EXIT_MISSING_CORPUS)
    for kind in sorted(result.layers, key=lambda k: k.value):
        snap = result.snapshots[kind]
        click.echo(
            f"{kind.value}: {snap.stats.node_count} nodes / {snap.stats.edge_count} edges "
            f"after {snap.filter_spec.label}"
        )


@main.command()
@click.pass_context
def overlap(ctx):
    """Cross-layer node/edge overlap of the built layers."""
    out = ctx.obj["out"]
    layers = _load_built_layers(out)
    if len(layers) < 2:
        click.echo("overlap needs at least two built layers", err=True)
        sys.exit(1)
    matrix = metrics.cross_layer_overlap(layers)
    rows = metrics.overlap_rows(matrix)
    export.write_atomic(os.path.join(out, "overlap.csv"), export.overlap_to_csv(rows))
    plots.plot_overlap_heatmap(matrix, os.path.join(out, "figures", "overlap.png"))
    click.echo(export.overlap_to_csv(rows), nl=False)


@main.command()
@click.option("--layer", "kind_str", required=True)
@click.pass_context
def sweep(ctx, kind_str):
    """Evaluate the six canonical filter candidates for one layer."""
    out = ctx.obj["out"]
    layer = _load_one_layer(out, kind_str)
    try:
        report = filtering.sweep_report(layer)
    except EvidenceUnavailableError as exc:
        click.echo(str(exc), err=True)
        sys.exit(1)
    payload = {
        "rows": sweep_rows_as_dicts(report),
        "node_jaccard": {f"{a}|{b}": v for (a, b), v in sorted(report.node_jaccard.items())},
    }
    export.write_atomic(
        os.path.join(out, "sweep", f"{layer.kind.value}.json"), export.canonical_json(payload)
    )
    plots.plot_sweep(report, os.path.join(out, "figures", f"sweep_{layer.kind.value}.png"))
    for row in report.rows:
        flag = "viable" if row.viable else "pruned"
        click.echo(
            f"{row.spec.label}: {row.stats.edge_count} edges, "
            f"top components {list(row.top_component_sizes)} [{flag}]"
        )


@main.command()
@click.option("--labels", "labels_path", type=click.Path(exists=True), required=True)
@click.option("--corpus", type=click.Path(exists=True), required=True)
@click.option("--policy", type=click.Choice([tuning.FIRST_PERFECT, tuning.MAX_F1]), default=tuning.FIRST_PERFECT, show_default=True)
@click.pass_context
def tune(ctx, labels_path, corpus, policy):
    """Calibrate audio thresholds from a labeled pair CSV."""
    posts, _summary, _report = parse_dataset_file(corpus)
    by_id = {p.post_id: p for p in posts}
    with open(labels_path, "r", encoding="utf-8") as fh:
        pairs = tuning.parse_labels_csv(fh.read())
    missing = [p for p in pairs if p.post_a not in by_id or p.post_b not in by_id]
    if missing:
        click.echo(f"{len(missing)} labeled pairs reference unknown posts", err=True)
        sys.exit(1)

    def exact_scorer(pair):
        return similarity.similarity_ratio(
            by_id[pair.post_a].transcript or "", by_id[pair.post_b].transcript or ""
        )

    def partial_scorer(pair):
        return similarity.partial_similarity_ratio(
            by_id[pair.post_a].transcript or "", by_id[pair.post_b].transcript or ""
        )

    result = tuning.tune_audio_thresholds(pairs, exact_scorer, partial_scorer, policy)
    out = ctx.obj["out"]
    payload = {
        "exact_threshold": result.exact_threshold,
        "partial_threshold": result.partial_threshold,
        "midpoint": result.midpoint,
        "exact_curve": [
            {"threshold": p.threshold, "precision": p.precision, "recall": p.recall}
            for p in result.exact_curve
        ],
        "partial_curve": [
            {"threshold": p.threshold, "precision": p.precision, "recall": p.recall}
            for p in result.partial_curve
        ],
    }
    export.write_atomic(os.path.join(out, "thresholds.json"), export.canonical_json(payload))
    plots.plot_pr_curves(
        {"exact": result.exact_curve, "partial": result.partial_curve},
        os.path.join(out, "figures", "pr_curves.png"),
    )
    click.echo(
        f"exact={result.exact_threshold} partial={result.partial_threshold} "
        f"midpoint={result.midpoint}"
    )


@main.group()
def synth():
    """Generate synthetic corpora with known ground truth."""


@synth.command()
@click.option("--pairs-per-type", type=int, default=50, show_default=True)
@click.pass_context
def reuse(ctx, pairs_per_type):
    """Corpus of reuse-scenario pairs (reupload / duet / stitch; reposts excluded)."""
    scenario = synthgen.make_reuse_scenario(pairs_per_type, ctx.obj["seed"])
    out = ctx.obj["out"]
    export.write_atomic(os.path.join(out, "corpus.jsonl"), serialize_records(scenario.posts))
    matrix = synthgen.expected_detection_matrix(scenario.reuse_results)
    truth = {
        "pairs": [
            {"user_a": a, "user_b": b, "reuse_type": t.value}
            for a, b, t in scenario.reuse_pairs
        ],
        "expected_matrix": {
            t.value: {k.value: v for k, v in row.items()} for t, row in matrix.items()
        },
    }
    export.write_atomic(os.path.join(out, "ground_truth.json"), export.canonical_json(truth))
    click.echo(f"{len(scenario.posts)} posts, {len(scenario.reuse_pairs)} reuse pairs")


@synth.command()
@click.option("--background", type=int, default=1000, show_default=True)
@click.option("--clusters", "n_clusters", type=int, default=3, show_default=True)
@click.option("--min-users", type=int, default=5, show_default=True)
@click.option("--max-users", type=int, default=20, show_default=True)
@click.option("--posts-per-user", type=int, default=2, show_default=True)
@click.option("--burst", is_flag=True, help="All cluster posts inside one 60 s window.")
@click.pass_context
def clusters(ctx, background, n_clusters, min_users, max_users, posts_per_user, burst):
    """Background noise plus injected coordinated clusters."""
    rng = random.Random(ctx.obj["seed"])
    posts = synthgen.make_background_posts(background, rng)
    window = (1_700_000_000, 1_700_600_000)
    truths = []
    for c in range(n_clusters):
        template = synthgen.make_base_post(rng, 900_000 + c, window[0])
        spec = synthgen.ClusterSpec(
            n_users=rng.randint(min_users, max_users),
            template=template,
            active_window=window,
            posts_per_user=posts_per_user,
            burst=burst,
        )
        posts, truth = synthgen.inject_coordinated_cluster(posts, spec, rng, cluster_id=f"c{c}")
        truths.append(truth)
    out = ctx.obj["out"]
    export.write_atomic(os.path.join(out, "corpus.jsonl"), serialize_records(posts))
    export.write_atomic(os.path.join(out, "ground_truth.json"), synthgen.ground_truth_json(truths))
    click.echo(f"{len(posts)} posts, {len(truths)} injected clusters")


@main.command("export")
@click.option("--layer", "kind_str", required=True)
@click.option("--format", "fmt", type=click.Choice(["graphml", "csv"]), required=True)
@click.option("--output", type=click.Path(), default=None, help="Output path (default under --out).")
@click.pass_context
def export_cmd(ctx, kind_str, fmt, output):
    """Export a built layer as GraphML or a CSV edge list."""
    out = ctx.obj["out"]
    kind = LayerKind.from_string(kind_str)
    path = os.path.join(out, "layers", f"{kind.value}.json")
    if not os.path.exists(path):
        click.echo(f"layer {kind.value} not built under {out}", err=True)
        sys.exit(1)
    layer, usernames = export.load_layer(path)
    if fmt == "graphml":
        data = export.layer_to_graphml(layer, usernames)
        default_name = f"{kind.value}.graphml"
    else:
        data = export.edges_to_csv(layer)
        default_name = f"{kind.value}.csv"
    target = output or os.path.join(out, "exports", default_name)
    export.write_atomic(target, data)
    click.echo(target)


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=8080, show_default=True)
@click.option("--build-dir", type=click.Path(), default=None, help="Defaults to --out.")
@click.option("--pseudonymize", is_flag=True, help="Mask usernames in API responses.")
@click.pass_context
def serve(ctx, host, port, build_dir, pseudonymize):
    """Serve the explorer HTTP API over built layers."""
    from coactnet import service

    service.serve(build_dir or ctx.obj["out"], host=host, port=port, pseudonymize=pseudonymize)


if __name__ == "__main__":
    main()
