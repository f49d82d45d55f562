"""Batch pipeline: ingest -> build -> filter -> analyze -> export.

Driven by a single declarative config file; every artifact is a pure
function of the corpus bytes and the config, written atomically with
canonical ordering so reruns are byte-identical.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import yaml

from coactnet import export, filtering, layers as layermod, metrics, plots
from coactnet.filtering import FilteredSnapshot, SweepReport
from coactnet.ingest import CorpusSummary, parse_dataset_file
from coactnet.model import (
    DEFAULT_LAYER_FILTERS,
    EvidenceUnavailableError,
    FilterSpec,
    Layer,
    LayerKind,
    PostRecord,
)


class ConfigError(ValueError):
    """Raised for unreadable or semantically invalid pipeline configs."""


@dataclass(frozen=True)
class PipelineConfig:
    corpus: Optional[str] = None
    kinds: Tuple[LayerKind, ...] = tuple(LayerKind)
    filters: Mapping[LayerKind, FilterSpec] = field(
        default_factory=lambda: dict(DEFAULT_LAYER_FILTERS)
    )
    min_edges: int = filtering.DEFAULT_MIN_EDGES
    min_component_size: int = filtering.DEFAULT_MIN_COMPONENT_SIZE
    export_formats: Tuple[str, ...] = ("csv",)
    group_cap: int = layermod.DEFAULT_GROUP_CAP
    exact_threshold: int = 88
    partial_threshold: int = 68
    video_max_dist: int = 1
    drop_low_info_frames: bool = False
    use_token_blocking: bool = False
    figures: bool = True
    top_components: int = 3


def _parse_filter(obj) -> FilterSpec:
    if obj is None or obj == "none":
        return FilterSpec.none()
    if not isinstance(obj, dict) or "variant" not in obj:
        raise ConfigError(f"filter must be a mapping with a variant: {obj!r}")
    variant = str(obj["variant"])
    value = obj.get("value")
    try:
        return FilterSpec(variant, int(value) if value is not None else None)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def load_config(path: Optional[str], overrides: Optional[dict] = None) -> PipelineConfig:
    """Read the YAML config file, apply CLI overrides, and validate."""
    raw: dict = {}
    if path:
        try:
            with open(path, "r", encoding="utf-8") as fh:
                raw = yaml.safe_load(fh) or {}
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        except yaml.YAMLError as exc:
            raise ConfigError(f"invalid YAML in {path}: {exc}") from exc
        if not isinstance(raw, dict):
            raise ConfigError("config root must be a mapping")
    raw = dict(raw)
    for key, value in (overrides or {}).items():
        if value is not None:
            raw[key] = value
    return config_from_dict(raw)


def config_from_dict(raw: dict) -> PipelineConfig:
    known = {
        "corpus", "layers", "filters", "prune", "export_formats", "group_cap",
        "exact_threshold", "partial_threshold", "video_max_dist",
        "drop_low_info_frames", "use_token_blocking", "figures", "top_components",
    }
    unknown = set(raw) - known
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    try:
        kinds = tuple(
            LayerKind.from_string(k) for k in raw.get("layers", [k.value for k in LayerKind])
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    filters = dict(DEFAULT_LAYER_FILTERS)
    for name, spec in (raw.get("filters") or {}).items():
        try:
            kind = LayerKind.from_string(name)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        filters[kind] = _parse_filter(spec)
    prune = raw.get("prune") or {}
    formats = tuple(raw.get("export_formats", ["csv"]))
    for fmt in formats:
        if fmt not in ("csv", "graphml"):
            raise ConfigError(f"unknown export format: {fmt!r}")
    return PipelineConfig(
        corpus=raw.get("corpus"),
        kinds=kinds,
        filters=filters,
        min_edges=int(prune.get("min_edges", filtering.DEFAULT_MIN_EDGES)),
        min_component_size=int(
            prune.get("min_component_size", filtering.DEFAULT_MIN_COMPONENT_SIZE)
        ),
        export_formats=formats,
        group_cap=int(raw.get("group_cap", layermod.DEFAULT_GROUP_CAP)),
        exact_threshold=int(raw.get("exact_threshold", 88)),
        partial_threshold=int(raw.get("partial_threshold", 68)),
        video_max_dist=int(raw.get("video_max_dist", 1)),
        drop_low_info_frames=bool(raw.get("drop_low_info_frames", False)),
        use_token_blocking=bool(raw.get("use_token_blocking", False)),
        figures=bool(raw.get("figures", True)),
        top_components=int(raw.get("top_components", 3)),
    )


@dataclass
class PipelineResult:
    """In-memory handles to everything the pipeline produced."""

    summary: CorpusSummary
    posts: List[PostRecord]
    layers: Dict[LayerKind, Layer]
    snapshots: Dict[LayerKind, FilteredSnapshot]
    sweeps: Dict[LayerKind, SweepReport]


def build_layers(posts: Sequence[PostRecord], config: PipelineConfig) -> Dict[LayerKind, Layer]:
    return layermod.build_all_layers(
        posts,
        kinds=config.kinds,
        group_cap=config.group_cap,
        exact_threshold=config.exact_threshold,
        partial_threshold=config.partial_threshold,
        video_max_dist=config.video_max_dist,
        drop_low_info=config.drop_low_info_frames,
        use_token_blocking=config.use_token_blocking,
    )


def run_pipeline(config: PipelineConfig, out_dir: str) -> PipelineResult:
    """Execute the full batch pipeline and write all artifacts under ``out_dir``."""
    if not config.corpus:
        raise FileNotFoundError("no corpus configured")
    if not os.path.exists(config.corpus):
        raise FileNotFoundError(f"corpus not found: {config.corpus}")
    posts, summary, _report = parse_dataset_file(config.corpus)
    usernames = {p.user_id: p.username for p in posts}

    built = build_layers(posts, config)
    snapshots: Dict[LayerKind, FilteredSnapshot] = {}
    sweeps: Dict[LayerKind, SweepReport] = {}
    for kind, layer in built.items():
        snapshots[kind] = filtering.apply_filter(layer, config.filters[kind])
        if layer.evidence_complete:
            sweeps[kind] = filtering.sweep_report(
                layer, config.min_edges, config.min_component_size
            )

    write_artifacts(out_dir, config, summary, built, snapshots, sweeps, usernames)
    return PipelineResult(
        summary=summary, posts=posts, layers=built, snapshots=snapshots, sweeps=sweeps
    )


def sweep_rows_as_dicts(report: SweepReport) -> List[dict]:
    rows = []
    for row in report.rows:
        rows.append(
            {
                "filter": row.spec.label,
                "snapshot_id": row.snapshot_id,
                "viable": row.viable,
                "top_component_sizes": list(row.top_component_sizes),
                **row.stats.as_dict(),
            }
        )
    return rows


def write_artifacts(
    out_dir: str,
    config: PipelineConfig,
    summary: CorpusSummary,
    built: Mapping[LayerKind, Layer],
    snapshots: Mapping[LayerKind, FilteredSnapshot],
    sweeps: Mapping[LayerKind, SweepReport],
    usernames: Mapping[str, str],
) -> None:
    export.write_atomic(
        os.path.join(out_dir, "summary.json"), export.canonical_json(summary.as_dict())
    )

    stats_obj = {}
    for kind in sorted(built, key=lambda k: k.value):
        layer = built[kind]
        export.dump_layer(layer, os.path.join(out_dir, "layers", f"{kind.value}.json"), usernames)
        snap = snapshots[kind]
        stats_obj[kind.value] = {
            "base": metrics.layer_stats(layer).as_dict(),
            "selected_filter": snap.filter_spec.label,
            "snapshot_id": snap.snapshot_id,
            "filtered": snap.stats.as_dict(),
        }
        for fmt in config.export_formats:
            _export_layer(snap.layer, fmt, out_dir, f"{kind.value}__{snap.filter_spec.label}", usernames)
        comps = metrics.top_components(snap.layer, k=config.top_components, usernames=usernames)
        export.write_atomic(
            os.path.join(out_dir, "components", f"{kind.value}.json"),
            export.canonical_json([_component_json(c) for c in comps]),
        )
        if config.figures:
            plots.plot_component_sizes(
                snap.layer, os.path.join(out_dir, "figures", f"components_{kind.value}.png")
            )
    export.write_atomic(os.path.join(out_dir, "stats.json"), export.canonical_json(stats_obj))

    for kind, report in sorted(sweeps.items(), key=lambda kv: kv[0].value):
        rows = sweep_rows_as_dicts(report)
        export.write_atomic(
            os.path.join(out_dir, "sweep", f"{kind.value}.json"),
            export.canonical_json(
                {
                    "rows": rows,
                    "node_jaccard": {f"{a}|{b}": v for (a, b), v in sorted(report.node_jaccard.items())},
                }
            ),
        )
        if config.figures:
            plots.plot_sweep(report, os.path.join(out_dir, "figures", f"sweep_{kind.value}.png"))

    if len(built) >= 2:
        matrix = metrics.cross_layer_overlap(built)
        rows = metrics.overlap_rows(matrix)
        export.write_atomic(os.path.join(out_dir, "overlap.csv"), export.overlap_to_csv(rows))
        if config.figures:
            plots.plot_overlap_heatmap(matrix, os.path.join(out_dir, "figures", "overlap.png"))

    if config.figures:
        plots.plot_layer_overview(
            {k: metrics.layer_stats(v) for k, v in built.items()},
            os.path.join(out_dir, "figures", "layers.png"),
        )


def _export_layer(
    layer: Layer, fmt: str, out_dir: str, stem: str, usernames: Mapping[str, str]
) -> None:
    if fmt == "csv":
        export.write_atomic(
            os.path.join(out_dir, "edges", f"{stem}.csv"), export.edges_to_csv(layer)
        )
    elif fmt == "graphml":
        export.write_atomic(
            os.path.join(out_dir, "edges", f"{stem}.graphml"),
            export.layer_to_graphml(layer, usernames),
        )
    else:  # pragma: no cover - validated at config load
        raise ValueError(f"unknown format {fmt!r}")


def _component_json(comp) -> dict:
    return {
        "index": comp.index,
        "size": comp.size,
        "members": list(comp.members),
        "usernames": list(comp.usernames),
        "internal_edge_count": comp.internal_edge_count,
        "total_weight": comp.total_weight,
        "evidence_sample": [export.pair_to_json(p) for p in comp.evidence_sample],
    }
