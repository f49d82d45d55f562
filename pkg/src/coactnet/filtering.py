"""Layer filtering: the six canonical candidates, pruning, and sweep reports.

Filtering never mutates a layer; every filter application yields an
immutable, content-addressed FilteredSnapshot with freshly computed
statistics.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from coactnet import metrics
from coactnet.model import (
    LayerKind,
    FREQUENCY,
    FREQUENCY_ABOVE_AVERAGE,
    NO_FILTER,
    TEMPORAL,
    EvidenceUnavailableError,
    FilterSpec,
    Layer,
    LayerStats,
    UserEdge,
    canonical_filter_candidates,
)

DEFAULT_MIN_EDGES = 1
DEFAULT_MIN_COMPONENT_SIZE = 8


@dataclass(frozen=True)
class FilteredSnapshot:
    """An immutable filtered view of a base layer."""

    snapshot_id: str
    base_kind: "LayerKind"
    filter_spec: FilterSpec
    layer: Layer
    stats: LayerStats


def snapshot_id_for(base_layer: Layer, spec: FilterSpec) -> str:
    """Content address: identical (base layer, filter) requests share an id."""
    h = hashlib.sha256()
    h.update(base_layer.digest().encode())
    h.update(b"\x00")
    h.update(spec.label.encode())
    return h.hexdigest()[:16]


def _snapshot(base: Layer, spec: FilterSpec, edges: Sequence[UserEdge]) -> FilteredSnapshot:
    layer = Layer(kind=base.kind, edges=tuple(edges), evidence_complete=base.evidence_complete)
    return FilteredSnapshot(
        snapshot_id=snapshot_id_for(base, spec),
        base_kind=base.kind,
        filter_spec=spec,
        layer=layer,
        stats=metrics.layer_stats(layer),
    )


def average_edge_weight(layer: Layer) -> float:
    """Arithmetic mean edge weight of the unfiltered layer (0 for empty)."""
    if not layer.edges:
        return 0.0
    return sum(e.weight for e in layer.edges) / len(layer.edges)


def apply_frequency_filter(layer: Layer, spec: FilterSpec) -> FilteredSnapshot:
    """Keep edges whose weight reaches the threshold; isolated nodes drop out.

    The above-average variant compares against the real-valued mean edge
    weight of the unfiltered layer (weight >= mean, boundary retained).
    """
    if spec.variant == FREQUENCY:
        threshold: float = spec.value
    elif spec.variant == FREQUENCY_ABOVE_AVERAGE:
        threshold = average_edge_weight(layer)
    else:
        raise ValueError(f"not a frequency filter: {spec.variant}")
    return _snapshot(layer, spec, [e for e in layer.edges if e.weight >= threshold])


def apply_temporal_filter(
    layer: Layer, spec: FilterSpec, require_all_within: bool = False
) -> FilteredSnapshot:
    """Drop evidence pairs with delta_t above the window and recompute weights.

    The window is inclusive. With ``require_all_within`` the edge keeps
    its full weight when at least one pair falls inside the window, and
    is dropped otherwise (the alternative reading of the procedure).
    """
    if spec.variant != TEMPORAL:
        raise ValueError(f"not a temporal filter: {spec.variant}")
    if not layer.evidence_complete:
        raise EvidenceUnavailableError(
            "temporal filtering needs full evidence; layer was built in truncated mode"
        )
    window = spec.value
    kept: List[UserEdge] = []
    for edge in layer.edges:
        if require_all_within:
            if edge.min_delta_t <= window:
                kept.append(edge)
            continue
        pairs = tuple(p for p in edge.pairs if p.delta_t <= window)
        if pairs:
            kept.append(
                UserEdge(
                    user_a=edge.user_a,
                    user_b=edge.user_b,
                    weight=len(pairs),
                    min_delta_t=min(p.delta_t for p in pairs),
                    pairs=pairs,
                )
            )
    return _snapshot(layer, spec, kept)


def apply_filter(layer: Layer, spec: FilterSpec, require_all_within: bool = False) -> FilteredSnapshot:
    """Apply any FilterSpec variant (including the identity 'none')."""
    if spec.variant == NO_FILTER:
        return _snapshot(layer, spec, layer.edges)
    if spec.variant in (FREQUENCY, FREQUENCY_ABOVE_AVERAGE):
        return apply_frequency_filter(layer, spec)
    return apply_temporal_filter(layer, spec, require_all_within=require_all_within)


def generate_filter_candidates(layer: Layer) -> List[FilteredSnapshot]:
    """The six canonical filtered variants of a layer, in canonical order."""
    return [apply_filter(layer, spec) for spec in canonical_filter_candidates()]


def is_viable(
    snapshot: FilteredSnapshot,
    min_edges: int = DEFAULT_MIN_EDGES,
    min_component_size: int = DEFAULT_MIN_COMPONENT_SIZE,
) -> bool:
    """A candidate survives when it keeps edges and a component strictly
    larger than ``min_component_size`` nodes."""
    if snapshot.stats.edge_count < min_edges:
        return False
    components = metrics.connected_components(snapshot.layer)
    return bool(components) and len(components[0]) > min_component_size


def prune_candidates(
    snapshots: Sequence[FilteredSnapshot],
    min_edges: int = DEFAULT_MIN_EDGES,
    min_component_size: int = DEFAULT_MIN_COMPONENT_SIZE,
) -> List[FilteredSnapshot]:
    """Drop non-viable candidates (too few edges or no sufficiently large component)."""
    return [s for s in snapshots if is_viable(s, min_edges, min_component_size)]


@dataclass(frozen=True)
class SweepRow:
    """One filter candidate in a sweep report."""

    spec: FilterSpec
    snapshot_id: str
    stats: LayerStats
    top_component_sizes: Tuple[int, ...]
    viable: bool


@dataclass(frozen=True)
class SweepReport:
    """Sweep of the canonical candidates plus pairwise user-set overlap."""

    kind: "LayerKind"
    rows: Tuple[SweepRow, ...]
    # Jaccard similarity of surviving user sets per candidate pair, keyed
    # by (label_a, label_b) with label_a < label_b.
    node_jaccard: Dict[Tuple[str, str], float]


def sweep_report(
    layer: Layer,
    min_edges: int = DEFAULT_MIN_EDGES,
    min_component_size: int = DEFAULT_MIN_COMPONENT_SIZE,
) -> SweepReport:
    """Evaluate all canonical candidates and compare their user sets."""
    snapshots = generate_filter_candidates(layer)
    rows = []
    node_sets: Dict[str, frozenset] = {}
    for snap in snapshots:
        comps = metrics.connected_components(snap.layer)
        rows.append(
            SweepRow(
                spec=snap.filter_spec,
                snapshot_id=snap.snapshot_id,
                stats=snap.stats,
                top_component_sizes=tuple(len(c) for c in comps[:3]),
                viable=is_viable(snap, min_edges, min_component_size),
            )
        )
        node_sets[snap.filter_spec.label] = snap.layer.nodes
    jaccard: Dict[Tuple[str, str], float] = {}
    labels = [r.spec.label for r in rows]
    for i in range(len(labels)):
        for j in range(i + 1, len(labels)):
            a, b = sorted((labels[i], labels[j]))
            jaccard[(a, b)] = _jaccard(node_sets[a], node_sets[b])
    return SweepReport(kind=layer.kind, rows=tuple(rows), node_jaccard=jaccard)


def _jaccard(a: frozenset, b: frozenset) -> float:
    if not a and not b:
        return 1.0
    union = len(a | b)
    return len(a & b) / union if union else 1.0
