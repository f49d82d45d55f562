"""Structural layer statistics, connected components, cross-layer overlap."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Mapping, Sequence, Tuple

import networkx as nx

from coactnet.model import (
    CoActionPair,
    Layer,
    LayerKind,
    LayerStats,
    OverlapMatrix,
    _okey,
)


def to_networkx(layer: Layer) -> nx.Graph:
    g = nx.Graph()
    for edge in layer.edges:
        g.add_edge(edge.user_a, edge.user_b, weight=edge.weight, min_delta_t=edge.min_delta_t)
    return g


def connected_components(layer: Layer) -> List[frozenset]:
    """Components sorted by size descending, ties by smallest member id."""
    g = to_networkx(layer)
    comps = [frozenset(c) for c in nx.connected_components(g)]
    return sorted(comps, key=lambda c: (-len(c), min(c)))


def layer_stats(layer: Layer) -> LayerStats:
    """Node/edge/component counts, giant component share, diameter of the
    largest component, mean local clustering, transitivity, and density."""
    g = to_networkx(layer)
    n = g.number_of_nodes()
    m = g.number_of_edges()
    if n == 0:
        return LayerStats(0, 0, 0, 0.0, 0, 0.0, 0.0, 0.0)
    comps = connected_components(layer)
    giant = comps[0]
    diameter = nx.diameter(g.subgraph(giant)) if len(giant) > 1 else 0
    return LayerStats(
        node_count=n,
        edge_count=m,
        component_count=len(comps),
        giant_component_pct=100.0 * len(giant) / n,
        diameter=diameter,
        avg_clustering=nx.average_clustering(g),
        transitivity=nx.transitivity(g),
        density=(2.0 * m / (n * (n - 1))) if n >= 2 else 0.0,
    )


def cross_layer_overlap(layers: Mapping[LayerKind, Layer]) -> OverlapMatrix:
    """Shared node/edge counts per layer pair plus per-layer unique counts.

    Edges are compared as unordered user-id pairs (weights ignored);
    unique elements belong to exactly one layer.
    """
    if len(layers) < 2:
        raise ValueError("overlap needs at least two layers")
    kinds = tuple(sorted(layers, key=lambda k: k.value))
    nodes = {k: layers[k].nodes for k in kinds}
    edges = {k: layers[k].edge_keys for k in kinds}

    shared_nodes: Dict[Tuple[LayerKind, LayerKind], int] = {}
    shared_edges: Dict[Tuple[LayerKind, LayerKind], int] = {}
    for i, a in enumerate(kinds):
        shared_nodes[_okey(a, a)] = len(nodes[a])
        shared_edges[_okey(a, a)] = len(edges[a])
        for b in kinds[i + 1 :]:
            shared_nodes[_okey(a, b)] = len(nodes[a] & nodes[b])
            shared_edges[_okey(a, b)] = len(edges[a] & edges[b])

    unique_nodes: Dict[LayerKind, int] = {}
    unique_edges: Dict[LayerKind, int] = {}
    for a in kinds:
        other_nodes = frozenset().union(*(nodes[b] for b in kinds if b is not a))
        other_edges = frozenset().union(*(edges[b] for b in kinds if b is not a))
        unique_nodes[a] = len(nodes[a] - other_nodes)
        unique_edges[a] = len(edges[a] - other_edges)

    return OverlapMatrix(
        kinds=kinds,
        shared_nodes=shared_nodes,
        shared_edges=shared_edges,
        unique_nodes=unique_nodes,
        unique_edges=unique_edges,
    )


def overlap_rows(matrix: OverlapMatrix) -> List[dict]:
    """Chord-diagram export rows; self-rows carry the unique counts."""
    rows = []
    for i, a in enumerate(matrix.kinds):
        rows.append(
            {
                "source_layer": a.value,
                "target_layer": a.value,
                "node_overlap": matrix.unique_nodes[a],
                "edge_overlap": matrix.unique_edges[a],
            }
        )
        for b in matrix.kinds[i + 1 :]:
            rows.append(
                {
                    "source_layer": a.value,
                    "target_layer": b.value,
                    "node_overlap": matrix.node_overlap(a, b),
                    "edge_overlap": matrix.edge_overlap(a, b),
                }
            )
    return rows


@dataclass(frozen=True)
class ComponentSummary:
    """Analyst-facing summary of one connected component."""

    index: int
    size: int
    members: Tuple[str, ...]
    usernames: Tuple[str, ...]
    internal_edge_count: int
    total_weight: int
    evidence_sample: Tuple[CoActionPair, ...]


def top_components(
    layer: Layer,
    k: int = 3,
    usernames: Mapping[str, str] = None,
    max_evidence: int = 20,
) -> List[ComponentSummary]:
    """Summaries of the k largest components: members, usernames for
    naming-convention scans, internal edge counts and sample evidence."""
    if k <= 0:
        raise ValueError("k must be positive")
    usernames = usernames or {}
    comps = connected_components(layer)[:k]
    summaries = []
    for idx, comp in enumerate(comps):
        members = tuple(sorted(comp))
        internal = [
            e for e in layer.edges if e.user_a in comp and e.user_b in comp
        ]
        evidence: List[CoActionPair] = []
        for e in internal:
            for p in e.pairs:
                if len(evidence) >= max_evidence:
                    break
                evidence.append(p)
            if len(evidence) >= max_evidence:
                break
        summaries.append(
            ComponentSummary(
                index=idx,
                size=len(members),
                members=members,
                usernames=tuple(usernames.get(u, u) for u in members),
                internal_edge_count=len(internal),
                total_weight=sum(e.weight for e in internal),
                evidence_sample=tuple(evidence),
            )
        )
    return summaries
