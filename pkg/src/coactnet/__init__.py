"""Multilayer co-action network toolkit for coordinated-behaviour analysis.

Builds per-modality user-user co-action layers from a short-video post
corpus (hashtag sequences, descriptions, URLs, music ids, audio
transcripts, frame hashes), filters them by co-action frequency or
temporal proximity, and reports structural statistics, cluster summaries
and cross-layer overlaps.
"""

from coactnet.model import (
    AudioClass,
    CoActionPair,
    FilterSpec,
    Layer,
    LayerKind,
    LayerStats,
    OverlapMatrix,
    PostRecord,
    UserEdge,
    canonical_edge_key,
)

__version__ = "0.1.0"

__all__ = [
    "AudioClass",
    "CoActionPair",
    "FilterSpec",
    "Layer",
    "LayerKind",
    "LayerStats",
    "OverlapMatrix",
    "PostRecord",
    "UserEdge",
    "canonical_edge_key",
]
