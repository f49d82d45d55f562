"""Core domain types: posts, co-action pairs, layers, filters, statistics.

All types are immutable after construction and safe to share across
threads. Behaviour (layer building, filtering, metrics) lives in the
other modules; this module only provides the value types, their
invariants and small constructors.
"""

from __future__ import annotations

import enum
import hashlib
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Tuple


class SelfLoopError(ValueError):
    """Raised when an edge between a user and itself is requested."""


class CorpusError(ValueError):
    """Raised when an input corpus is unusable (e.g. mostly malformed)."""


class EmptyTranscriptError(ValueError):
    """Raised when an audio classification is requested on an empty transcript."""


class ImageTooSmallError(ValueError):
    """Raised when an image is smaller than the difference-hash grid."""


class NoFramesError(ValueError):
    """Raised when a video comparison is requested with no frames."""


class EvidenceUnavailableError(ValueError):
    """Raised when an operation needs evidence pairs that were truncated."""


class DegenerateLabelsError(ValueError):
    """Raised when a labeled pair set contains only one class."""


class NoPerfectPointError(ValueError):
    """Raised when no threshold reaches precision = recall = 1.0."""


class MatrixMismatchError(ValueError):
    """Raised when generated reuse pairs disagree with the expected matrix."""


class IncompleteBaseError(ValueError):
    """Raised when a reuse pair is derived from a post lacking transcript or frames."""


class LayerKind(enum.Enum):
    """The seven co-action modalities, one network layer each."""

    HASHTAG_SEQUENCE = "hashtag_sequence"
    VIDEO_DESCRIPTION = "video_description"
    URL = "url"
    MUSIC_ID = "music_id"
    SAME_AUDIO = "same_audio"
    PARTIAL_AUDIO = "partial_audio"
    VIDEO_SIMILARITY = "video_similarity"

    @property
    def code(self) -> str:
        return _KIND_CODES[self]

    @classmethod
    def from_string(cls, s: str) -> "LayerKind":
        s = s.strip().lower()
        for kind in cls:
            if s in (kind.value, kind.code.lower()):
                return kind
        raise ValueError(f"unknown layer kind: {s!r}")


_KIND_CODES = {
    LayerKind.HASHTAG_SEQUENCE: "HS",
    LayerKind.VIDEO_DESCRIPTION: "VD",
    LayerKind.URL: "U",
    LayerKind.MUSIC_ID: "MI",
    LayerKind.SAME_AUDIO: "SA",
    LayerKind.PARTIAL_AUDIO: "PA",
    LayerKind.VIDEO_SIMILARITY: "VS",
}

EXACT_MATCH_KINDS = (
    LayerKind.HASHTAG_SEQUENCE,
    LayerKind.VIDEO_DESCRIPTION,
    LayerKind.URL,
    LayerKind.MUSIC_ID,
)


class AudioClass(enum.Enum):
    """Outcome of comparing two audio transcripts."""

    SAME = "same"
    PARTIAL = "partial"
    UNRELATED = "unrelated"


@dataclass(frozen=True)
class PostRecord:
    """One short-video post with the modality fields used for co-actions.

    ``hashtags`` and ``urls`` are derived from ``description`` at ingest
    time; ``frame_hashes`` holds one 64-bit difference hash per sampled
    frame (3-second cadence).
    """

    post_id: str
    user_id: str
    username: str
    created_at: int
    description: str = ""
    hashtags: Tuple[str, ...] = ()
    urls: Tuple[str, ...] = ()
    music_id: Optional[str] = None
    transcript: Optional[str] = None
    frame_hashes: Optional[Tuple[int, ...]] = None

    def __post_init__(self) -> None:
        if not self.post_id:
            raise ValueError("post_id must be non-empty")
        if not self.user_id:
            raise ValueError("user_id must be non-empty")
        if self.created_at <= 0:
            raise ValueError("created_at must be a positive epoch timestamp")
        if self.frame_hashes is not None and len(self.frame_hashes) == 0:
            raise ValueError("frame_hashes, if present, must be non-empty")


def canonical_edge_key(user_a: str, user_b: str) -> Tuple[str, str]:
    """Order a user pair canonically (lexicographic min first)."""
    if user_a == user_b:
        raise SelfLoopError(f"self-loop edge for user {user_a!r}")
    return (user_a, user_b) if user_a < user_b else (user_b, user_a)


@dataclass(frozen=True, order=True)
class CoActionPair:
    """A similar (post, post) pair in one modality.

    ``post_a < post_b`` lexicographically; ``score`` is an integer
    percentage (100 for exact-match modalities); ``delta_t`` is the
    absolute posting-time gap in seconds.
    """

    layer_kind: LayerKind = field(compare=False)
    post_a: str
    post_b: str
    user_a: str = field(compare=False)
    user_b: str = field(compare=False)
    score: int = field(compare=False, default=100)
    delta_t: int = field(compare=False, default=0)

    def __post_init__(self) -> None:
        if self.user_a == self.user_b:
            raise SelfLoopError("co-action pairs never link a user to itself")
        if self.post_a >= self.post_b:
            raise ValueError("post_a must sort strictly before post_b")
        if not 0 <= self.score <= 100:
            raise ValueError(f"score out of range: {self.score}")
        if self.delta_t < 0:
            raise ValueError("delta_t must be non-negative")


def make_pair(
    kind: LayerKind, a: PostRecord, b: PostRecord, score: int = 100
) -> CoActionPair:
    """Build a canonical CoActionPair from two posts of distinct users."""
    if a.user_id == b.user_id:
        raise SelfLoopError("same-user pairs are never materialized")
    if a.post_id > b.post_id:
        a, b = b, a
    return CoActionPair(
        layer_kind=kind,
        post_a=a.post_id,
        post_b=b.post_id,
        user_a=a.user_id,
        user_b=b.user_id,
        score=score,
        delta_t=abs(a.created_at - b.created_at),
    )


@dataclass(frozen=True)
class UserEdge:
    """Undirected weighted edge between two accounts in one layer.

    Weight counts distinct evidence pairs; the evidence itself is kept so
    an analyst can see why the accounts are linked. Layers built in
    evidence-truncated mode carry exact weights but only a sample of
    pairs (``pairs`` shorter than ``weight``).
    """

    user_a: str
    user_b: str
    weight: int
    min_delta_t: int
    pairs: Tuple[CoActionPair, ...] = ()

    def __post_init__(self) -> None:
        if self.user_a >= self.user_b:
            raise ValueError("edge endpoints must be canonically ordered")
        if self.weight < 1:
            raise ValueError("edge weight must be >= 1")

    @property
    def key(self) -> Tuple[str, str]:
        return (self.user_a, self.user_b)


def edge_from_pairs(pairs: Iterable[CoActionPair]) -> UserEdge:
    """Aggregate evidence pairs between one user pair into an edge."""
    pairs = tuple(sorted(set(pairs)))
    if not pairs:
        raise ValueError("an edge needs at least one evidence pair")
    ua, ub = canonical_edge_key(pairs[0].user_a, pairs[0].user_b)
    for p in pairs:
        if canonical_edge_key(p.user_a, p.user_b) != (ua, ub):
            raise ValueError("evidence pairs span multiple user pairs")
    return UserEdge(
        user_a=ua,
        user_b=ub,
        weight=len(pairs),
        min_delta_t=min(p.delta_t for p in pairs),
        pairs=pairs,
    )


@dataclass(frozen=True)
class Layer:
    """User-user network for one modality; immutable after construction."""

    kind: LayerKind
    edges: Tuple[UserEdge, ...]
    evidence_complete: bool = True

    def __post_init__(self) -> None:
        keys = [e.key for e in self.edges]
        if len(set(keys)) != len(keys):
            raise ValueError("duplicate edges in layer")
        if list(keys) != sorted(keys):
            object.__setattr__(self, "edges", tuple(sorted(self.edges, key=lambda e: e.key)))

    @property
    def nodes(self) -> frozenset:
        return frozenset(u for e in self.edges for u in e.key)

    @property
    def edge_keys(self) -> frozenset:
        return frozenset(e.key for e in self.edges)

    def digest(self) -> str:
        """Content digest over the edge structure (used for snapshot ids)."""
        h = hashlib.sha256()
        h.update(self.kind.value.encode())
        for e in self.edges:
            h.update(f"{e.user_a}\x00{e.user_b}\x00{e.weight}\x00{e.min_delta_t}\n".encode())
        return h.hexdigest()


FREQUENCY = "frequency"
FREQUENCY_ABOVE_AVERAGE = "frequency_above_average"
TEMPORAL = "temporal"
NO_FILTER = "none"


@dataclass(frozen=True)
class FilterSpec:
    """A filtering strategy: frequency threshold, above-average, temporal window, or none."""

    variant: str
    value: Optional[int] = None

    def __post_init__(self) -> None:
        if self.variant == FREQUENCY:
            if self.value is None or self.value < 2:
                raise ValueError("frequency filter needs an integer threshold >= 2")
        elif self.variant == TEMPORAL:
            if self.value is None or self.value <= 0:
                raise ValueError("temporal filter needs a positive window in seconds")
        elif self.variant in (FREQUENCY_ABOVE_AVERAGE, NO_FILTER):
            if self.value is not None:
                raise ValueError(f"{self.variant} filter takes no value")
        else:
            raise ValueError(f"unknown filter variant: {self.variant!r}")

    @property
    def label(self) -> str:
        if self.variant in (FREQUENCY, TEMPORAL):
            return f"{self.variant}_{self.value}"
        return self.variant

    @classmethod
    def frequency(cls, k: int) -> "FilterSpec":
        return cls(FREQUENCY, k)

    @classmethod
    def above_average(cls) -> "FilterSpec":
        return cls(FREQUENCY_ABOVE_AVERAGE)

    @classmethod
    def temporal(cls, seconds: int) -> "FilterSpec":
        return cls(TEMPORAL, seconds)

    @classmethod
    def none(cls) -> "FilterSpec":
        return cls(NO_FILTER)


def canonical_filter_candidates() -> Tuple[FilterSpec, ...]:
    """The six candidate filters evaluated per layer."""
    return (
        FilterSpec.frequency(2),
        FilterSpec.frequency(10),
        FilterSpec.above_average(),
        FilterSpec.temporal(60),
        FilterSpec.temporal(120),
        FilterSpec.temporal(300),
    )


# Per-layer default filters used when no explicit choice is configured.
DEFAULT_LAYER_FILTERS: Mapping[LayerKind, FilterSpec] = {
    LayerKind.HASHTAG_SEQUENCE: FilterSpec.frequency(10),
    LayerKind.VIDEO_DESCRIPTION: FilterSpec.frequency(10),
    LayerKind.URL: FilterSpec.none(),
    LayerKind.MUSIC_ID: FilterSpec.above_average(),
    LayerKind.SAME_AUDIO: FilterSpec.none(),
    LayerKind.PARTIAL_AUDIO: FilterSpec.none(),
    LayerKind.VIDEO_SIMILARITY: FilterSpec.none(),
}


@dataclass(frozen=True)
class LayerStats:
    """Structural statistics of one layer."""

    node_count: int
    edge_count: int
    component_count: int
    giant_component_pct: float
    diameter: int
    avg_clustering: float
    transitivity: float
    density: float

    def as_dict(self) -> dict:
        return {
            "node_count": self.node_count,
            "edge_count": self.edge_count,
            "component_count": self.component_count,
            "giant_component_pct": self.giant_component_pct,
            "diameter": self.diameter,
            "avg_clustering": self.avg_clustering,
            "transitivity": self.transitivity,
            "density": self.density,
        }


@dataclass(frozen=True)
class OverlapMatrix:
    """Shared and unique node/edge counts across a set of layers."""

    kinds: Tuple[LayerKind, ...]
    shared_nodes: Mapping[Tuple[LayerKind, LayerKind], int]
    shared_edges: Mapping[Tuple[LayerKind, LayerKind], int]
    unique_nodes: Mapping[LayerKind, int]
    unique_edges: Mapping[LayerKind, int]

    def node_overlap(self, a: LayerKind, b: LayerKind) -> int:
        return self.shared_nodes[_okey(a, b)]

    def edge_overlap(self, a: LayerKind, b: LayerKind) -> int:
        return self.shared_edges[_okey(a, b)]


def _okey(a: LayerKind, b: LayerKind) -> Tuple[LayerKind, LayerKind]:
    return (a, b) if a.value <= b.value else (b, a)
