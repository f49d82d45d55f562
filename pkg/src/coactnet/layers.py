"""Layer construction: exact-match grouping, audio/video pairwise layers,
and projection of co-action pairs to weighted user-user networks."""

from __future__ import annotations

import itertools
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from coactnet import blocking, similarity
from coactnet.model import (
    EXACT_MATCH_KINDS,
    AudioClass,
    CoActionPair,
    Layer,
    LayerKind,
    PostRecord,
    UserEdge,
    canonical_edge_key,
    edge_from_pairs,
    make_pair,
)

# Exact-match groups larger than this are projected from per-user post
# counts without materializing every evidence pair (weights stay exact).
DEFAULT_GROUP_CAP = 5000

EVIDENCE_SAMPLE_PER_EDGE = 5


def project_to_users(pairs: Iterable[CoActionPair], kind: LayerKind) -> Layer:
    """Aggregate co-action pairs into one weighted edge per user pair."""
    by_edge: Dict[Tuple[str, str], List[CoActionPair]] = defaultdict(list)
    for p in pairs:
        if p.layer_kind is not kind:
            raise ValueError(f"pair of kind {p.layer_kind} in {kind} projection")
        by_edge[canonical_edge_key(p.user_a, p.user_b)].append(p)
    edges = tuple(edge_from_pairs(ps) for _, ps in sorted(by_edge.items()))
    return Layer(kind=kind, edges=edges)


def _group_key(post: PostRecord, kind: LayerKind) -> List:
    if kind is LayerKind.HASHTAG_SEQUENCE:
        return [post.hashtags] if post.hashtags else []
    if kind is LayerKind.VIDEO_DESCRIPTION:
        return [post.description] if post.description else []
    if kind is LayerKind.URL:
        return list(dict.fromkeys(post.urls))
    if kind is LayerKind.MUSIC_ID:
        return [post.music_id] if post.music_id else []
    raise ValueError(f"{kind} is not an exact-match layer")


def build_exact_layer(
    posts: Sequence[PostRecord], kind: LayerKind, group_cap: int = DEFAULT_GROUP_CAP
) -> Layer:
    """Group posts by exact key and link every cross-user post pair.

    Keys: the full ordered hashtag list (HS), the verbatim description
    (VD), each extracted URL (U), or the music id (MI); empty keys are
    skipped. Groups above ``group_cap`` are projected without full
    evidence; the URL layer is exempt because one post pair can share
    several URLs and deduplication needs the pairs.
    """
    if kind not in EXACT_MATCH_KINDS:
        raise ValueError(f"{kind} is not an exact-match layer")
    groups: Dict[object, List[PostRecord]] = defaultdict(list)
    for post in posts:
        for key in _group_key(post, kind):
            groups[key].append(post)

    acc = _EdgeAccumulator(kind)
    for key in sorted(groups, key=repr):
        members = groups[key]
        if len(members) <= group_cap or kind is LayerKind.URL:
            seen: set = set()
            for a, b in itertools.combinations(members, 2):
                if a.user_id == b.user_id:
                    continue
                ids = (a.post_id, b.post_id) if a.post_id < b.post_id else (b.post_id, a.post_id)
                if kind is LayerKind.URL:
                    if ids in seen:  # one post pair may share several URLs
                        continue
                    seen.add(ids)
                acc.add_pair(make_pair(kind, a, b))
        else:
            acc.add_group_truncated(members)
    return acc.build()


@dataclass
class _EdgeAccumulator:
    """Merges fully-materialized and truncated-evidence contributions."""

    kind: LayerKind
    pairs: Dict[Tuple[str, str], List[CoActionPair]] = field(default_factory=lambda: defaultdict(list))
    extra_weight: Dict[Tuple[str, str], int] = field(default_factory=lambda: defaultdict(int))
    extra_min_dt: Dict[Tuple[str, str], int] = field(default_factory=dict)
    truncated: bool = False

    def add_pair(self, pair: CoActionPair) -> None:
        self.pairs[canonical_edge_key(pair.user_a, pair.user_b)].append(pair)

    def add_group_truncated(self, members: Sequence[PostRecord]) -> None:
        self.truncated = True
        by_user: Dict[str, List[int]] = defaultdict(list)
        for post in members:
            by_user[post.user_id].append(post.created_at)
        users = sorted(by_user)
        for ts in by_user.values():
            ts.sort()
        for ua, ub in itertools.combinations(users, 2):
            key = (ua, ub)
            self.extra_weight[key] += len(by_user[ua]) * len(by_user[ub])
            dt = _min_gap(by_user[ua], by_user[ub])
            if key not in self.extra_min_dt or dt < self.extra_min_dt[key]:
                self.extra_min_dt[key] = dt

    def build(self) -> Layer:
        edges = []
        for key in sorted(set(self.pairs) | set(self.extra_weight)):
            evid = tuple(sorted(set(self.pairs.get(key, ()))))
            weight = len(evid) + self.extra_weight.get(key, 0)
            dts = [p.delta_t for p in evid]
            if key in self.extra_min_dt:
                dts.append(self.extra_min_dt[key])
            if len(evid) < weight:
                evid = evid[:EVIDENCE_SAMPLE_PER_EDGE]
            edges.append(
                UserEdge(
                    user_a=key[0],
                    user_b=key[1],
                    weight=weight,
                    min_delta_t=min(dts),
                    pairs=evid,
                )
            )
        return Layer(kind=self.kind, edges=tuple(edges), evidence_complete=not self.truncated)


def _min_gap(a: Sequence[int], b: Sequence[int]) -> int:
    """Minimum |x - y| over two sorted timestamp lists (two-pointer merge)."""
    i = j = 0
    best = abs(a[0] - b[0])
    while i < len(a) and j < len(b):
        best = min(best, abs(a[i] - b[j]))
        if best == 0:
            return 0
        if a[i] < b[j]:
            i += 1
        else:
            j += 1
    return best


def build_audio_layers(
    posts: Sequence[PostRecord],
    exact_threshold: int = similarity.DEFAULT_EXACT_THRESHOLD,
    partial_threshold: int = similarity.DEFAULT_PARTIAL_THRESHOLD,
    use_token_blocking: bool = False,
) -> Tuple[Layer, Layer]:
    """Build the SameAudio and PartialAudio layers from transcripts.

    Posts without a transcript are skipped. Identical transcripts are
    grouped up front (trivially same audio); distinct transcript pairs
    are pre-screened with a sound LCS bound before running the edit-
    distance classifier. ``use_token_blocking`` additionally restricts
    candidates to pairs sharing a token 3-gram (heuristic, large corpora
    only).
    """
    eligible = [p for p in posts if p.transcript]
    groups: Dict[str, List[PostRecord]] = defaultdict(list)
    for post in eligible:
        groups[post.transcript].append(post)
    transcripts = sorted(groups)

    same_pairs: List[CoActionPair] = []
    partial_pairs: List[CoActionPair] = []

    for text in transcripts:
        for a, b in itertools.combinations(groups[text], 2):
            if a.user_id != b.user_id:
                same_pairs.append(make_pair(LayerKind.SAME_AUDIO, a, b, score=100))

    restrict = blocking.token_trigram_blocks(transcripts) if use_token_blocking else None
    candidates = blocking.audio_candidate_pairs(
        transcripts, partial_threshold, exact_threshold, pairs=restrict
    )
    for i, j in candidates:
        scores = similarity.classify_audio_pair(
            transcripts[i], transcripts[j], exact_threshold, partial_threshold
        )
        if scores.label is AudioClass.UNRELATED:
            continue
        if scores.label is AudioClass.SAME:
            kind, score, bucket = LayerKind.SAME_AUDIO, scores.exact_score, same_pairs
        else:
            kind, score, bucket = LayerKind.PARTIAL_AUDIO, scores.partial_score, partial_pairs
        for a in groups[transcripts[i]]:
            for b in groups[transcripts[j]]:
                if a.user_id != b.user_id:
                    bucket.append(make_pair(kind, a, b, score=score))

    return (
        project_to_users(same_pairs, LayerKind.SAME_AUDIO),
        project_to_users(partial_pairs, LayerKind.PARTIAL_AUDIO),
    )


class HammingIndex:
    """Exact radius-1 index over 64-bit frame hashes.

    A query probes the hash itself plus its 64 single-bit variants, so
    results match a brute-force Hamming scan at radius 1.
    """

    def __init__(self) -> None:
        self._table: Dict[int, List[Tuple[str, int]]] = defaultdict(list)

    def add(self, post_id: str, position: int, h: int) -> None:
        self._table[h].append((post_id, position))

    def add_post(self, post: PostRecord) -> None:
        for pos, h in enumerate(post.frame_hashes or ()):
            self.add(post.post_id, pos, h)

    def query(self, h: int) -> List[Tuple[str, int]]:
        """Posting lists of all frames within Hamming distance 1 of ``h``."""
        hits: List[Tuple[str, int]] = []
        hits.extend(self._table.get(h, ()))
        for bit in range(64):
            hits.extend(self._table.get(h ^ (1 << bit), ()))
        return sorted(set(hits))

    def candidate_posts(self, h: int) -> set:
        return {post_id for post_id, _ in self.query(h)}


def build_video_layer(
    posts: Sequence[PostRecord],
    max_dist: int = 1,
    drop_low_info: bool = False,
) -> Layer:
    """Link posts whose every shorter-side frame has a near match in the other.

    Candidate pairs come from a radius-1 Hamming index (a pair qualifies
    when at least one frame of one post matches a frame of the other);
    the full frame-coverage test then decides.
    """
    eligible = [p for p in posts if p.frame_hashes]
    by_id = {p.post_id: p for p in eligible}

    if max_dist == 1:
        index = HammingIndex()
        for post in eligible:
            index.add_post(post)
        candidate_ids: set = set()
        for post in eligible:
            for h in post.frame_hashes:
                for other in index.candidate_posts(h):
                    if other != post.post_id:
                        pair = tuple(sorted((post.post_id, other)))
                        candidate_ids.add(pair)
    else:
        candidate_ids = {
            tuple(sorted((a.post_id, b.post_id)))
            for a, b in itertools.combinations(eligible, 2)
        }

    pairs: List[CoActionPair] = []
    for id_a, id_b in sorted(candidate_ids):
        a, b = by_id[id_a], by_id[id_b]
        if a.user_id == b.user_id:
            continue
        if similarity.video_match(a.frame_hashes, b.frame_hashes, max_dist, drop_low_info):
            pairs.append(make_pair(LayerKind.VIDEO_SIMILARITY, a, b, score=100))
    return project_to_users(pairs, LayerKind.VIDEO_SIMILARITY)


def build_all_layers(
    posts: Sequence[PostRecord],
    kinds: Optional[Sequence[LayerKind]] = None,
    group_cap: int = DEFAULT_GROUP_CAP,
    exact_threshold: int = similarity.DEFAULT_EXACT_THRESHOLD,
    partial_threshold: int = similarity.DEFAULT_PARTIAL_THRESHOLD,
    video_max_dist: int = 1,
    drop_low_info: bool = False,
    use_token_blocking: bool = False,
) -> Dict[LayerKind, Layer]:
    """Build the requested layers (all seven by default)."""
    kinds = tuple(kinds) if kinds is not None else tuple(LayerKind)
    layers: Dict[LayerKind, Layer] = {}
    for kind in EXACT_MATCH_KINDS:
        if kind in kinds:
            layers[kind] = build_exact_layer(posts, kind, group_cap=group_cap)
    if LayerKind.SAME_AUDIO in kinds or LayerKind.PARTIAL_AUDIO in kinds:
        same, partial = build_audio_layers(
            posts, exact_threshold, partial_threshold, use_token_blocking
        )
        if LayerKind.SAME_AUDIO in kinds:
            layers[LayerKind.SAME_AUDIO] = same
        if LayerKind.PARTIAL_AUDIO in kinds:
            layers[LayerKind.PARTIAL_AUDIO] = partial
    if LayerKind.VIDEO_SIMILARITY in kinds:
        layers[LayerKind.VIDEO_SIMILARITY] = build_video_layer(
            posts, max_dist=video_max_dist, drop_low_info=drop_low_info
        )
    return layers
