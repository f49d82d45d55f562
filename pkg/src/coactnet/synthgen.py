"""Synthetic corpus generation: reuse-scenario pairs and injected clusters.

Encodes the platform reuse semantics (repost / reupload / duet / stitch)
as a generator whose output carries its own expected per-layer detection
row, plus an injector for coordinated clusters with known ground truth.
This is the toolkit's main source of labeled data for end-to-end tests.
"""

from __future__ import annotations

import enum
import json
import random
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from coactnet.model import (
    IncompleteBaseError,
    LayerKind,
    MatrixMismatchError,
    PostRecord,
)

_VOCAB = [
    "wahl", "stimme", "europa", "partei", "kandidat", "video", "heute",
    "morgen", "politik", "debatte", "thema", "frage", "antwort", "land",
    "stadt", "leute", "jugend", "zukunft", "klima", "arbeit", "geld",
    "schule", "strasse", "medien", "meinung", "punkt", "woche", "monat",
    "abend", "nacht", "beginn", "ende", "seite", "wort", "satz", "bild",
    "ton", "musik", "lied", "tanz", "trend", "kanal", "folge", "clip",
]

_FEMALE_NAMES = [
    "anna", "lena", "mia", "emma", "lea", "sofia", "clara", "laura",
    "julia", "marie", "lina", "nora", "ella", "ida", "frieda", "greta",
]


class ReuseType(enum.Enum):
    """The four ways an existing video is commonly reused."""

    REPOST = "repost"
    REUPLOAD = "reupload"
    DUET = "duet"
    STITCH = "stitch"


@dataclass(frozen=True)
class ReuseExpectation:
    """Which layers must (and must not) link a reuse pair.

    ``new_post`` is False for reposts, which never appear as a new post
    and are therefore excluded from layer building entirely.
    """

    reuse_type: ReuseType
    new_post: bool
    linked: Dict[LayerKind, bool]


# Reuse semantics: transcript (audio), music id, video frames and
# description survival per reuse type, mapped onto the detection layers.
EXPECTED_DETECTION: Dict[ReuseType, Dict[LayerKind, bool]] = {
    ReuseType.REPOST: {k: False for k in LayerKind},  # excluded: not a new post
    ReuseType.REUPLOAD: {
        LayerKind.HASHTAG_SEQUENCE: False,
        LayerKind.VIDEO_DESCRIPTION: False,
        LayerKind.URL: False,
        LayerKind.MUSIC_ID: False,
        LayerKind.SAME_AUDIO: True,
        LayerKind.PARTIAL_AUDIO: False,
        LayerKind.VIDEO_SIMILARITY: True,
    },
    ReuseType.DUET: {
        LayerKind.HASHTAG_SEQUENCE: False,
        LayerKind.VIDEO_DESCRIPTION: False,
        LayerKind.URL: False,
        LayerKind.MUSIC_ID: True,
        LayerKind.SAME_AUDIO: True,
        LayerKind.PARTIAL_AUDIO: False,
        LayerKind.VIDEO_SIMILARITY: False,
    },
    ReuseType.STITCH: {
        LayerKind.HASHTAG_SEQUENCE: False,
        LayerKind.VIDEO_DESCRIPTION: False,
        LayerKind.URL: False,
        LayerKind.MUSIC_ID: False,
        LayerKind.SAME_AUDIO: False,
        LayerKind.PARTIAL_AUDIO: True,
        LayerKind.VIDEO_SIMILARITY: False,
    },
}


def _words(rng: random.Random, n: int) -> str:
    return " ".join(rng.choice(_VOCAB) for _ in range(n))


def _transcript(rng: random.Random, mean_words: int = 30) -> str:
    n = max(5, int(rng.gauss(mean_words, mean_words / 5)))
    return _words(rng, n)


def _frames(rng: random.Random, n_frames: int = 8) -> Tuple[int, ...]:
    return tuple(rng.getrandbits(64) for _ in range(n_frames))


def _flip_bits(h: int, rng: random.Random, n_bits: int) -> int:
    for bit in rng.sample(range(64), n_bits):
        h ^= 1 << bit
    return h


def make_base_post(rng: random.Random, idx: int, created_at: int) -> PostRecord:
    """A self-contained base post with transcript, frames, music id and a
    unique hashtag, suitable as the original side of a reuse pair."""
    from coactnet.ingest import extract_hashtags, extract_urls

    description = f"{_words(rng, 4)} #base{idx}"
    return PostRecord(
        post_id=f"base{idx:06d}",
        user_id=f"u_base{idx:06d}",
        username=f"creator_{idx}",
        created_at=created_at,
        description=description,
        hashtags=extract_hashtags(description),
        urls=extract_urls(description),
        music_id=f"m{idx:06d}",
        transcript=_transcript(rng),
        frame_hashes=_frames(rng),
    )


def generate_reuse_pair(
    base: PostRecord, reuse_type: ReuseType, rng: random.Random
) -> Tuple[PostRecord, ReuseExpectation]:
    """Derive a reused post from ``base`` according to the reuse semantics.

    Reupload keeps transcript and frames verbatim but draws a fresh music
    id; duet keeps music id and transcript but alters every frame beyond
    the matching radius; stitch appends commentary at least as long as
    the original (forcing the exact score below the midpoint while the
    partial score stays perfect) and replaces music and frames. The
    returned expectation row states which layers must link the pair.
    """
    from coactnet.ingest import extract_hashtags, extract_urls

    if not base.transcript or not base.frame_hashes:
        raise IncompleteBaseError("reuse pairs need a base with transcript and frames")
    suffix = rng.randrange(10**6)
    post_id = f"{base.post_id}_{reuse_type.value}"
    user_id = f"u_{reuse_type.value}_{base.post_id}"
    username = f"{rng.choice(_FEMALE_NAMES)}{rng.randrange(1000, 9999)}"
    created_at = base.created_at + rng.randrange(30, 3600)
    description = f"{_words(rng, 4)} #re{suffix}"

    if reuse_type is ReuseType.REPOST:
        derived = PostRecord(
            post_id=post_id,
            user_id=user_id,
            username=username,
            created_at=created_at,
            description=base.description,
            hashtags=base.hashtags,
            urls=base.urls,
            music_id=base.music_id,
            transcript=base.transcript,
            frame_hashes=base.frame_hashes,
        )
        return derived, ReuseExpectation(reuse_type, False, EXPECTED_DETECTION[reuse_type])

    if reuse_type is ReuseType.REUPLOAD:
        music_id = f"m_fresh_{suffix}_{base.post_id}"
        transcript = base.transcript
        frame_hashes = base.frame_hashes
    elif reuse_type is ReuseType.DUET:
        music_id = base.music_id
        transcript = base.transcript
        # split-screen recomposition: every frame differs beyond radius 1
        frame_hashes = tuple(_flip_bits(h, rng, 3) for h in base.frame_hashes)
    elif reuse_type is ReuseType.STITCH:
        music_id = f"m_fresh_{suffix}_{base.post_id}"
        commentary_words = 2 * len(base.transcript.split()) + 2
        transcript = base.transcript + " " + _words(rng, commentary_words)
        altered = tuple(_flip_bits(h, rng, 3) for h in base.frame_hashes)
        frame_hashes = altered + _frames(rng, 4)
    else:  # pragma: no cover
        raise ValueError(reuse_type)

    derived = PostRecord(
        post_id=post_id,
        user_id=user_id,
        username=username,
        created_at=created_at,
        description=description,
        hashtags=extract_hashtags(description),
        urls=extract_urls(description),
        music_id=music_id,
        transcript=transcript,
        frame_hashes=frame_hashes,
    )
    return derived, ReuseExpectation(reuse_type, True, EXPECTED_DETECTION[reuse_type])


def expected_detection_matrix(
    results: Sequence[Tuple[ReuseType, ReuseExpectation]],
) -> Dict[ReuseType, Dict[LayerKind, bool]]:
    """Aggregate per-pair expectation rows into the type-by-layer matrix.

    Any row disagreeing with the reuse-semantics constants is an internal
    inconsistency and raises MatrixMismatchError.
    """
    matrix: Dict[ReuseType, Dict[LayerKind, bool]] = {}
    for reuse_type, expectation in results:
        row = expectation.linked
        if row != EXPECTED_DETECTION[reuse_type]:
            raise MatrixMismatchError(f"expectation row for {reuse_type} deviates: {row}")
        if expectation.new_post != (reuse_type is not ReuseType.REPOST):
            raise MatrixMismatchError(f"new-post flag wrong for {reuse_type}")
        if reuse_type in matrix and matrix[reuse_type] != row:
            raise MatrixMismatchError(f"conflicting rows for {reuse_type}")
        matrix[reuse_type] = dict(row)
    return matrix


@dataclass(frozen=True)
class ClusterJitter:
    """Perturbations applied to each cluster post."""

    time_window_s: int = 0
    description_mutation_rate: float = 0.0
    permute_hashtags: bool = False


@dataclass(frozen=True)
class ClusterSpec:
    """A coordinated cluster to inject: n accounts posting copies of a template."""

    n_users: int
    template: PostRecord
    active_window: Tuple[int, int]
    jitter: ClusterJitter = ClusterJitter()
    posts_per_user: int = 2
    burst: bool = False  # all posts within one 60 s window

    def __post_init__(self) -> None:
        if self.n_users < 2:
            raise ValueError("a cluster needs at least two accounts")
        if self.active_window[0] > self.active_window[1]:
            raise ValueError("invalid active window")
        if self.posts_per_user < 1:
            raise ValueError("posts_per_user must be >= 1")


@dataclass(frozen=True)
class GroundTruthCluster:
    """The injected accounts and the edges the pipeline must recover."""

    cluster_id: str
    users: Tuple[str, ...]
    expected_edges: Tuple[Tuple[str, str], ...]


def inject_coordinated_cluster(
    corpus: Sequence[PostRecord],
    spec: ClusterSpec,
    rng: random.Random,
    cluster_id: str = "c0",
) -> Tuple[List[PostRecord], GroundTruthCluster]:
    """Append a coordinated cluster to the corpus and return its ground truth.

    Accounts follow the convention of a first name followed by digits;
    each posts ``posts_per_user`` copies of the template inside the
    active window (or a 60 s burst window in burst mode).
    """
    from coactnet.ingest import extract_hashtags, extract_urls

    start, end = spec.active_window
    if spec.burst:
        start = start + rng.randrange(max(1, end - start - 60)) if end - start > 60 else start
        end = start + 60
    users = []
    posts: List[PostRecord] = list(corpus)
    for u in range(spec.n_users):
        user_id = f"{cluster_id}_u{u:03d}"
        username = f"{rng.choice(_FEMALE_NAMES)}{rng.randrange(10000, 99999)}"
        users.append(user_id)
        for p in range(spec.posts_per_user):
            description = spec.template.description
            if rng.random() < spec.jitter.description_mutation_rate:
                description = description + " " + rng.choice(_VOCAB)
            hashtags = extract_hashtags(description)
            if spec.jitter.permute_hashtags and len(hashtags) > 1:
                tags = list(hashtags)
                rng.shuffle(tags)
                description = description.split("#")[0].strip() + " " + " ".join(
                    f"#{t}" for t in tags
                )
            created = rng.randrange(start, end + 1)
            if spec.jitter.time_window_s:
                created += rng.randrange(-spec.jitter.time_window_s, spec.jitter.time_window_s + 1)
            posts.append(
                PostRecord(
                    post_id=f"{cluster_id}_u{u:03d}_p{p}",
                    user_id=user_id,
                    username=username,
                    created_at=max(1, created),
                    description=description,
                    hashtags=extract_hashtags(description),
                    urls=extract_urls(description),
                    music_id=spec.template.music_id,
                    transcript=spec.template.transcript,
                    frame_hashes=spec.template.frame_hashes,
                )
            )
    expected_edges = tuple(
        (users[i], users[j]) for i in range(len(users)) for j in range(i + 1, len(users))
    )
    truth = GroundTruthCluster(
        cluster_id=cluster_id, users=tuple(sorted(users)), expected_edges=expected_edges
    )
    return posts, truth


def make_background_posts(
    n: int,
    rng: random.Random,
    start: int = 1_700_000_000,
    end: int = 1_700_600_000,
    with_transcripts: bool = False,
) -> List[PostRecord]:
    """Noise posts with unique descriptions and hashtags (pairwise unlinked)."""
    from coactnet.ingest import extract_hashtags, extract_urls

    posts = []
    for i in range(n):
        description = f"{_words(rng, 5)} nr{i} #bg{i}"
        posts.append(
            PostRecord(
                post_id=f"bg{i:06d}",
                user_id=f"u_bg{i:06d}",
                username=f"user{rng.randrange(10**6)}",
                created_at=rng.randrange(start, end),
                description=description,
                hashtags=extract_hashtags(description),
                urls=extract_urls(description),
                music_id=f"m_bg{i:06d}",
                transcript=_transcript(rng) if with_transcripts else None,
                frame_hashes=None,
            )
        )
    return posts


def ground_truth_json(clusters: Sequence[GroundTruthCluster]) -> str:
    payload = {
        "clusters": [
            {
                "cluster_id": c.cluster_id,
                "users": list(c.users),
                "expected_edges": [list(e) for e in c.expected_edges],
            }
            for c in clusters
        ]
    }
    return json.dumps(payload, indent=2, sort_keys=True)


@dataclass(frozen=True)
class ScenarioCorpus:
    """A generated corpus plus everything needed to verify it."""

    posts: Tuple[PostRecord, ...]
    reuse_results: Tuple[Tuple[ReuseType, ReuseExpectation], ...]
    reuse_pairs: Tuple[Tuple[str, str, ReuseType], ...]  # (base user, derived user, type)
    clusters: Tuple[GroundTruthCluster, ...] = ()


def make_reuse_scenario(pairs_per_type: int, seed: int) -> ScenarioCorpus:
    """A corpus of base posts with one derived post per reuse type each.

    Reposts are generated but excluded from the corpus (they are not new
    posts); their expectation rows still appear in the results.
    """
    rng = random.Random(seed)
    posts: List[PostRecord] = []
    results: List[Tuple[ReuseType, ReuseExpectation]] = []
    reuse_pairs: List[Tuple[str, str, ReuseType]] = []
    idx = 0
    t0 = 1_700_000_000
    for reuse_type in ReuseType:
        for _ in range(pairs_per_type):
            base = make_base_post(rng, idx, t0 + idx * 7200)
            idx += 1
            derived, expectation = generate_reuse_pair(base, reuse_type, rng)
            posts.append(base)
            results.append((reuse_type, expectation))
            reuse_pairs.append((base.user_id, derived.user_id, reuse_type))
            if expectation.new_post:
                posts.append(derived)
    return ScenarioCorpus(
        posts=tuple(posts), reuse_results=tuple(results), reuse_pairs=tuple(reuse_pairs)
    )
