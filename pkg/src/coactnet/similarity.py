"""Modality similarity kernels.

Edit-distance ratios for audio transcripts (exact and best-window
partial), the audio pair classifier with its calibrated thresholds,
64-bit difference hashing for video frames and Hamming-based frame
matching.

Scores are integers on a 0-100 scale, rounded half-up, so the calibrated
thresholds (88 exact, 68 partial, midpoint 78) apply directly and the
results are bit-identical across platforms.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from coactnet.model import (
    AudioClass,
    EmptyTranscriptError,
    ImageTooSmallError,
    NoFramesError,
)

DEFAULT_EXACT_THRESHOLD = 88
DEFAULT_PARTIAL_THRESHOLD = 68

# dhash grid: 9 columns x 8 rows of cells, one bit per horizontal neighbour pair.
_GRID_COLS = 9
_GRID_ROWS = 8


def levenshtein(a: str, b: str) -> int:
    """Unit-cost Levenshtein distance over unicode scalar values.

    Bit-parallel (Myers 1999) with arbitrary-precision bitvectors, so a
    single code path covers any pattern length.
    """
    m = len(a)
    if m == 0:
        return len(b)
    if len(b) == 0:
        return m
    peq: dict = {}
    bit = 1
    for ch in a:
        peq[ch] = peq.get(ch, 0) | bit
        bit <<= 1
    return _myers(peq, m, b)


def _myers(peq: dict, m: int, b: str) -> int:
    mask = (1 << m) - 1
    high = 1 << (m - 1)
    pv = mask
    mv = 0
    score = m
    for ch in b:
        eq = peq.get(ch, 0)
        xv = eq | mv
        xh = (((eq & pv) + pv) ^ pv) | eq
        ph = mv | (~(xh | pv) & mask)
        mh = pv & xh
        if ph & high:
            score += 1
        elif mh & high:
            score -= 1
        ph = ((ph << 1) | 1) & mask
        mh = (mh << 1) & mask
        pv = (mh | (~(xv | ph) & mask)) & mask
        mv = ph & xv
    return score


def _infix_distance(peq: dict, m: int, b: str) -> int:
    """Minimum edit distance of the pattern against any substring of ``b``.

    Semi-global Myers: the text prefix is free, so the horizontal shift
    feeds in a zero instead of a one. Every fixed-length window of ``b``
    is a substring, so this lower-bounds the best window distance.
    """
    mask = (1 << m) - 1
    high = 1 << (m - 1)
    pv = mask
    mv = 0
    score = m
    best = m
    for ch in b:
        eq = peq.get(ch, 0)
        xv = eq | mv
        xh = (((eq & pv) + pv) ^ pv) | eq
        ph = mv | (~(xh | pv) & mask)
        mh = pv & xh
        if ph & high:
            score += 1
        elif mh & high:
            score -= 1
        ph = (ph << 1) & mask
        mh = (mh << 1) & mask
        pv = (mh | (~(xv | ph) & mask)) & mask
        mv = ph & xv
        if score < best:
            best = score
            if best == 0:
                break
    return best


def _ratio_from_distance(d: int, denom: int) -> int:
    # round-half-up of 100 * (1 - d/denom), in exact integer arithmetic
    return (200 * (denom - d) + denom) // (2 * denom)


def similarity_ratio(a: str, b: str) -> int:
    """Normalized edit-distance similarity: 100*(1 - d/max(|a|,|b|)), rounded half-up."""
    denom = max(len(a), len(b))
    if denom == 0:
        return 100
    return _ratio_from_distance(levenshtein(a, b), denom)


def partial_similarity_ratio(a: str, b: str) -> int:
    """Best similarity of the shorter string against any same-length window of the longer.

    Ties on length treat ``a`` as the shorter string. An empty shorter
    string scores 100.
    """
    s, l = (a, b) if len(a) <= len(b) else (b, a)
    m = len(s)
    if m == 0:
        return 100
    peq: dict = {}
    bit = 1
    for ch in s:
        peq[ch] = peq.get(ch, 0) | bit
        bit <<= 1
    best = m  # worst case: replace everything
    j = 0
    n_windows = len(l) - m + 1
    while j < n_windows:
        d = _myers(peq, m, l[j : j + m])
        if d < best:
            best = d
            if best == 0:
                break
        # adjacent windows differ by at most 2 edits: window j+i has
        # distance >= d - 2i, so the next window that could beat the
        # current best is (d - best)//2 + 1 steps away
        j += (d - best) // 2 + 1
    return _ratio_from_distance(best, m)


@dataclass(frozen=True)
class AudioScores:
    """Classification of one transcript pair with both underlying scores."""

    label: AudioClass
    exact_score: int
    partial_score: int


def classify_audio_pair(
    a: str,
    b: str,
    exact_threshold: int = DEFAULT_EXACT_THRESHOLD,
    partial_threshold: int = DEFAULT_PARTIAL_THRESHOLD,
) -> AudioScores:
    """Classify a transcript pair as same, partial or unrelated audio.

    Exact score at or above ``exact_threshold`` means same audio. When
    the scores span both categories (partial above its threshold but
    exact below), the midpoint of the two thresholds decides whether the
    pair still counts as same audio.

    The window sweep is skipped when the substring edit distance (a
    lower bound on every window distance) already caps the partial score
    below its threshold; the reported partial score is then that upper
    bound rather than the exact best-window value.
    """
    if not a or not b:
        raise EmptyTranscriptError("audio classification needs non-empty transcripts")
    midpoint = (exact_threshold + partial_threshold) / 2
    e = similarity_ratio(a, b)
    s, l = (a, b) if len(a) <= len(b) else (b, a)
    peq: dict = {}
    bit = 1
    for ch in s:
        peq[ch] = peq.get(ch, 0) | bit
        bit <<= 1
    p_cap = _ratio_from_distance(_infix_distance(peq, len(s), l), len(s))
    p = p_cap if p_cap < partial_threshold else partial_similarity_ratio(a, b)
    if e >= exact_threshold:
        label = AudioClass.SAME
    elif p >= partial_threshold and e >= midpoint:
        label = AudioClass.SAME
    elif p >= partial_threshold:
        label = AudioClass.PARTIAL
    else:
        label = AudioClass.UNRELATED
    return AudioScores(label=label, exact_score=e, partial_score=p)


def length_prune_bound(len_a: int, len_b: int) -> int:
    """Upper bound on similarity_ratio from lengths alone (d >= |len_a - len_b|)."""
    lo, hi = min(len_a, len_b), max(len_a, len_b)
    if hi == 0:
        return 100
    return _ratio_from_distance(hi - lo, hi)


def dhash_frame(pixels: Sequence, width: Optional[int] = None, height: Optional[int] = None) -> int:
    """64-bit difference hash of a grayscale image.

    The image is partitioned into a 9x8 grid of near-equal rectangles;
    each cell value is the mean of its pixels rounded half-up, and bit
    ``r*8 + c`` is set when cell (r, c) is darker than its right
    neighbour.
    """
    arr = np.asarray(pixels, dtype=np.uint64)
    if arr.ndim == 1:
        if width is None or height is None:
            raise ValueError("flat pixel input requires width and height")
        arr = arr.reshape(height, width)
    h, w = arr.shape
    if w < _GRID_COLS or h < _GRID_ROWS:
        raise ImageTooSmallError(f"image {w}x{h} smaller than {_GRID_COLS}x{_GRID_ROWS} grid")
    cells = _grid_means(arr)
    value = 0
    for r in range(_GRID_ROWS):
        for c in range(_GRID_COLS - 1):
            if cells[r][c] < cells[r][c + 1]:
                value |= 1 << (r * 8 + c)
    return value


def _grid_means(arr: np.ndarray) -> list:
    h, w = arr.shape
    row_edges = [r * h // _GRID_ROWS for r in range(_GRID_ROWS + 1)]
    col_edges = [c * w // _GRID_COLS for c in range(_GRID_COLS + 1)]
    cells = []
    for r in range(_GRID_ROWS):
        row = []
        block_rows = arr[row_edges[r] : row_edges[r + 1]]
        for c in range(_GRID_COLS):
            block = block_rows[:, col_edges[c] : col_edges[c + 1]]
            total = int(block.sum())
            count = block.size
            row.append((2 * total + count) // (2 * count))  # mean, half-up
        cells.append(row)
    return cells


def is_low_information_hash(h: int) -> bool:
    """True for hashes consistent with a uniform frame (no left<right gradient).

    Used by the optional low-information filter to drop e.g. black-screen
    frames that otherwise create false positive video matches.
    """
    return h == 0


def hamming_distance(h1: int, h2: int) -> int:
    """Number of differing bits between two 64-bit frame hashes."""
    return int(h1 ^ h2).bit_count()


def video_match(
    frames_a: Sequence[int],
    frames_b: Sequence[int],
    max_dist: int = 1,
    drop_low_info: bool = False,
) -> bool:
    """True when every frame of the shorter video has a near match in the longer.

    Ties on length treat ``frames_a`` as the shorter video. With
    ``drop_low_info`` set, uniform (gradient-free) frames are removed
    from the shorter side first; if none remain the videos do not match.
    """
    if not frames_a or not frames_b:
        raise NoFramesError("video comparison needs at least one frame per side")
    s, l = (frames_a, frames_b) if len(frames_a) <= len(frames_b) else (frames_b, frames_a)
    if drop_low_info:
        s = [h for h in s if not is_low_information_hash(h)]
        if not s:
            return False
    longer = set(l)
    for h in s:
        if h in longer:
            continue
        if not any(hamming_distance(h, g) <= max_dist for g in longer):
            return False
    return True


def dhash_image_file(path: str) -> int:
    """Difference hash of an image file (converted to 8-bit grayscale)."""
    from PIL import Image

    with Image.open(path) as img:
        gray = img.convert("L")
        return dhash_frame(np.asarray(gray))
