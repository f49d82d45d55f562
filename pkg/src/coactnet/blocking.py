"""Candidate generation for the transcript layers.

All-pairs transcript scoring is quadratic in corpus size with an
expensive kernel, so candidates are pre-screened with a sound longest-
common-subsequence bound: for the shorter transcript s of a pair,

    partial score <= 100 * LCS(s, l) / |s|
    exact score   <= 100 * LCS(s, l) / max(|s|, |l|)

(edit distance with substitutions is at least max_len - LCS, and the LCS
of s with any window of l is at most LCS(s, l)). A pair is kept iff the
bound still allows a score at or above the classifier thresholds, so the
screen never drops a true match.

The LCS lengths are computed with a multi-word bit-parallel kernel,
JIT-compiled with numba when available; a pure-Python bitvector fallback
keeps small corpora working without it.
"""

from __future__ import annotations

from typing import List, Sequence, Tuple

import numpy as np

try:  # numba is optional; the fallback is exact but slower
    import numba

    _HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    numba = None
    _HAVE_NUMBA = False


def lcs_length(a: str, b: str) -> int:
    """Length of the longest common subsequence (bit-parallel, exact)."""
    if len(a) > len(b):
        a, b = b, a
    m = len(a)
    if m == 0:
        return 0
    peq: dict = {}
    bit = 1
    for ch in a:
        peq[ch] = peq.get(ch, 0) | bit
        bit <<= 1
    mask = (1 << m) - 1
    v = mask
    for ch in b:
        mch = peq.get(ch, 0)
        u = v & mch
        v = ((v + u) | (v & ~mch)) & mask
    return m - v.bit_count()


def _passes_gate(lcs: int, short_len: int, long_len: int, partial_t: int, exact_t: int) -> bool:
    # score >= t (after half-up rounding) requires 200*LCS >= (2t-1)*denominator
    return (200 * lcs >= (2 * partial_t - 1) * short_len) or (
        200 * lcs >= (2 * exact_t - 1) * long_len
    )


if _HAVE_NUMBA:

    @numba.njit(cache=True, inline="always")
    def _popcount64(x):
        x = x - ((x >> np.uint64(1)) & np.uint64(0x5555555555555555))
        x = (x & np.uint64(0x3333333333333333)) + (
            (x >> np.uint64(2)) & np.uint64(0x3333333333333333)
        )
        x = (x + (x >> np.uint64(4))) & np.uint64(0x0F0F0F0F0F0F0F0F)
        return (x * np.uint64(0x0101010101010101)) >> np.uint64(56)

    @numba.njit(cache=True, parallel=True)
    def _lcs_gate_kernel(
        texts, offsets, lengths, peq, peq_words, pair_i, pair_j, partial_t, exact_t, out
    ):
        ones = np.uint64(0xFFFFFFFFFFFFFFFF)
        for p in numba.prange(pair_i.shape[0]):
            i = pair_i[p]
            j = pair_j[p]
            # pattern = shorter transcript; its precomputed Peq rows are used
            if lengths[i] <= lengths[j]:
                pat, txt = i, j
            else:
                pat, txt = j, i
            m = lengths[pat]
            n = lengths[txt]
            words = (m + 63) // 64
            v = np.empty(words, dtype=np.uint64)
            for w in range(words):
                v[w] = ones
            rem = m - (words - 1) * 64
            top_mask = ones if rem == 64 else np.uint64((1 << rem) - 1)
            v[words - 1] = top_mask
            base = pat * peq_words
            toff = offsets[txt]
            for t in range(n):
                c = texts[toff + t]
                carry = np.uint64(0)
                for w in range(words):
                    mch = peq[base + w, c]
                    vw = v[w]
                    u = vw & mch
                    s = vw + u + carry
                    if carry == np.uint64(0):
                        carry = np.uint64(1) if s < vw else np.uint64(0)
                    else:
                        carry = np.uint64(1) if s <= vw else np.uint64(0)
                    v[w] = s | (vw & ~mch)
                v[words - 1] &= top_mask
            setbits = 0
            for w in range(words):
                setbits += int(_popcount64(v[w]))
            lcs = m - setbits
            keep = False
            if 200 * lcs >= (2 * partial_t - 1) * m:
                keep = True
            elif 200 * lcs >= (2 * exact_t - 1) * n:
                keep = True
            out[p] = keep


def _encode(transcripts: Sequence[str]):
    alphabet: dict = {}
    encoded = []
    for t in transcripts:
        row = np.empty(len(t), dtype=np.int32)
        for k, ch in enumerate(t):
            cid = alphabet.get(ch)
            if cid is None:
                cid = len(alphabet)
                alphabet[ch] = cid
            row[k] = cid
        encoded.append(row)
    return encoded, alphabet


def audio_candidate_pairs(
    transcripts: Sequence[str],
    partial_threshold: int,
    exact_threshold: int,
    pairs: Sequence[Tuple[int, int]] = None,
) -> List[Tuple[int, int]]:
    """Indices of transcript pairs that could reach either classifier threshold.

    ``pairs`` restricts the screen to the given candidate index pairs;
    by default all i < j pairs are screened.
    """
    n = len(transcripts)
    n_pairs = n * (n - 1) // 2 if pairs is None else len(pairs)
    if n_pairs == 0:
        return []
    if not _HAVE_NUMBA or n_pairs < 20000:
        if pairs is None:
            pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
        out = []
        for i, j in pairs:
            a, b = transcripts[i], transcripts[j]
            short_len, long_len = min(len(a), len(b)), max(len(a), len(b))
            if short_len == 0:
                continue
            if _passes_gate(lcs_length(a, b), short_len, long_len, partial_threshold, exact_threshold):
                out.append((i, j))
        return out

    encoded, alphabet = _encode(transcripts)
    lengths = np.array([len(t) for t in transcripts], dtype=np.int64)
    offsets = np.zeros(n, dtype=np.int64)
    total = 0
    for i, row in enumerate(encoded):
        offsets[i] = total
        total += len(row)
    flat = np.concatenate(encoded) if total else np.zeros(0, dtype=np.int32)

    peq_words = int((lengths.max() + 63) // 64) if n else 1
    asize = max(1, len(alphabet))
    peq = np.zeros((n * peq_words, asize), dtype=np.uint64)
    for i, row in enumerate(encoded):
        base = i * peq_words
        for k in range(len(row)):
            peq[base + (k >> 6), row[k]] |= np.uint64(1) << np.uint64(k & 63)

    if pairs is None:
        pair_i, pair_j = np.triu_indices(n, 1)
        pair_i = pair_i.astype(np.int64)
        pair_j = pair_j.astype(np.int64)
    else:
        pair_i = np.array([p[0] for p in pairs], dtype=np.int64)
        pair_j = np.array([p[1] for p in pairs], dtype=np.int64)
    ok = (lengths[pair_i] > 0) & (lengths[pair_j] > 0)
    pair_i, pair_j = pair_i[ok], pair_j[ok]
    if pair_i.size == 0:
        return []
    keep = np.zeros(pair_i.size, dtype=np.bool_)
    _lcs_gate_kernel(
        flat, offsets, lengths, peq, peq_words, pair_i, pair_j,
        np.int64(partial_threshold), np.int64(exact_threshold), keep,
    )
    return [(int(i), int(j)) for i, j in zip(pair_i[keep], pair_j[keep])]


def token_trigram_blocks(transcripts: Sequence[str]) -> List[Tuple[int, int]]:
    """Candidate pairs sharing at least one token 3-gram.

    Heuristic blocking for large corpora (trades recall for speed); not
    used unless explicitly enabled.
    """
    buckets: dict = {}
    for idx, text in enumerate(transcripts):
        tokens = text.split()
        grams = {tuple(tokens[k : k + 3]) for k in range(len(tokens) - 2)} or {tuple(tokens)}
        for g in grams:
            buckets.setdefault(g, []).append(idx)
    pairs = set()
    for members in buckets.values():
        for x in range(len(members)):
            for y in range(x + 1, len(members)):
                pairs.add((members[x], members[y]))
    return sorted(pairs)
