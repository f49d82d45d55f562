"""Corpus ingestion: JSON Lines parsing, hashtag/URL derivation, summaries.

Corpus format: UTF-8 JSON Lines, one post per line with fields
``post_id``, ``user_id``, ``username``, ``created_at``, ``description``,
``music_id``, ``voice_to_text``, ``frame_hashes`` (decimal strings) and
``frames_dir``. Unknown fields are ignored; hashtags and URLs are always
re-derived from the description.
"""

from __future__ import annotations

import json
import os
import re
from dataclasses import dataclass, field
from typing import IO, Iterable, List, Optional, Sequence, Tuple, Union

from coactnet.model import CorpusError, PostRecord

_HASHTAG_RE = re.compile(r"#(\w+)", re.UNICODE)
_URL_RE = re.compile(r"https?://\S+")
_TRAILING_PUNCT = ".,;:!?)"


def extract_hashtags(description: str) -> Tuple[str, ...]:
    """In-order, case-folded hashtag tokens of a description.

    A token is the maximal run of letters/digits/underscore after '#';
    empty tokens are dropped and duplicates preserved (sequence identity
    matters for the hashtag-sequence layer).
    """
    return tuple(m.casefold() for m in _HASHTAG_RE.findall(description))


def extract_urls(description: str) -> Tuple[str, ...]:
    """http(s) URLs in a description, trailing punctuation stripped.

    The full URL is kept (not just the domain); no further normalization
    is applied, so differently-written URLs stay distinct.
    """
    urls = []
    for m in _URL_RE.findall(description):
        url = m.rstrip(_TRAILING_PUNCT)
        if url:
            urls.append(url)
    return tuple(urls)


@dataclass(frozen=True)
class CorpusSummary:
    """Per-field availability counts and the corpus time range."""

    post_count: int
    user_count: int
    posts_with_transcript: int
    posts_with_frames: int
    posts_with_music_id: int
    time_range: Tuple[int, int]
    duplicate_post_ids: int = 0
    malformed_lines: int = 0

    def as_dict(self) -> dict:
        return {
            "post_count": self.post_count,
            "user_count": self.user_count,
            "posts_with_transcript": self.posts_with_transcript,
            "posts_with_frames": self.posts_with_frames,
            "posts_with_music_id": self.posts_with_music_id,
            "time_range": list(self.time_range),
            "duplicate_post_ids": self.duplicate_post_ids,
            "malformed_lines": self.malformed_lines,
        }


@dataclass
class ParseReport:
    """Per-line problems collected while parsing (parsing continues)."""

    errors: List[Tuple[int, str]] = field(default_factory=list)
    duplicates: int = 0


def summarize(records: Sequence[PostRecord], report: Optional[ParseReport] = None) -> CorpusSummary:
    times = [r.created_at for r in records]
    return CorpusSummary(
        post_count=len(records),
        user_count=len({r.user_id for r in records}),
        posts_with_transcript=sum(1 for r in records if r.transcript),
        posts_with_frames=sum(1 for r in records if r.frame_hashes),
        posts_with_music_id=sum(1 for r in records if r.music_id),
        time_range=(min(times), max(times)) if times else (0, 0),
        duplicate_post_ids=report.duplicates if report else 0,
        malformed_lines=len(report.errors) if report else 0,
    )


def _parse_line(obj: dict, frames_root: Optional[str]) -> PostRecord:
    description = obj.get("description") or ""
    if not isinstance(description, str):
        raise ValueError("description must be a string")
    created_at = obj["created_at"]
    if not isinstance(created_at, int) or isinstance(created_at, bool):
        raise ValueError("created_at must be an integer")
    music_id = obj.get("music_id")
    if music_id is not None and not isinstance(music_id, str):
        raise ValueError("music_id must be a string or null")
    transcript = obj.get("voice_to_text")
    if transcript is not None and not isinstance(transcript, str):
        raise ValueError("voice_to_text must be a string or null")

    frame_hashes = None
    raw_hashes = obj.get("frame_hashes")
    if raw_hashes is not None:
        if not isinstance(raw_hashes, list) or not raw_hashes:
            raise ValueError("frame_hashes must be a non-empty array or null")
        parsed = []
        for h in raw_hashes:
            v = int(h)
            if not 0 <= v < 1 << 64:
                raise ValueError(f"frame hash out of 64-bit range: {h}")
            parsed.append(v)
        frame_hashes = tuple(parsed)
    elif obj.get("frames_dir"):
        frame_hashes = _hash_frames_dir(obj["frames_dir"], frames_root)

    return PostRecord(
        post_id=str(obj["post_id"]),
        user_id=str(obj["user_id"]),
        username=str(obj.get("username", "")),
        created_at=created_at,
        description=description,
        hashtags=extract_hashtags(description),
        urls=extract_urls(description),
        music_id=music_id,
        transcript=transcript,
        frame_hashes=frame_hashes,
    )


def _hash_frames_dir(frames_dir: str, frames_root: Optional[str]) -> Tuple[int, ...]:
    from coactnet.similarity import dhash_image_file

    path = os.path.join(frames_root, frames_dir) if frames_root else frames_dir
    names = sorted(
        n for n in os.listdir(path) if n.lower().endswith((".png", ".jpg", ".jpeg", ".bmp"))
    )
    if not names:
        raise ValueError(f"no frame images in {path}")
    return tuple(dhash_image_file(os.path.join(path, n)) for n in names)


def parse_dataset(
    source: Union[str, bytes, IO], frames_root: Optional[str] = None
) -> Tuple[List[PostRecord], CorpusSummary, ParseReport]:
    """Parse a JSON Lines corpus; returns records, summary and a parse report.

    Malformed lines are collected and skipped; duplicate post ids are
    last-write-wins. More than 50% malformed non-empty lines is fatal.
    """
    if isinstance(source, (str, bytes)):
        text = source.decode("utf-8") if isinstance(source, bytes) else source
    else:
        text = source.read()
        if isinstance(text, bytes):
            text = text.decode("utf-8")
    # split on newlines only: unicode line separators (NEL, LS, PS) are
    # legitimate characters inside JSON string fields
    lines = [line.rstrip("\r") for line in text.split("\n")]

    report = ParseReport()
    by_id: dict = {}
    order: List[str] = []
    total = 0
    for lineno, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        total += 1
        try:
            obj = json.loads(line)
            if not isinstance(obj, dict):
                raise ValueError("record must be a JSON object")
            record = _parse_line(obj, frames_root)
        except Exception as exc:  # noqa: BLE001 - collect and continue
            report.errors.append((lineno, str(exc)))
            continue
        if record.post_id in by_id:
            report.duplicates += 1
        else:
            order.append(record.post_id)
        by_id[record.post_id] = record

    if total and len(report.errors) * 2 > total:
        raise CorpusError(
            f"{len(report.errors)} of {total} lines malformed; refusing to continue"
        )
    records = [by_id[pid] for pid in order]
    return records, summarize(records, report), report


def parse_dataset_file(
    path: str, frames_root: Optional[str] = None
) -> Tuple[List[PostRecord], CorpusSummary, ParseReport]:
    with open(path, "r", encoding="utf-8") as fh:
        root = frames_root if frames_root is not None else os.path.dirname(os.path.abspath(path))
        return parse_dataset(fh, frames_root=root)


def record_to_json(record: PostRecord) -> dict:
    """The JSONL representation of one record (frame hashes as decimal strings)."""
    return {
        "post_id": record.post_id,
        "user_id": record.user_id,
        "username": record.username,
        "created_at": record.created_at,
        "description": record.description,
        "music_id": record.music_id,
        "voice_to_text": record.transcript,
        "frame_hashes": (
            [str(h) for h in record.frame_hashes] if record.frame_hashes is not None else None
        ),
        "frames_dir": None,
    }


def serialize_records(records: Iterable[PostRecord]) -> str:
    """Serialize records back to the JSONL corpus format (round-trips with parse)."""
    return "".join(
        json.dumps(record_to_json(r), ensure_ascii=False, sort_keys=True) + "\n" for r in records
    )
