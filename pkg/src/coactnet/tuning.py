"""Precision-recall harness for calibrating the similarity thresholds.

Labels come from a CSV of annotated post pairs (visual / audio / message
judgments). The harness scores each pair, builds a precision-recall
curve over the distinct scores, and selects a threshold; the audio
classifier's midpoint constant is then derived from the two selected
thresholds rather than hard-coded.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from typing import Callable, List, Sequence, Tuple

from coactnet.model import DegenerateLabelsError, NoPerfectPointError

FIRST_PERFECT = "first-perfect"
MAX_F1 = "max-F1"


@dataclass(frozen=True)
class LabeledPair:
    """One annotated post pair with its three judgment dimensions."""

    post_a: str
    post_b: str
    label_visual: bool
    label_audio: str  # "same" | "partial" | "none"
    label_message: bool

    def __post_init__(self) -> None:
        if self.label_audio not in ("same", "partial", "none"):
            raise ValueError(f"bad audio label: {self.label_audio!r}")
        if self.post_a == self.post_b:
            raise ValueError("labeled pair must link two distinct posts")


@dataclass(frozen=True)
class CurvePoint:
    threshold: int
    precision: float
    recall: float

    @property
    def f1(self) -> float:
        if self.precision + self.recall == 0:
            return 0.0
        return 2 * self.precision * self.recall / (self.precision + self.recall)


def precision_recall_curve(
    pairs: Sequence[LabeledPair],
    scorer: Callable[[LabeledPair], int],
    positive: Callable[[LabeledPair], bool],
) -> List[CurvePoint]:
    """One point per distinct score, with "score >= t" as the decision rule.

    Precision at zero predicted positives is reported as 1.0 by
    convention. Points are sorted by threshold ascending.
    """
    labeled = [(scorer(p), positive(p)) for p in pairs]
    n_pos = sum(1 for _, y in labeled if y)
    if n_pos == 0 or n_pos == len(labeled):
        raise DegenerateLabelsError("need at least one positive and one negative pair")
    points = []
    for t in sorted({s for s, _ in labeled}):
        tp = sum(1 for s, y in labeled if s >= t and y)
        fp = sum(1 for s, y in labeled if s >= t and not y)
        precision = tp / (tp + fp) if tp + fp else 1.0
        recall = tp / n_pos
        points.append(CurvePoint(threshold=t, precision=precision, recall=recall))
    return points


def select_threshold(curve: Sequence[CurvePoint], policy: str = FIRST_PERFECT) -> int:
    """Pick a threshold: smallest perfect point, or the argmax-F1 (ties -> smallest)."""
    if not curve:
        raise ValueError("empty curve")
    if policy == FIRST_PERFECT:
        for point in sorted(curve, key=lambda p: p.threshold):
            if point.precision == 1.0 and point.recall == 1.0:
                return point.threshold
        raise NoPerfectPointError("no threshold reaches precision = recall = 1.0")
    if policy == MAX_F1:
        best = max(sorted(curve, key=lambda p: p.threshold), key=lambda p: p.f1)
        for point in sorted(curve, key=lambda p: p.threshold):
            if point.f1 == best.f1:
                return point.threshold
        raise AssertionError("unreachable")
    raise ValueError(f"unknown policy: {policy!r}")


def derive_midpoint(exact_threshold: int, partial_threshold: int) -> float:
    """Midpoint between the selected exact and partial thresholds."""
    return (exact_threshold + partial_threshold) / 2


_HEADERS = ["post_a", "post_b", "visual", "audio", "message"]
_TRUTHY = {"1", "true", "yes", "y"}


def parse_labels_csv(text: str) -> List[LabeledPair]:
    """Parse the labels CSV (headers post_a, post_b, visual, audio, message)."""
    reader = csv.DictReader(io.StringIO(text))
    if reader.fieldnames is None or [h.strip() for h in reader.fieldnames] != _HEADERS:
        raise ValueError(f"labels CSV must have headers {','.join(_HEADERS)}")
    pairs = []
    for row in reader:
        pairs.append(
            LabeledPair(
                post_a=row["post_a"].strip(),
                post_b=row["post_b"].strip(),
                label_visual=row["visual"].strip().lower() in _TRUTHY,
                label_audio=row["audio"].strip().lower(),
                label_message=row["message"].strip().lower() in _TRUTHY,
            )
        )
    return pairs


@dataclass(frozen=True)
class TuningResult:
    """Selected thresholds and the derived classifier midpoint."""

    exact_threshold: int
    partial_threshold: int
    midpoint: float
    exact_curve: Tuple[CurvePoint, ...]
    partial_curve: Tuple[CurvePoint, ...]


def tune_audio_thresholds(
    pairs: Sequence[LabeledPair],
    exact_scorer: Callable[[LabeledPair], int],
    partial_scorer: Callable[[LabeledPair], int],
    policy: str = FIRST_PERFECT,
) -> TuningResult:
    """Run both calibrations and derive the midpoint from the selections.

    Exact positives are pairs labeled same-audio; partial positives are
    pairs labeled same or partial.
    """
    exact_curve = precision_recall_curve(pairs, exact_scorer, lambda p: p.label_audio == "same")
    partial_curve = precision_recall_curve(
        pairs, partial_scorer, lambda p: p.label_audio in ("same", "partial")
    )
    exact_t = select_threshold(exact_curve, policy)
    partial_t = select_threshold(partial_curve, policy)
    return TuningResult(
        exact_threshold=exact_t,
        partial_threshold=partial_t,
        midpoint=derive_midpoint(exact_t, partial_t),
        exact_curve=tuple(exact_curve),
        partial_curve=tuple(partial_curve),
    )
