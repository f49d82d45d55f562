import pytest
from hypothesis import given, strategies as st

from coactnet.model import DegenerateLabelsError, NoPerfectPointError
from coactnet.tuning import (
    FIRST_PERFECT,
    MAX_F1,
    CurvePoint,
    LabeledPair,
    derive_midpoint,
    parse_labels_csv,
    precision_recall_curve,
    select_threshold,
    tune_audio_thresholds,
)


def _pair(i, audio):
    return LabeledPair(f"a{i}", f"b{i}", label_visual=False,
                       label_audio=audio, label_message=False)


# scores 60/70 for negatives, 80/90 for positives: every threshold from
# 80 up is clean, everything below lets a negative in
FOUR = [_pair(0, "none"), _pair(1, "none"), _pair(2, "same"), _pair(3, "same")]
SCORES = {"a0": 60, "a1": 70, "a2": 80, "a3": 90}


def scorer(p):
    return SCORES[p.post_a]


class TestCurve:
    def test_four_pair_fixture(self):
        curve = precision_recall_curve(FOUR, scorer, lambda p: p.label_audio == "same")
        assert [(c.threshold, c.precision, c.recall) for c in curve] == [
            (60, 0.5, 1.0),
            (70, 2 / 3, 1.0),
            (80, 1.0, 1.0),
            (90, 1.0, 0.5),
        ]

    def test_one_point_per_distinct_score(self):
        pairs = FOUR + [_pair(4, "same")]
        scores = dict(SCORES, a4=80)
        curve = precision_recall_curve(pairs, lambda p: scores[p.post_a],
                                       lambda p: p.label_audio == "same")
        assert [c.threshold for c in curve] == [60, 70, 80, 90]

    def test_all_positive_raises(self):
        with pytest.raises(DegenerateLabelsError):
            precision_recall_curve(
                [_pair(0, "same"), _pair(1, "same")], scorer,
                lambda p: p.label_audio == "same",
            )

    def test_all_negative_raises(self):
        with pytest.raises(DegenerateLabelsError):
            precision_recall_curve(
                [_pair(0, "none"), _pair(1, "none")], scorer,
                lambda p: p.label_audio == "same",
            )

    @given(
        st.lists(
            st.tuples(st.integers(0, 100), st.booleans()), min_size=2, max_size=30
        ).filter(lambda rows: len({y for _, y in rows}) == 2)
    )
    def test_recall_monotone_nonincreasing(self, rows):
        pairs = [_pair(i, "same" if y else "none") for i, (_, y) in enumerate(rows)]
        scores = {f"a{i}": s for i, (s, _) in enumerate(rows)}
        curve = precision_recall_curve(pairs, lambda p: scores[p.post_a],
                                       lambda p: p.label_audio == "same")
        recalls = [c.recall for c in curve]
        assert recalls == sorted(recalls, reverse=True)
        assert all(0 <= c.precision <= 1 and 0 <= c.recall <= 1 for c in curve)


class TestSelectThreshold:
    def test_first_perfect_picks_smallest_perfect(self):
        curve = precision_recall_curve(FOUR, scorer, lambda p: p.label_audio == "same")
        assert select_threshold(curve, FIRST_PERFECT) == 80

    def test_no_perfect_point_raises(self):
        curve = [CurvePoint(10, 0.9, 1.0), CurvePoint(20, 1.0, 0.8)]
        with pytest.raises(NoPerfectPointError):
            select_threshold(curve, FIRST_PERFECT)

    def test_max_f1_agrees_on_clean_fixture(self):
        curve = precision_recall_curve(FOUR, scorer, lambda p: p.label_audio == "same")
        assert select_threshold(curve, MAX_F1) == 80

    def test_max_f1_tie_picks_smallest(self):
        curve = [CurvePoint(10, 0.8, 1.0), CurvePoint(20, 1.0, 0.8)]
        # f1(10) = 8/9, f1(20) = 8/9: tie -> 10
        assert select_threshold(curve, MAX_F1) == 10

    def test_empty_curve_rejected(self):
        with pytest.raises(ValueError):
            select_threshold([], FIRST_PERFECT)

    def test_unknown_policy_rejected(self):
        with pytest.raises(ValueError):
            select_threshold([CurvePoint(10, 1.0, 1.0)], "bogus")


class TestMidpoint:
    def test_derived_from_published_thresholds(self):
        assert derive_midpoint(88, 68) == 78.0

    def test_is_the_arithmetic_mean(self):
        assert derive_midpoint(90, 70) == 80.0
        assert derive_midpoint(85, 70) == 77.5


class TestParseLabelsCsv:
    def test_round_trip(self):
        text = (
            "post_a,post_b,visual,audio,message\n"
            "p1,p2,true,same,false\n"
            "p3,p4,0,partial,1\n"
            "p5,p6,no,none,yes\n"
        )
        pairs = parse_labels_csv(text)
        assert pairs[0] == LabeledPair("p1", "p2", True, "same", False)
        assert pairs[1] == LabeledPair("p3", "p4", False, "partial", True)
        assert pairs[2].label_message is True

    def test_wrong_headers_rejected(self):
        with pytest.raises(ValueError):
            parse_labels_csv("a,b,c\n1,2,3\n")

    def test_bad_audio_label_rejected(self):
        with pytest.raises(ValueError):
            parse_labels_csv("post_a,post_b,visual,audio,message\np1,p2,1,maybe,0\n")

    def test_self_pair_rejected(self):
        with pytest.raises(ValueError):
            LabeledPair("p1", "p1", True, "same", True)


class TestTuneAudioThresholds:
    def test_end_to_end(self):
        pairs = [
            _pair(0, "none"),
            _pair(1, "none"),
            _pair(2, "partial"),
            _pair(3, "same"),
            _pair(4, "same"),
        ]
        exact_scores = {"a0": 20, "a1": 40, "a2": 50, "a3": 88, "a4": 95}
        partial_scores = {"a0": 30, "a1": 50, "a2": 68, "a3": 90, "a4": 99}
        result = tune_audio_thresholds(
            pairs,
            lambda p: exact_scores[p.post_a],
            lambda p: partial_scores[p.post_a],
        )
        assert result.exact_threshold == 88
        assert result.partial_threshold == 68
        assert result.midpoint == 78.0
        assert result.exact_curve[0].threshold == 20
