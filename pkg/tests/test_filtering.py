import pytest
from hypothesis import given, settings, strategies as st

from coactnet.filtering import (
    apply_filter,
    apply_frequency_filter,
    apply_temporal_filter,
    average_edge_weight,
    generate_filter_candidates,
    is_viable,
    prune_candidates,
    snapshot_id_for,
    sweep_report,
)
from coactnet.model import (
    CoActionPair,
    EvidenceUnavailableError,
    FilterSpec,
    Layer,
    LayerKind,
    UserEdge,
    edge_from_pairs,
)


def _edge(ua, ub, dts):
    pairs = tuple(
        CoActionPair(LayerKind.URL, f"{ua}{ub}a{i}", f"{ua}{ub}b{i}", ua, ub,
                     score=100, delta_t=dt)
        for i, dt in enumerate(dts)
    )
    return edge_from_pairs(pairs)


def _layer(edge_spec, kind=LayerKind.URL, evidence_complete=True):
    edges = tuple(sorted((_edge(ua, ub, dts) for ua, ub, dts in edge_spec), key=lambda e: e.key))
    return Layer(kind=kind, edges=edges, evidence_complete=evidence_complete)


@pytest.fixture
def sample_layer():
    # weights 1, 4, 8 -> mean 13/3
    return _layer(
        [
            ("a", "b", [30]),
            ("b", "c", [10, 70, 130, 400]),
            ("c", "d", [5, 61, 120, 121, 200, 301, 500, 900]),
        ]
    )


class TestFrequencyFilter:
    def test_threshold_is_inclusive(self, sample_layer):
        snap = apply_frequency_filter(sample_layer, FilterSpec.frequency(4))
        assert {e.key for e in snap.layer.edges} == {("b", "c"), ("c", "d")}

    def test_isolated_nodes_drop_out(self, sample_layer):
        snap = apply_frequency_filter(sample_layer, FilterSpec.frequency(2))
        assert snap.layer.nodes == {"b", "c", "d"}

    def test_above_average_uses_real_valued_mean(self, sample_layer):
        assert average_edge_weight(sample_layer) == pytest.approx(13 / 3)
        snap = apply_frequency_filter(sample_layer, FilterSpec.above_average())
        # 4 >= 13/3 is false, so only the weight-8 edge survives
        assert {e.key for e in snap.layer.edges} == {("c", "d")}

    def test_mean_boundary_retained(self):
        layer = _layer([("a", "b", [1, 2]), ("b", "c", [3, 4])])  # mean exactly 2
        snap = apply_frequency_filter(layer, FilterSpec.above_average())
        assert len(snap.layer.edges) == 2

    def test_empty_layer(self):
        layer = Layer(LayerKind.URL, ())
        assert average_edge_weight(layer) == 0.0
        snap = apply_frequency_filter(layer, FilterSpec.frequency(10))
        assert snap.layer.edges == ()


class TestTemporalFilter:
    def test_window_inclusive_and_weights_recomputed(self, sample_layer):
        snap = apply_temporal_filter(sample_layer, FilterSpec.temporal(120))
        by_key = {e.key: e for e in snap.layer.edges}
        assert by_key[("a", "b")].weight == 1
        assert by_key[("b", "c")].weight == 2  # 10, 70
        assert by_key[("c", "d")].weight == 3  # 5, 61, 120
        assert by_key[("c", "d")].min_delta_t == 5

    def test_edges_with_no_surviving_evidence_dropped(self, sample_layer):
        snap = apply_temporal_filter(sample_layer, FilterSpec.temporal(60))
        assert {e.key for e in snap.layer.edges} == {("a", "b"), ("b", "c"), ("c", "d")}
        snap = apply_temporal_filter(_layer([("a", "b", [500])]), FilterSpec.temporal(60))
        assert snap.layer.edges == ()

    def test_require_all_within_keeps_full_weight(self, sample_layer):
        snap = apply_temporal_filter(
            sample_layer, FilterSpec.temporal(120), require_all_within=True
        )
        by_key = {e.key: e for e in snap.layer.edges}
        assert by_key[("c", "d")].weight == 8

    def test_truncated_evidence_raises(self):
        layer = _layer([("a", "b", [30])], evidence_complete=False)
        with pytest.raises(EvidenceUnavailableError):
            apply_temporal_filter(layer, FilterSpec.temporal(60))

    def test_frequency_still_works_on_truncated_evidence(self):
        layer = _layer([("a", "b", [30])], evidence_complete=False)
        snap = apply_frequency_filter(layer, FilterSpec.frequency(2))
        assert snap.layer.edges == ()


class TestSnapshotIds:
    def test_content_addressed(self, sample_layer):
        spec = FilterSpec.frequency(2)
        assert snapshot_id_for(sample_layer, spec) == snapshot_id_for(sample_layer, spec)
        assert snapshot_id_for(sample_layer, spec) != snapshot_id_for(
            sample_layer, FilterSpec.frequency(10)
        )
        other = _layer([("a", "b", [30])])
        assert snapshot_id_for(sample_layer, spec) != snapshot_id_for(other, spec)

    def test_snapshot_carries_matching_id(self, sample_layer):
        spec = FilterSpec.temporal(300)
        snap = apply_filter(sample_layer, spec)
        assert snap.snapshot_id == snapshot_id_for(sample_layer, spec)

    def test_none_filter_is_identity(self, sample_layer):
        snap = apply_filter(sample_layer, FilterSpec.none())
        assert snap.layer.edges == sample_layer.edges


edge_strategy = st.builds(
    lambda ua, ub, dts: (ua, ub, dts),
    st.sampled_from("abcdefgh"),
    st.sampled_from("abcdefgh"),
    st.lists(st.integers(0, 600), min_size=1, max_size=6),
)


@st.composite
def layer_strategy(draw):
    specs = draw(st.lists(edge_strategy, max_size=12))
    seen = {}
    for ua, ub, dts in specs:
        if ua == ub:
            continue
        key = tuple(sorted((ua, ub)))
        seen[key] = (key[0], key[1], dts)
    return _layer(list(seen.values()))


class TestFilterProperties:
    @given(layer_strategy(), st.integers(2, 5), st.integers(6, 12))
    @settings(max_examples=100)
    def test_frequency_monotone_in_threshold(self, layer, lo, hi):
        small = apply_frequency_filter(layer, FilterSpec.frequency(hi)).layer
        large = apply_frequency_filter(layer, FilterSpec.frequency(lo)).layer
        assert small.edge_keys <= large.edge_keys
        assert small.nodes <= large.nodes

    @given(layer_strategy(), st.integers(1, 300), st.integers(301, 700))
    @settings(max_examples=100)
    def test_temporal_monotone_in_window(self, layer, narrow, wide):
        small = apply_temporal_filter(layer, FilterSpec.temporal(narrow)).layer
        large = apply_temporal_filter(layer, FilterSpec.temporal(wide)).layer
        assert small.edge_keys <= large.edge_keys
        small_w = {e.key: e.weight for e in small.edges}
        large_w = {e.key: e.weight for e in large.edges}
        for key, w in small_w.items():
            assert w <= large_w[key]

    @given(layer_strategy())
    @settings(max_examples=100)
    def test_filtered_edges_subset_of_base(self, layer):
        for snap in generate_filter_candidates(layer):
            assert snap.layer.edge_keys <= layer.edge_keys
            assert snap.layer.nodes <= layer.nodes
            for e in snap.layer.edges:
                assert e.weight >= 1

    @given(layer_strategy())
    @settings(max_examples=60)
    def test_candidate_order_is_canonical(self, layer):
        labels = [s.filter_spec.label for s in generate_filter_candidates(layer)]
        assert labels == [
            "frequency_2",
            "frequency_10",
            "frequency_above_average",
            "temporal_60",
            "temporal_120",
            "temporal_300",
        ]


def _chain_layer(n):
    """Path on n nodes: one component of size n, n-1 edges."""
    return _layer([(chr(97 + i), chr(98 + i), [10]) for i in range(n - 1)])


class TestPruning:
    def test_component_threshold_is_strict(self):
        snap8 = apply_filter(_chain_layer(8), FilterSpec.none())
        snap9 = apply_filter(_chain_layer(9), FilterSpec.none())
        assert not is_viable(snap8)
        assert is_viable(snap9)

    def test_requires_at_least_one_edge(self):
        snap = apply_filter(Layer(LayerKind.URL, ()), FilterSpec.none())
        assert not is_viable(snap)

    def test_prune_keeps_only_viable(self):
        candidates = generate_filter_candidates(_chain_layer(9))
        kept = prune_candidates(candidates)
        assert all(is_viable(s) for s in kept)
        assert any(s.filter_spec.label == "temporal_60" for s in kept)
        assert all(s.filter_spec.label != "frequency_10" for s in kept)

    def test_custom_thresholds(self):
        snap = apply_filter(_chain_layer(4), FilterSpec.none())
        assert is_viable(snap, min_component_size=3)
        assert not is_viable(snap, min_component_size=4)


class TestSweepReport:
    def test_rows_and_jaccard(self, sample_layer):
        report = sweep_report(sample_layer)
        assert report.kind is LayerKind.URL
        assert len(report.rows) == 6
        by_label = {r.spec.label: r for r in report.rows}
        assert by_label["frequency_2"].stats.edge_count == 2
        assert by_label["frequency_2"].top_component_sizes == (3,)
        assert not by_label["frequency_2"].viable  # component of 3 <= 8
        # frequency_2 keeps {b,c,d}; frequency_10 keeps nothing
        assert report.node_jaccard[("frequency_10", "frequency_2")] == 0.0
        # temporal_300 and temporal_120 both keep all four users
        assert report.node_jaccard[("temporal_120", "temporal_300")] == 1.0
        assert len(report.node_jaccard) == 15

    def test_sweep_on_truncated_layer_raises(self):
        layer = _layer([("a", "b", [30])], evidence_complete=False)
        with pytest.raises(EvidenceUnavailableError):
            sweep_report(layer)
