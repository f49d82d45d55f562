import json
import os

import pytest
from hypothesis import given, settings, strategies as st

from coactnet.export import (
    canonical_json,
    dump_layer,
    edges_from_csv,
    edges_to_csv,
    layer_from_graphml,
    layer_from_json,
    layer_to_graphml,
    layer_to_json,
    load_layer,
    overlap_to_csv,
    write_atomic,
)
from coactnet.model import CoActionPair, Layer, LayerKind, UserEdge, edge_from_pairs


def _edge(ua, ub, n=1):
    pairs = tuple(
        CoActionPair(LayerKind.MUSIC_ID, f"{ua}{ub}a{i}", f"{ua}{ub}b{i}", ua, ub,
                     score=100, delta_t=7 * i)
        for i in range(n)
    )
    return edge_from_pairs(pairs)


@pytest.fixture
def layer():
    return Layer(
        kind=LayerKind.MUSIC_ID,
        edges=tuple(sorted((_edge("u1", "u2", 3), _edge("u2", "u3")), key=lambda e: e.key)),
    )


class TestJsonRoundTrip:
    def test_layer_round_trips(self, layer):
        again, usernames = layer_from_json(layer_to_json(layer, {"u1": "anna12"}))
        assert again == layer
        assert usernames == {"u1": "anna12"}

    def test_file_round_trip(self, layer, tmp_path):
        path = str(tmp_path / "layer.json")
        dump_layer(layer, path, {"u2": "mia7"})
        again, usernames = load_layer(path)
        assert again == layer
        assert usernames == {"u2": "mia7"}

    def test_canonical_json_is_stable(self, layer):
        a = canonical_json(layer_to_json(layer))
        b = canonical_json(layer_to_json(layer))
        assert a == b
        assert a.endswith("\n")
        assert json.loads(a)["kind"] == "music_id"

    def test_evidence_complete_preserved(self):
        truncated = Layer(LayerKind.MUSIC_ID, (), evidence_complete=False)
        again, _ = layer_from_json(layer_to_json(truncated))
        assert again.evidence_complete is False


edge_list_strategy = st.lists(
    st.tuples(
        st.sampled_from(["u1", "u2", "u3", "u4", "u5"]),
        st.sampled_from(["u1", "u2", "u3", "u4", "u5"]),
        st.integers(1, 4),
    ),
    max_size=8,
)


def _layer_from_rows(rows):
    seen = {}
    for ua, ub, n in rows:
        if ua == ub:
            continue
        key = tuple(sorted((ua, ub)))
        seen[key] = _edge(key[0], key[1], n)
    return Layer(
        kind=LayerKind.MUSIC_ID,
        edges=tuple(sorted(seen.values(), key=lambda e: e.key)),
    )


@given(edge_list_strategy)
@settings(max_examples=60)
def test_json_round_trip_property(rows):
    layer = _layer_from_rows(rows)
    again, _ = layer_from_json(layer_to_json(layer))
    assert again == layer


class TestCsv:
    def test_fixed_headers_and_rows(self, layer):
        text = edges_to_csv(layer)
        lines = text.strip().split("\n")
        assert lines[0] == "user_a,user_b,weight,min_delta_t"
        assert lines[1] == "u1,u2,3,0"
        assert lines[2] == "u2,u3,1,0"

    def test_round_trips_structure(self, layer):
        again = edges_from_csv(edges_to_csv(layer), LayerKind.MUSIC_ID)
        assert [(e.key, e.weight, e.min_delta_t) for e in again.edges] == [
            (e.key, e.weight, e.min_delta_t) for e in layer.edges
        ]
        assert again.evidence_complete is False  # evidence is not in the format

    def test_wrong_headers_rejected(self):
        with pytest.raises(ValueError):
            edges_from_csv("a,b\n1,2\n", LayerKind.MUSIC_ID)


class TestGraphml:
    def test_round_trips_structure(self, layer):
        again = layer_from_graphml(layer_to_graphml(layer))
        assert again.kind is layer.kind
        assert [(e.key, e.weight, e.min_delta_t) for e in again.edges] == [
            (e.key, e.weight, e.min_delta_t) for e in layer.edges
        ]

    def test_usernames_embedded(self, layer):
        text = layer_to_graphml(layer, {"u1": "clara88"})
        assert "clara88" in text
        assert 'attr.name="username"' in text

    def test_no_graph_element_rejected(self):
        with pytest.raises(ValueError):
            layer_from_graphml('<?xml version="1.0"?><graphml xmlns="http://graphml.graphdrawing.org/xmlns"/>')

    @given(edge_list_strategy)
    @settings(max_examples=40)
    def test_round_trip_property(self, rows):
        layer = _layer_from_rows(rows)
        again = layer_from_graphml(layer_to_graphml(layer))
        assert again.edge_keys == layer.edge_keys
        assert {e.key: e.weight for e in again.edges} == {
            e.key: e.weight for e in layer.edges
        }


class TestOverlapCsv:
    def test_rows(self):
        text = overlap_to_csv(
            [{"source_layer": "url", "target_layer": "music_id",
              "node_overlap": 3, "edge_overlap": 1}]
        )
        assert text == (
            "source_layer,target_layer,node_overlap,edge_overlap\n"
            "url,music_id,3,1\n"
        )


class TestWriteAtomic:
    def test_creates_parent_dirs(self, tmp_path):
        path = str(tmp_path / "a" / "b" / "file.txt")
        write_atomic(path, "inhalt")
        with open(path) as fh:
            assert fh.read() == "inhalt"

    def test_no_temp_files_left_behind(self, tmp_path):
        path = str(tmp_path / "out.txt")
        write_atomic(path, "x")
        write_atomic(path, "y")
        assert os.listdir(tmp_path) == ["out.txt"]
        with open(path) as fh:
            assert fh.read() == "y"
