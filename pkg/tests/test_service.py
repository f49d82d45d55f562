import random

import pytest
from fastapi.testclient import TestClient

from coactnet.layers import build_all_layers
from coactnet.model import LayerKind
from coactnet.service import ServiceState, create_app, load_state
from coactnet.synthgen import (
    ClusterSpec,
    inject_coordinated_cluster,
    make_background_posts,
    make_base_post,
)


def _posts():
    rng = random.Random(21)
    posts = make_background_posts(30, rng)
    for c in range(2):
        template = make_base_post(rng, 800 + c, 1_700_000_000)
        spec = ClusterSpec(
            n_users=10 + c, template=template,
            active_window=(1_700_000_000, 1_700_050_000),
        )
        posts, _ = inject_coordinated_cluster(posts, spec, rng, cluster_id=f"c{c}")
    return posts


@pytest.fixture(scope="module")
def client():
    posts = _posts()
    layers = build_all_layers(
        posts,
        kinds=[LayerKind.VIDEO_DESCRIPTION, LayerKind.MUSIC_ID, LayerKind.HASHTAG_SEQUENCE],
    )
    usernames = {p.user_id: p.username for p in posts}
    state = ServiceState(
        summary={"post_count": len(posts)}, layers=layers, usernames=usernames
    )
    return TestClient(create_app(state))


def _make_snapshot(client, kind="video_description", variant="frequency", value=2):
    resp = client.post(f"/layers/{kind}/filter", json={"variant": variant, "value": value})
    assert resp.status_code == 200, resp.text
    return resp.json()


class TestSummaryAndLayers:
    def test_summary(self, client):
        # 30 background plus two clusters of 10 and 11 accounts, 2 posts each
        assert client.get("/dataset/summary").json() == {"post_count": 72}

    def test_layers_listing(self, client):
        rows = client.get("/layers").json()
        assert [r["kind"] for r in rows] == ["hashtag_sequence", "music_id", "video_description"]
        vd = next(r for r in rows if r["kind"] == "video_description")
        assert vd["stats"]["node_count"] == 21
        assert vd["default_filter"]["label"] == "frequency_10"
        assert vd["evidence_complete"] is True

    def test_unknown_layer_404(self, client):
        assert client.get("/layers/nope/sweep").status_code == 404
        assert client.post("/layers/url/filter", json={"variant": "none"}).status_code == 404


class TestFilterEndpoint:
    def test_returns_stats(self, client):
        payload = _make_snapshot(client)
        assert payload["kind"] == "video_description"
        assert payload["filter"]["label"] == "frequency_2"
        assert payload["stats"]["node_count"] == 21

    def test_idempotent_snapshot_ids(self, client):
        a = _make_snapshot(client)
        b = _make_snapshot(client)
        assert a["snapshot_id"] == b["snapshot_id"]
        c = _make_snapshot(client, value=10)
        assert c["snapshot_id"] != a["snapshot_id"]

    def test_invalid_spec_422(self, client):
        resp = client.post(
            "/layers/video_description/filter", json={"variant": "frequency", "value": 1}
        )
        assert resp.status_code == 422
        resp = client.post("/layers/video_description/filter", json={"variant": "bogus"})
        assert resp.status_code == 422


class TestSweepEndpoint:
    def test_six_rows(self, client):
        payload = client.get("/layers/video_description/sweep").json()
        assert len(payload["rows"]) == 6
        assert payload["rows"][0]["filter"] == "frequency_2"
        assert len(payload["node_jaccard"]) == 15

    def test_truncated_layer_409(self):
        posts = _posts()
        layers = build_all_layers(posts, kinds=[LayerKind.MUSIC_ID], group_cap=2)
        state = ServiceState(summary={}, layers=layers)
        local = TestClient(create_app(state))
        assert local.get("/layers/music_id/sweep").status_code == 409
        resp = local.post(
            "/layers/music_id/filter", json={"variant": "temporal", "value": 60}
        )
        assert resp.status_code == 409


class TestComponents:
    def test_listing_and_pagination(self, client):
        snap = _make_snapshot(client)["snapshot_id"]
        all_comps = client.get(f"/snapshots/{snap}/components").json()
        assert all_comps["total"] == 2
        assert [c["size"] for c in all_comps["components"]] == [11, 10]
        page = client.get(
            f"/snapshots/{snap}/components", params={"offset": 1, "limit": 1}
        ).json()
        assert page["components"][0]["index"] == 1
        assert page["components"][0]["size"] == 10
        filtered = client.get(
            f"/snapshots/{snap}/components", params={"min_size": 11}
        ).json()
        assert filtered["total"] == 1

    def test_detail_with_evidence_pagination(self, client):
        snap = _make_snapshot(client)["snapshot_id"]
        detail = client.get(f"/snapshots/{snap}/components/0").json()
        assert detail["size"] == 11
        assert len(detail["edges"]) == 55  # complete graph on 11 accounts
        assert detail["evidence_total"] == 220  # 4 post pairs per edge
        assert len(detail["evidence"]) == 200  # capped page
        page2 = client.get(
            f"/snapshots/{snap}/components/0",
            params={"evidence_offset": 200, "evidence_limit": 50},
        ).json()
        assert len(page2["evidence"]) == 20

    def test_unknown_snapshot_404(self, client):
        assert client.get("/snapshots/deadbeef/components").status_code == 404

    def test_out_of_range_component_404(self, client):
        snap = _make_snapshot(client)["snapshot_id"]
        assert client.get(f"/snapshots/{snap}/components/99").status_code == 404

    def test_usernames_resolved(self, client):
        snap = _make_snapshot(client)["snapshot_id"]
        detail = client.get(f"/snapshots/{snap}/components/0").json()
        assert all(name[0].isalpha() for name in detail["usernames"])
        assert detail["usernames"] != detail["members"]


class TestPseudonymize:
    def test_masks_usernames(self):
        posts = _posts()
        layers = build_all_layers(posts, kinds=[LayerKind.VIDEO_DESCRIPTION])
        usernames = {p.user_id: p.username for p in posts}
        state = ServiceState(
            summary={}, layers=layers, usernames=usernames, pseudonymize=True
        )
        local = TestClient(create_app(state))
        snap = _make_snapshot(local)["snapshot_id"]
        detail = local.get(f"/snapshots/{snap}/components/0").json()
        assert all(name.startswith("account_") for name in detail["usernames"])
        # stable mapping per account
        again = local.get(f"/snapshots/{snap}/components/0").json()
        assert again["usernames"] == detail["usernames"]


class TestOverlap:
    def test_rows_for_two_snapshots(self, client):
        a = _make_snapshot(client, kind="video_description")["snapshot_id"]
        b = _make_snapshot(client, kind="music_id", variant="none", value=None)["snapshot_id"]
        payload = client.get("/overlap", params={"snapshots": f"{a},{b}"}).json()
        assert set(payload["snapshots"]) == {"video_description", "music_id"}
        assert len(payload["rows"]) == 3

    def test_needs_two_distinct_layers(self, client):
        a = _make_snapshot(client)["snapshot_id"]
        assert client.get("/overlap", params={"snapshots": a}).status_code == 422
        b = _make_snapshot(client, value=10)["snapshot_id"]
        assert (
            client.get("/overlap", params={"snapshots": f"{a},{b}"}).status_code == 422
        )


class TestLoadState:
    def test_from_build_dir(self, tmp_path):
        import os

        from coactnet import export
        from coactnet.ingest import serialize_records
        from coactnet.pipeline import PipelineConfig, run_pipeline

        posts = _posts()
        corpus = tmp_path / "corpus.jsonl"
        corpus.write_text(serialize_records(posts))
        out = str(tmp_path / "out")
        run_pipeline(
            PipelineConfig(
                corpus=str(corpus),
                kinds=(LayerKind.VIDEO_DESCRIPTION, LayerKind.MUSIC_ID),
                figures=False,
            ),
            out,
        )
        state = load_state(out)
        assert set(state.layers) == {LayerKind.VIDEO_DESCRIPTION, LayerKind.MUSIC_ID}
        assert state.summary["post_count"] == len(posts)
        assert state.usernames
        local = TestClient(create_app(state))
        assert local.get("/layers").status_code == 200

    def test_empty_dir_raises(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            load_state(str(tmp_path))
