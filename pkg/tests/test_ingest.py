import json

import pytest
from hypothesis import given, strategies as st

from coactnet.ingest import (
    extract_hashtags,
    extract_urls,
    parse_dataset,
    record_to_json,
    serialize_records,
)
from coactnet.model import CorpusError, PostRecord


def _line(**kwargs):
    obj = {
        "post_id": "p1",
        "user_id": "u1",
        "username": "alice",
        "created_at": 1700000000,
        "description": "",
        "music_id": None,
        "voice_to_text": None,
        "frame_hashes": None,
        "frames_dir": None,
    }
    obj.update(kwargs)
    return json.dumps(obj)


class TestExtractHashtags:
    def test_basic_extraction(self):
        assert extract_hashtags("Wahl! #afd #cdu") == ("afd", "cdu")

    def test_casefold_and_unicode(self):
        assert extract_hashtags("Vote! #SPD #Grüne") == ("spd", "grüne")

    def test_no_tags(self):
        assert extract_hashtags("no tags here") == ()

    def test_duplicates_preserved_in_order(self):
        assert extract_hashtags("#a #b #a") == ("a", "b", "a")

    def test_empty_token_dropped(self):
        assert extract_hashtags("lone # sign and #x") == ("x",)

    @given(st.text(max_size=80))
    def test_tokens_always_present_in_description(self, text):
        for tag in extract_hashtags(text):
            assert tag in text.casefold()


class TestExtractUrls:
    def test_trailing_dot_stripped(self):
        assert extract_urls("see https://ex.org/a?x=1.") == ("https://ex.org/a?x=1",)

    def test_full_url_identity(self):
        assert extract_urls("http://a.de and http://a.de/b") == ("http://a.de", "http://a.de/b")

    def test_no_links(self):
        assert extract_urls("no links") == ()

    def test_multiple_trailing_punctuation(self):
        assert extract_urls("(https://x.org/p)!?") == ("https://x.org/p",)


class TestParseDataset:
    def test_derives_hashtags(self):
        records, summary, _ = parse_dataset(_line(description="Wahl! #afd #cdu"))
        assert records[0].hashtags == ("afd", "cdu")
        assert summary.post_count == 1

    def test_empty_file(self):
        records, summary, _ = parse_dataset("")
        assert records == []
        assert summary.post_count == summary.user_count == 0
        assert summary.time_range == (0, 0)

    def test_duplicate_post_id_last_wins(self):
        text = _line(description="first") + "\n" + _line(description="second") + "\n"
        records, summary, report = parse_dataset(text)
        assert len(records) == 1
        assert records[0].description == "second"
        assert report.duplicates == 1
        assert summary.duplicate_post_ids == 1

    def test_malformed_line_collected(self):
        text = _line() + "\nnot json\n" + _line(post_id="p2") + "\n"
        records, summary, report = parse_dataset(text)
        assert len(records) == 2
        assert len(report.errors) == 1
        assert report.errors[0][0] == 2

    def test_mostly_malformed_is_fatal(self):
        text = _line() + "\nbad\nbad\nbad\n"
        with pytest.raises(CorpusError):
            parse_dataset(text)

    def test_frame_hashes_decimal_strings(self):
        records, _, _ = parse_dataset(_line(frame_hashes=[str(2**63 + 5), "7"]))
        assert records[0].frame_hashes == (2**63 + 5, 7)

    def test_frame_hash_out_of_range_is_malformed(self):
        _, _, report = parse_dataset(_line(frame_hashes=[str(2**64)]) + "\n" + _line(post_id="p2"))
        assert len(report.errors) == 1

    def test_unknown_fields_ignored(self):
        obj = json.loads(_line())
        obj["some_future_field"] = {"x": 1}
        records, _, _ = parse_dataset(json.dumps(obj))
        assert records[0].post_id == "p1"

    def test_summary_counts(self):
        text = "\n".join(
            [
                _line(post_id="p1", user_id="u1", voice_to_text="hallo"),
                _line(post_id="p2", user_id="u1", music_id="m1"),
                _line(post_id="p3", user_id="u2", frame_hashes=["5"], created_at=1700000100),
            ]
        )
        _, summary, _ = parse_dataset(text)
        assert summary.post_count == 3
        assert summary.user_count == 2
        assert summary.posts_with_transcript == 1
        assert summary.posts_with_music_id == 1
        assert summary.posts_with_frames == 1
        assert summary.time_range == (1700000000, 1700000100)


posts_strategy = st.builds(
    PostRecord,
    post_id=st.uuids().map(str),
    user_id=st.text(st.characters(min_codepoint=97, max_codepoint=122), min_size=1, max_size=8),
    username=st.text(max_size=12),
    created_at=st.integers(min_value=1, max_value=2**31),
    description=st.text(max_size=60),
    music_id=st.none() | st.text(min_size=1, max_size=10),
    transcript=st.none() | st.text(max_size=60),
    frame_hashes=st.none() | st.lists(st.integers(0, 2**64 - 1), min_size=1, max_size=4).map(tuple),
)


@given(st.lists(posts_strategy, max_size=10, unique_by=lambda p: p.post_id))
def test_round_trip_parse_serialize(posts):
    # hashtags/urls are derived at ingest, so normalize the originals first
    normalized, _, _ = parse_dataset(serialize_records(posts))
    again, _, _ = parse_dataset(serialize_records(normalized))
    assert again == normalized


def test_record_to_json_uses_decimal_strings():
    post = PostRecord(
        post_id="p", user_id="u", username="n", created_at=1, frame_hashes=(2**64 - 1,)
    )
    assert record_to_json(post)["frame_hashes"] == [str(2**64 - 1)]
