import collections
import json

import pytest

from semlock import corpus, model
from semlock.errors import InvalidProfile, IoFailure, MalformedLine
from semlock.model import Side


def lines_of(*objs):
    return [json.dumps(o) for o in objs]


class TestLoadPairs:
    def test_valid_records(self):
        records, rejections = corpus.load_corpus_lines(lines_of(
            {"pid": "p1", "first": "cup", "second": "person", "session": 1},
            {"pid": "p1", "first": "cup", "second": "board", "session": 1},
            {"pid": "p2", "first": "leaf", "second": "moon", "session": 2},
        ), "pairs")
        assert len(records) == 3
        assert rejections == []

    def test_rejects_self_pair_and_unknown(self):
        records, rejections = corpus.load_corpus_lines(lines_of(
            {"pid": "p1", "first": "cup", "second": "cup", "session": 1},
            {"pid": "p1", "first": "cup", "second": "unicorn", "session": 1},
        ), "pairs")
        assert records == []
        assert [r.line for r in rejections] == [1, 2]


class TestLoadPatterns:
    def test_repeat_node_rejected(self):
        _, rejections = corpus.load_corpus_lines(lines_of(
            {"pid": "p1", "nodes": [1, 1, 2]},
        ), "patterns")
        assert len(rejections) == 1
        assert "repeats" in rejections[0].reason

    def test_short_pattern_rejected_with_minimum(self):
        _, rejections = corpus.load_corpus_lines(lines_of(
            {"pid": "p1", "nodes": [1, 2]},
        ), "patterns")
        assert len(rejections) == 1
        assert "3" in rejections[0].reason

    def test_node_range(self):
        _, rejections = corpus.load_corpus_lines(lines_of(
            {"pid": "p1", "nodes": [0, 1, 2]},
            {"pid": "p1", "nodes": [7, 8, 10]},
        ), "patterns")
        assert len(rejections) == 2


class TestLoadEvents:
    def test_ordering_enforced(self):
        records, rejections = corpus.load_corpus_lines(lines_of(
            {"pid": "p", "tech": "PIN", "session": 1, "ready": 0, "touch": 500, "done": 1300, "ok": True},
            {"pid": "p", "tech": "PIN", "session": 1, "ready": 600, "touch": 500, "done": 1300, "ok": True},
            {"pid": "p", "tech": "PIN", "session": 1, "ready": 0, "touch": 900, "done": 700, "ok": False},
        ), "events")
        assert len(records) == 1
        assert [r.line for r in rejections] == [2, 3]

    def test_technique_whitelist(self):
        _, rejections = corpus.load_corpus_lines(lines_of(
            {"pid": "p", "tech": "VOICE", "session": 1, "ready": 0, "touch": 1, "done": 2, "ok": True},
        ), "events")
        assert len(rejections) == 1


class TestMalformed:
    def test_lenient_reports_line(self):
        records, rejections = corpus.load_corpus_lines(
            ['{"pid": "p1", "nodes": [1, 2, 3]}', "{broken"], "patterns")
        assert len(records) == 1
        assert rejections[0].line == 2
        assert "JSON" in rejections[0].reason

    def test_strict_raises(self):
        with pytest.raises(MalformedLine):
            corpus.load_corpus_lines(["{broken"], "patterns", strict=True)

    def test_line_numbers_strictly_increasing(self):
        bad = [json.dumps({"pid": "p", "nodes": [1, 1, 2]})] * 5
        _, rejections = corpus.load_corpus_lines(bad, "patterns")
        numbers = [r.line for r in rejections]
        assert numbers == sorted(set(numbers)) == [1, 2, 3, 4, 5]

    def test_missing_file(self, tmp_path):
        with pytest.raises(IoFailure):
            corpus.load_corpus(tmp_path / "nope.jsonl", "pairs")


class TestRoundTrip:
    @pytest.mark.parametrize("kind,maker", [
        ("pairs", lambda: corpus.synthesize_pairs(3, 50)),
        ("passwords", lambda: corpus.synthesize_corpus(3, corpus.uniform_profile(50))),
        ("patterns", lambda: corpus.synthesize_patterns(3, 50)),
    ])
    def test_serialize_load_identity(self, kind, maker):
        records = maker()
        text = corpus.dump_corpus(records)
        loaded, rejections = corpus.load_corpus_lines(text.splitlines(), kind)
        assert rejections == []
        assert loaded == records
        assert corpus.dump_corpus(loaded) == text


class TestSynthesis:
    def test_deterministic(self):
        a = corpus.synthesize_corpus(42, corpus.uniform_profile(1000))
        b = corpus.synthesize_corpus(42, corpus.uniform_profile(1000))
        assert a == b
        c = corpus.synthesize_corpus(43, corpus.uniform_profile(1000))
        assert a != c

    def test_uniform_icon_frequencies(self):
        records = corpus.synthesize_corpus(9, corpus.uniform_profile(100_000, moves_per_password=1))
        counts = collections.Counter(r.password.moves[0].moved.id for r in records)
        for icon_id in model.default_grid().icon_ids:
            assert abs(counts[icon_id] / 100_000 - 1 / 6) < 0.02

    def test_biased_profile_tilts_top_right(self):
        records = corpus.synthesize_corpus(7, corpus.biased_profile(20_000))
        sides = collections.Counter(m.side for r in records for m in r.password.moves)
        top_right = sides[Side.TOP] + sides[Side.RIGHT]
        left_bottom = sides[Side.LEFT] + sides[Side.BOTTOM]
        assert top_right > left_bottom

    def test_output_passes_validation(self):
        for seed in range(5):
            records = corpus.synthesize_corpus(seed, corpus.biased_profile(200))
            _, rejections = corpus.load_corpus_lines(
                corpus.dump_corpus(records).splitlines(), "passwords")
            assert rejections == []

    def test_invalid_profile(self):
        profile = corpus.SynthProfile(
            count=10,
            icon_weights={i: 0.0 for i in model.default_grid().icon_ids},
            side_weights={s: 1.0 for s in Side},
        )
        with pytest.raises(InvalidProfile):
            corpus.synthesize_corpus(1, profile)
        profile = corpus.SynthProfile(
            count=10,
            icon_weights={i: 1.0 for i in model.default_grid().icon_ids},
            side_weights={s: float("inf") for s in Side},
        )
        with pytest.raises(InvalidProfile):
            corpus.synthesize_corpus(1, profile)

    def test_pattern_start_bias(self):
        weights = {1: 0.437, **{n: (1 - 0.437) / 8 for n in range(2, 10)}}
        records = corpus.synthesize_patterns(11, 10_000, start_weights=weights)
        starts = collections.Counter(r.nodes[0] for r in records)
        assert abs(starts[1] / 10_000 - 0.437) < 0.02
        _, rejections = corpus.load_corpus_lines(
            corpus.dump_corpus(records).splitlines(), "patterns")
        assert rejections == []

    def test_pairs_validate(self):
        records = corpus.synthesize_pairs(7, 500)
        _, rejections = corpus.load_corpus_lines(
            corpus.dump_corpus(records).splitlines(), "pairs")
        assert rejections == []
