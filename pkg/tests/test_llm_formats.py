import numpy as np
import pytest

from pickseg.errors import (MalformedRange, NoSegmentsFound, OverlapError,
                            SeriesTooLong, UnknownLabel)
from pickseg.llm.formats import (format_segments, parse_segments,
                                 parse_series_table, serialize_series)
from pickseg.resample import VelocitySeries
from pickseg.segmenter import PrimitiveLabel, Segment, SegmentationResult

EXAMPLE_REPLY = "twist (Index 0–62), tilt (Index 63–112), pull (Index 113–170)"


def velocity_series(n, rate=20.0, seed=0):
    rng = np.random.default_rng(seed)
    t = np.arange(n) / rate
    return VelocitySeries.from_arrays(t, rng.normal(size=(n, 6)), rate)


class TestSerializeSeries:
    def test_header_plus_rows(self):
        text = serialize_series(velocity_series(61))
        assert len(text.splitlines()) == 62
        assert text.splitlines()[0] == "index,t,vx,vy,vz,wx,wy,wz"

    def test_single_sample(self):
        s = VelocitySeries.from_arrays([0.0], np.zeros((1, 6)), 20.0)
        assert len(serialize_series(s).splitlines()) == 2

    def test_roundtrip_within_quantization(self):
        s = velocity_series(40, seed=1)
        back = parse_series_table(serialize_series(s))
        assert np.abs(back.v - s.v).max() <= 5e-5
        assert np.abs(back.t - s.t).max() <= 5e-5

    def test_too_long(self):
        with pytest.raises(SeriesTooLong):
            serialize_series(velocity_series(401))


class TestParseSegments:
    def test_reference_reply(self):
        res = parse_segments(EXAMPLE_REPLY)
        assert res.labels() == [PrimitiveLabel.TWIST, PrimitiveLabel.TILT,
                                PrimitiveLabel.PULL]
        assert [(s.start, s.end) for s in res.segments] \
            == [(0, 62), (63, 112), (113, 170)]
        assert res.boundaries() == [63, 113]
        assert res.warnings == ()

    def test_single_segment(self):
        res = parse_segments("pull (Index 0–10)")
        assert res.labels() == [PrimitiveLabel.PULL]

    @pytest.mark.parametrize("sep", ["-", "–", "—", "to"])
    def test_separator_variants(self, sep):
        res = parse_segments(f"pull (Index 3 {sep} 10)")
        assert (res.segments[0].start, res.segments[0].end) == (3, 10)

    def test_case_insensitive_labels(self):
        res = parse_segments("PULL (INDEX 0-10)")
        assert res.labels() == [PrimitiveLabel.PULL]

    def test_surrounding_prose_ignored(self):
        text = ("Sure! Based on the velocity profile the motion decomposes "
                "as: twist (Index 0–62), then pull (Index 63–120). Hope "
                "this helps.")
        assert len(parse_segments(text).segments) == 2

    def test_empty_reply(self):
        with pytest.raises(NoSegmentsFound):
            parse_segments("")

    def test_malformed_range(self):
        with pytest.raises(MalformedRange):
            parse_segments("pull (Index 20–10)")

    def test_unknown_label(self):
        with pytest.raises(UnknownLabel):
            parse_segments("lift (Index 0–10)")

    def test_overlap(self):
        with pytest.raises(OverlapError):
            parse_segments("pull (Index 0–10), twist (Index 5–20)")

    def test_gap_warns_but_parses(self):
        res = parse_segments("pull (Index 0–10), twist (Index 20–30)")
        assert len(res.segments) == 2
        assert res.warnings


class TestFormatSegments:
    def test_canonical_form(self):
        res = SegmentationResult(
            (Segment(PrimitiveLabel.PULL, 0, 10),), 11)
        assert format_segments(res) == "pull (Index 0–10)"

    def test_reference_roundtrip_exact(self):
        res = parse_segments(EXAMPLE_REPLY)
        assert format_segments(res) == EXAMPLE_REPLY

    def test_empty_result(self):
        assert format_segments(SegmentationResult((), 0)) == ""

    def test_parse_format_inverses_random(self):
        rng = np.random.default_rng(2)
        labels = list(PrimitiveLabel)
        for _ in range(200):
            cuts = np.sort(rng.choice(np.arange(1, 200), size=rng.integers(0, 4),
                                      replace=False))
            starts = [0] + list(cuts)
            ends = list(cuts - 1) + [200]
            segs = tuple(
                Segment(labels[rng.integers(5)], int(s), int(e))
                for s, e in zip(starts, ends))
            res = SegmentationResult(segs, 201)
            assert parse_segments(format_segments(res)) == res
