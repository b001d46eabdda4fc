"""Text formats crossing the model boundary.

Velocity series are inlined as fixed-precision text tables (keeps requests
within provider data limits); segmentations travel as the human-readable
``label (Index a–b)`` form, parsed permissively on separators but strictly
on labels and ordering.
"""

from __future__ import annotations

import re

import numpy as np

from ..errors import (MalformedRange, NoSegmentsFound, OverlapError,
                      SeriesTooLong, UnknownLabel)
from ..resample import VelocitySeries
from ..segmenter import (PrimitiveLabel, Segment, SegmentationResult)

SERIES_COLUMNS = ("index", "t", "vx", "vy", "vz", "wx", "wy", "wz")
DEFAULT_MAX_ROWS = 400

EN_DASH = "–"

# label word + "(Index a<sep>b)"; sep may be hyphen, en/em dash, minus, or "to"
_SEGMENT_RE = re.compile(
    r"([A-Za-z]+)\s*\(\s*index\s+(\d+)\s*(?:[-–—−]|to)\s*(\d+)\s*\)",
    re.IGNORECASE)


def serialize_series(series: VelocitySeries, max_rows=DEFAULT_MAX_ROWS) -> str:
    """Fixed-precision (4 decimals) comma-separated table with header."""
    if len(series) > max_rows:
        raise SeriesTooLong(f"series has {len(series)} rows, limit {max_rows}")
    lines = [",".join(SERIES_COLUMNS)]
    for k in range(len(series)):
        fields = [str(k), f"{series.t[k]:.4f}"]
        fields += [f"{x:.4f}" for x in series.v[k]]
        lines.append(",".join(fields))
    return "\n".join(lines)


def parse_series_table(text: str) -> VelocitySeries:
    """Inverse of :func:`serialize_series` (up to 4-decimal quantization)."""
    lines = [ln.strip() for ln in text.strip().splitlines() if ln.strip()]
    if not lines or lines[0].lower().replace(" ", "") != ",".join(SERIES_COLUMNS):
        raise ValueError("missing or malformed series header")
    rows = [[float(x) for x in ln.split(",")] for ln in lines[1:]]
    data = np.asarray(rows, dtype=float)
    if data.ndim != 2 or data.shape[1] != 8:
        raise ValueError("series rows must have 8 columns")
    t = data[:, 1]
    rate = 1.0 / (t[1] - t[0]) if len(t) > 1 else 1.0
    return VelocitySeries.from_arrays(t, data[:, 2:], rate)


def parse_segments(text: str) -> SegmentationResult:
    """Extract ``label (Index a–b)`` occurrences from free-form model output.

    Contiguity violations (gaps) are reported as warnings on the result;
    overlapping ranges, unknown labels, and inverted ranges raise.
    """
    found = _SEGMENT_RE.findall(text or "")
    if not found:
        raise NoSegmentsFound("no segment descriptions found in reply")
    segments = []
    for word, a, b in found:
        label = PrimitiveLabel.parse(word)
        start, end = int(a), int(b)
        if start > end:
            raise MalformedRange(f"{word} (Index {start}-{end}): start > end")
        segments.append(Segment(label, start, end))
    segments.sort(key=lambda s: (s.start, s.end))
    warnings = []
    for left, right in zip(segments, segments[1:]):
        if right.start <= left.end:
            raise OverlapError(
                f"segments overlap: [{left.start},{left.end}] and "
                f"[{right.start},{right.end}]")
        if right.start != left.end + 1:
            warnings.append(
                f"gap between index {left.end} and {right.start}")
    return SegmentationResult(tuple(segments), segments[-1].end + 1,
                              tuple(warnings))


def format_segments(result: SegmentationResult) -> str:
    """Canonical en-dash form, e.g. ``pull (Index 0–10)``."""
    return ", ".join(f"{seg.label} (Index {seg.start}{EN_DASH}{seg.end})"
                     for seg in result.segments)
