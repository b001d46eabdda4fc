"""File formats: recording CSV, velocity CSV, and segmentation/truth JSON.

Everything is plain text (CSV with header rows, JSON sidecars) so files stay
human-inspectable and diff-able. Quaternions are stored scalar-first.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

from .errors import FileFormatError, UnknownLabel
from .kinematics import PoseSeries
from .resample import VelocitySeries
from .segmenter import PrimitiveLabel, Segment, SegmentationResult

RECORDING_COLUMNS = ("t", "px", "py", "pz", "qw", "qx", "qy", "qz")
VELOCITY_COLUMNS = ("index", "t", "vx", "vy", "vz", "wx", "wy", "wz")

_FLOAT_FMT = "%.10g"


def _fmt(x):
    return _FLOAT_FMT % x


def load_recording_csv(path):
    """Read a pose recording; returns (PoseSeries, button press times)."""
    path = Path(path)
    rows = []
    buttons = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = [c.strip().lower() for c in next(reader)]
        except StopIteration:
            raise FileFormatError(f"{path}: empty file") from None
        has_button = header == list(RECORDING_COLUMNS) + ["button"]
        if not has_button and header != list(RECORDING_COLUMNS):
            raise FileFormatError(
                f"{path}:1: expected columns {','.join(RECORDING_COLUMNS)}"
                "[,button]")
        width = 9 if has_button else 8
        for lineno, row in enumerate(reader, start=2):
            if not row or not "".join(row).strip():
                continue
            if len(row) != width:
                raise FileFormatError(
                    f"{path}:{lineno}: expected {width} fields, got {len(row)}")
            try:
                values = [float(x) for x in row]
            except ValueError as exc:
                raise FileFormatError(f"{path}:{lineno}: {exc}") from None
            rows.append(values[:8])
            if has_button and values[8] not in (0.0, 1.0):
                raise FileFormatError(
                    f"{path}:{lineno}: button must be 0 or 1")
            if has_button and values[8] == 1.0:
                buttons.append(values[0])
    if len(rows) < 2:
        raise FileFormatError(f"{path}: needs at least 2 data rows")
    data = np.asarray(rows)
    try:
        series = PoseSeries(data[:, 0], data[:, 1:4], data[:, 4:8],
                            recording_id=path.stem)
    except Exception as exc:
        raise FileFormatError(f"{path}: {exc}") from exc
    return series, buttons


def write_recording_csv(path, series: PoseSeries, button_times=()):
    """Write a pose recording; button column only when times are given."""
    button_times = sorted(button_times)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        header = list(RECORDING_COLUMNS) + (["button"] if button_times else [])
        writer.writerow(header)
        presses = set()
        for bt in button_times:  # press marked on the nearest sample
            presses.add(int(np.argmin(np.abs(series.t - bt))))
        for k in range(len(series)):
            row = [_fmt(series.t[k])]
            row += [_fmt(x) for x in series.p[k]]
            row += [_fmt(x) for x in series.q[k]]
            if button_times:
                row.append("1" if k in presses else "0")
            writer.writerow(row)


def write_velocity_csv(path, series: VelocitySeries):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(VELOCITY_COLUMNS)
        for k in range(len(series)):
            row = [str(k), _fmt(series.t[k])] + [_fmt(x) for x in series.v[k]]
            writer.writerow(row)


def load_velocity_csv(path) -> VelocitySeries:
    path = Path(path)
    rows = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = [c.strip().lower() for c in next(reader)]
        except StopIteration:
            raise FileFormatError(f"{path}: empty file") from None
        if header != list(VELOCITY_COLUMNS):
            raise FileFormatError(
                f"{path}:1: expected columns {','.join(VELOCITY_COLUMNS)}")
        for lineno, row in enumerate(reader, start=2):
            if not row or not "".join(row).strip():
                continue
            if len(row) != 8:
                raise FileFormatError(
                    f"{path}:{lineno}: expected 8 fields, got {len(row)}")
            try:
                rows.append([float(x) for x in row[1:]])
            except ValueError as exc:
                raise FileFormatError(f"{path}:{lineno}: {exc}") from None
    if len(rows) < 2:
        raise FileFormatError(f"{path}: needs at least 2 data rows")
    data = np.asarray(rows)
    try:
        rate = 1.0 / (data[1, 0] - data[0, 0])
        return VelocitySeries.from_arrays(data[:, 0], data[:, 1:], rate,
                                          recording_id=path.stem)
    except Exception as exc:
        raise FileFormatError(f"{path}: {exc}") from exc


def segmentation_to_dict(result: SegmentationResult, rate=None):
    out = {
        "series_len": result.series_len,
        "segments": [{"label": str(s.label), "start": s.start, "end": s.end}
                     for s in result.segments],
    }
    if rate is not None:
        out["rate"] = rate
    if result.warnings:
        out["warnings"] = list(result.warnings)
    return out


def write_segmentation_json(path, result: SegmentationResult, rate=None):
    with open(path, "w") as fh:
        json.dump(segmentation_to_dict(result, rate), fh, indent=2,
                  sort_keys=True)
        fh.write("\n")


def load_segmentation_json(path):
    """Returns (SegmentationResult, rate-or-None)."""
    path = Path(path)
    with open(path) as fh:
        data = json.load(fh)
    try:
        segments = tuple(
            Segment(PrimitiveLabel.parse(s["label"]),
                    int(s["start"]), int(s["end"]))
            for s in data["segments"])
        result = SegmentationResult(segments, int(data["series_len"]),
                                    tuple(data.get("warnings", ())))
    except (KeyError, TypeError, ValueError, UnknownLabel) as exc:
        raise FileFormatError(f"{path}: {exc}") from exc
    return result, data.get("rate")


def write_boundaries_json(path, boundaries, series_len, rate):
    """Label-free truth sidecar (e.g. derived from push-button timestamps)."""
    with open(path, "w") as fh:
        json.dump({"boundaries": [int(b) for b in boundaries],
                   "series_len": int(series_len), "rate": rate},
                  fh, indent=2, sort_keys=True)
        fh.write("\n")
