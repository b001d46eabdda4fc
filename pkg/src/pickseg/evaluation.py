"""Scoring of predicted segmentations against ground truth.

Classification is scored per ordered truth segment (label correct and the
predicted segment's midpoint inside the truth range); boundary quality is
scored separately as signed start-index offsets with quartile summaries.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources

import numpy as np

from .errors import EmptyEvalSet
from .segmenter import PrimitiveLabel, SegmentationResult


def matched_pairs(truth: SegmentationResult, predicted: SegmentationResult):
    """Greedy chronological matching of truth to predicted segments.

    Truth segment k matches the earliest unused predicted segment with the
    same label whose midpoint lies inside k's index range.
    """
    pairs = []
    used = set()
    for ti, ts in enumerate(truth.segments):
        for pi, ps in enumerate(predicted.segments):
            if pi in used:
                continue
            if ps.label == ts.label and ts.start <= ps.midpoint <= ts.end:
                pairs.append((ti, pi))
                used.add(pi)
                break
    return pairs


def match_primitives(truth: SegmentationResult, predicted: SegmentationResult):
    """Per-truth-segment correctness flags."""
    hit = {ti for ti, _ in matched_pairs(truth, predicted)}
    return [ti in hit for ti in range(len(truth.segments))]


def boundary_errors(truth: SegmentationResult, predicted: SegmentationResult):
    """Signed start-index offsets (predicted - truth) for matched pairs."""
    return [predicted.segments[pi].start - truth.segments[ti].start
            for ti, pi in matched_pairs(truth, predicted)]


@dataclass(frozen=True)
class SequenceEval:
    """Per-sequence evaluation record."""

    sequence_id: int
    matches: tuple
    offsets: tuple = ()
    truth: SegmentationResult | None = None
    predicted: SegmentationResult | None = None
    rate: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "matches", tuple(bool(m) for m in self.matches))
        object.__setattr__(self, "offsets", tuple(int(o) for o in self.offsets))


def evaluate_sequence(sequence_id, truth, predicted, rate=None) -> SequenceEval:
    return SequenceEval(sequence_id=sequence_id,
                        matches=tuple(match_primitives(truth, predicted)),
                        offsets=tuple(boundary_errors(truth, predicted)),
                        truth=truth, predicted=predicted, rate=rate)


@dataclass(frozen=True)
class QuartileSummary:
    """min/Q1/median/Q3/max of boundary offsets; empty-safe."""

    count: int
    minimum: float = 0.0
    q1: float = 0.0
    median: float = 0.0
    q3: float = 0.0
    maximum: float = 0.0

    @property
    def empty(self):
        return self.count == 0

    def scaled(self, factor):
        return QuartileSummary(self.count, self.minimum * factor,
                               self.q1 * factor, self.median * factor,
                               self.q3 * factor, self.maximum * factor)

    def as_dict(self):
        if self.empty:
            return {"count": 0}
        return {"count": self.count, "min": self.minimum, "q1": self.q1,
                "median": self.median, "q3": self.q3, "max": self.maximum}


def error_summary(offsets, rate=None):
    """Quartiles of signed and absolute offsets, in samples and seconds.

    Returns a dict with keys ``signed``/``absolute`` (samples) and, when a
    rate is given, ``signed_seconds``/``absolute_seconds``.
    """
    offsets = np.asarray(list(offsets), dtype=float)

    def summarize(values):
        if values.size == 0:
            return QuartileSummary(0)
        q = np.percentile(values, [0, 25, 50, 75, 100], method="linear")
        return QuartileSummary(values.size, *map(float, q))

    out = {"signed": summarize(offsets), "absolute": summarize(np.abs(offsets))}
    if rate:
        out["signed_seconds"] = out["signed"].scaled(1.0 / rate)
        out["absolute_seconds"] = out["absolute"].scaled(1.0 / rate)
    return out


@dataclass(frozen=True)
class EvalReport:
    """Aggregate accuracy plus boundary-error statistics for one predictor."""

    correct: int
    total: int
    summary: dict = field(default_factory=dict)

    @property
    def accuracy(self):
        return self.correct / self.total if self.total else 0.0

    def as_dict(self):
        return {
            "correct": self.correct,
            "total": self.total,
            "accuracy": self.accuracy,
            "boundary_errors": {k: v.as_dict() for k, v in self.summary.items()},
        }


def aggregate(evals, exclude_ids=frozenset(), rate=None) -> EvalReport:
    """Sum matches over sequences, optionally excluding validation ids.

    Excluded sequences count toward neither numerator nor denominator (used
    for feedback-style runs where some sequences supplied the corrections).
    """
    kept = [e for e in evals if e.sequence_id not in exclude_ids]
    if not kept:
        raise EmptyEvalSet("no sequences left to aggregate")
    correct = sum(sum(e.matches) for e in kept)
    total = sum(len(e.matches) for e in kept)
    offsets = [o for e in kept for o in e.offsets]
    if rate is None:
        rates = {e.rate for e in kept if e.rate}
        rate = rates.pop() if len(rates) == 1 else None
    return EvalReport(correct, total, error_summary(offsets, rate))


# ---------------------------------------------------------------------------
# shipped benchmark fixture (20 complex sequences, 56 primitives)

def load_benchmark() -> dict:
    """Raw benchmark grid: per-sequence truth labels and per-approach marks."""
    text = resources.files("pickseg.data").joinpath("benchmark.json").read_text()
    return json.loads(text)


def benchmark_label_sequences(benchmark=None):
    """Ordered truth label rows of the benchmark's 20 sequences."""
    benchmark = benchmark or load_benchmark()
    return [[PrimitiveLabel.parse(seg["label"]) for seg in seq["segments"]]
            for seq in benchmark["sequences"]]


def benchmark_validation_ids(benchmark=None):
    benchmark = benchmark or load_benchmark()
    return {seq["id"] for seq in benchmark["sequences"] if seq["validation"]}


def benchmark_evals(approach, benchmark=None):
    """Per-sequence match lists for one approach of the benchmark grid."""
    benchmark = benchmark or load_benchmark()
    if approach not in benchmark["approaches"]:
        raise ValueError(f"unknown approach {approach!r}")
    return [SequenceEval(sequence_id=seq["id"],
                         matches=tuple(approach in seg["correct"]
                                       for seg in seq["segments"]))
            for seq in benchmark["sequences"]]


def benchmark_report(approach, benchmark=None) -> EvalReport:
    """Accuracy of one approach; feedback excludes the validation sequences."""
    benchmark = benchmark or load_benchmark()
    evals = benchmark_evals(approach, benchmark)
    exclude = benchmark_validation_ids(benchmark) if approach == "feedback" \
        else frozenset()
    return aggregate(evals, exclude_ids=exclude)
