"""Rule-based classification and segmentation of velocity time series.

Each of the five fruit-picking primitives is characterized by the axes along
which motion is expected (active) and the axes expected to stay quiet
(suppressed). Classification scores a segment's per-axis mean absolute
normalized velocity against these templates; segmentation finds the samples
where the dominant-axis pattern changes.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np
from sklearn.base import BaseEstimator

from .errors import BadRange, DegenerateInput, SeriesTooShort, UnknownLabel
from .resample import VelocitySeries, sup_normalize
from .validation import as_float_array

AXIS_NAMES = ("vx", "vy", "vz", "wx", "wy", "wz")


class PrimitiveLabel(enum.Enum):
    """Closed set of fruit-detachment primitives (definition order is the
    deterministic tie-break order)."""

    PULL = "pull"
    SLIDE = "slide"
    SWING = "swing"
    TILT = "tilt"
    TWIST = "twist"

    def __str__(self):
        return self.value

    @classmethod
    def parse(cls, text: str) -> "PrimitiveLabel":
        try:
            return cls(text.strip().lower())
        except ValueError:
            raise UnknownLabel(f"unknown primitive label {text!r}") from None


LABELS = tuple(PrimitiveLabel)

# labels allowed to terminate a detachment motion (they displace the fruit)
TERMINAL_LABELS = (PrimitiveLabel.PULL, PrimitiveLabel.SLIDE)


@dataclass(frozen=True)
class PrimitiveTemplate:
    """Axis-weight description of one primitive.

    ``active`` weights in [0, 1] mark characteristic axes; ``suppressed``
    marks axes expected near zero. The two sets are disjoint.
    """

    label: PrimitiveLabel
    active: np.ndarray
    suppressed: np.ndarray

    def __post_init__(self):
        a = as_float_array(self.active, (6,), "active")
        s = as_float_array(self.suppressed, (6,), "suppressed")
        if not np.any(a > 0):
            raise ValueError(f"{self.label}: needs at least one active axis")
        if np.any((a > 0) & (s > 0)):
            raise ValueError(f"{self.label}: active/suppressed sets overlap")
        object.__setattr__(self, "active", a)
        object.__setattr__(self, "suppressed", s)


def default_templates() -> list[PrimitiveTemplate]:
    """The five primitive templates, axis order (vx, vy, vz, wx, wy, wz).

    - pull: translation along x, no significant rotation
    - slide: translation in the y-z plane, no significant rotation
    - swing: translation along y with rotation about z
    - tilt: rotation about y with minimal translation along z
    - twist: rotation about x, no translation
    """
    return [
        PrimitiveTemplate(PrimitiveLabel.PULL,
                          [1, 0, 0, 0, 0, 0], [0, 0, 0, 1, 1, 1]),
        PrimitiveTemplate(PrimitiveLabel.SLIDE,
                          [0, 1, 1, 0, 0, 0], [0, 0, 0, 1, 1, 1]),
        PrimitiveTemplate(PrimitiveLabel.SWING,
                          [0, 1, 0, 0, 0, 1], [0, 0, 0, 0, 0, 0]),
        PrimitiveTemplate(PrimitiveLabel.TILT,
                          [0, 0, 0.25, 0, 1, 0], [1, 1, 0, 0, 0, 0]),
        PrimitiveTemplate(PrimitiveLabel.TWIST,
                          [0, 0, 0, 1, 0, 0], [1, 1, 1, 0, 0, 0]),
    ]


@dataclass(frozen=True, order=True)
class Segment:
    """Inclusive index range carrying one primitive label."""

    label: PrimitiveLabel = field(compare=False)
    start: int
    end: int

    def __post_init__(self):
        object.__setattr__(self, "start", int(self.start))
        object.__setattr__(self, "end", int(self.end))
        if not (0 <= self.start <= self.end):
            raise ValueError(f"bad segment range [{self.start}, {self.end}]")

    @property
    def midpoint(self):
        return (self.start + self.end) // 2


@dataclass(frozen=True)
class SegmentationResult:
    """Ordered, non-overlapping segments over a velocity series."""

    segments: tuple
    series_len: int
    warnings: tuple = ()

    def __post_init__(self):
        segs = tuple(self.segments)
        for a, b in zip(segs, segs[1:]):
            if b.start <= a.start:
                raise ValueError("segment start indices must strictly increase")
            if b.start <= a.end:
                raise ValueError(
                    f"segments overlap: [{a.start},{a.end}] and [{b.start},{b.end}]")
        if segs and segs[-1].end >= self.series_len:
            raise ValueError("segment end beyond series length")
        object.__setattr__(self, "segments", segs)
        object.__setattr__(self, "warnings", tuple(self.warnings))

    def labels(self):
        return [s.label for s in self.segments]

    def boundaries(self):
        """Interior boundary indices (start of every segment but the first)."""
        return [s.start for s in self.segments[1:]]


@dataclass(frozen=True)
class DetectionConfig:
    """Knobs of the rule engine.

    ``theta`` is the significance threshold on windowed mean absolute
    normalized velocity; ``min_segment_len`` doubles as the feature-window
    length; ``persistence`` is how many decided windows a new pattern must
    hold before it counts as a change.
    """

    theta: float = 0.25
    min_segment_len: int = 10
    window: int = 5
    persistence: int = 5
    lam: float = 0.5
    grammar: bool = False

    def __post_init__(self):
        if self.theta <= 0 or self.min_segment_len < 2 or self.window < 1 \
                or self.persistence < 1 or self.lam < 0:
            raise ValueError("invalid detection configuration")


def segment_features(series: VelocitySeries, start: int, end: int):
    """Per-axis mean absolute velocity over the inclusive range."""
    n = len(series)
    if not (0 <= start <= end < n):
        raise BadRange(f"range [{start}, {end}] outside series of length {n}")
    return np.abs(series.v[start:end + 1]).mean(axis=0)


def _score_matrix(templates, lam):
    return np.stack([t.active - lam * t.suppressed for t in templates])


def classify_segment(features, templates=None, lam=0.5, allowed=None):
    """Best-matching primitive for a feature vector.

    Score = sum(active * f) - lam * sum(suppressed * f); ties break toward
    the earliest template in the list.
    """
    f = as_float_array(features, (6,), "features")
    if np.any(f < 0):
        raise ValueError("features must be non-negative")
    if float(f.max()) < 1e-6:
        raise DegenerateInput("all features below 1e-6; no signal to classify")
    templates = templates if templates is not None else default_templates()
    scores = _score_matrix(templates, lam) @ f
    if allowed is not None:
        allowed = set(allowed)
        mask = np.array([t.label in allowed for t in templates])
        if not mask.any():
            raise ValueError("allowed set excludes every template")
        scores = np.where(mask, scores, -np.inf)
    best = int(np.argmax(scores))
    return templates[best].label, float(scores[best])


def _moving_average(x, window):
    """Centered moving average with edge padding; output length == input."""
    pad_l = window // 2
    pad_r = window - 1 - pad_l
    xp = np.pad(x, ((pad_l, pad_r), (0, 0)), mode="edge")
    cs = np.vstack([np.zeros((1, x.shape[1])), np.cumsum(xp, axis=0)])
    return (cs[window:] - cs[:-window]) / window


def detect_changepoints(series: VelocitySeries, config: DetectionConfig | None = None,
                        templates=None):
    """Interior boundary indices of a sup-normalized velocity series.

    A boundary is declared when the window-classified dominant-axis pattern
    departs from the current segment's pattern and the new pattern persists;
    the boundary index is then refined to the earliest activity minimum
    between the two patterns, i.e. the sample where the new movement first
    emerges.
    """
    config = config or DetectionConfig()
    templates = templates if templates is not None else default_templates()
    n = len(series)
    if n < 2 * config.min_segment_len:
        raise SeriesTooShort(
            f"series length {n} below 2*min_segment_len "
            f"({2 * config.min_segment_len})")
    absv = np.abs(series.v)
    smooth = _moving_average(absv, config.window)
    activity = smooth.max(axis=1)

    win = config.min_segment_len
    cs = np.vstack([np.zeros(6), np.cumsum(absv, axis=0)])
    means = (cs[win:] - cs[:-win]) / win  # (n - win + 1, 6)
    scores = means @ _score_matrix(templates, config.lam).T
    window_labels = np.argmax(scores, axis=1)
    decided = means.max(axis=1) >= config.theta

    # compress decided windows into label runs (undecided gaps are absorbed)
    runs = []  # [label_idx, first_window, last_window, decided_count]
    for k in np.nonzero(decided)[0]:
        lab = int(window_labels[k])
        if runs and runs[-1][0] == lab:
            runs[-1][2] = k
            runs[-1][3] += 1
        else:
            runs.append([lab, k, k, 1])
    runs = [r for r in runs if r[3] >= config.persistence]
    merged = []
    for r in runs:
        if merged and merged[-1][0] == r[0]:
            merged[-1][2] = r[2]
        else:
            merged.append(r)

    boundaries = []
    prev = 0
    for left, right in zip(merged, merged[1:]):
        lo = left[2]
        hi = min(right[1] + win - 1, n - 1)
        b = lo + int(np.argmin(activity[lo:hi + 1]))
        if b - prev >= config.min_segment_len and n - b >= config.min_segment_len:
            boundaries.append(b)
            prev = b
    return boundaries


def segment_and_classify(series: VelocitySeries,
                         config: DetectionConfig | None = None,
                         templates=None) -> SegmentationResult:
    """Normalize, detect boundaries, and label every span.

    Sup normalization makes the result invariant to uniform positive scaling
    of the input. With ``config.grammar`` set, the final span may only take a
    terminal label (pull or slide).
    """
    config = config or DetectionConfig()
    templates = templates if templates is not None else default_templates()
    normalized = sup_normalize(series)
    n = len(normalized)
    if n >= 2 * config.min_segment_len:
        bounds = detect_changepoints(normalized, config, templates)
    else:
        bounds = []
    starts = [0] + bounds
    ends = bounds + [n]
    segments = []
    for i, (s, e) in enumerate(zip(starts, ends)):
        allowed = None
        if config.grammar and i == len(starts) - 1:
            allowed = TERMINAL_LABELS
        label, _ = classify_segment(
            segment_features(normalized, s, e - 1), templates,
            lam=config.lam, allowed=allowed)
        segments.append(Segment(label, s, e - 1))
    return SegmentationResult(tuple(segments), n)


class RuleSegmenter(BaseEstimator):
    """Estimator wrapper around the deterministic rule engine.

    ``fit`` is a no-op (the rules are fixed templates); ``predict`` maps a
    velocity series, or a list of them, to segmentation results.
    """

    def __init__(self, theta=0.25, min_segment_len=10, window=5,
                 persistence=5, lam=0.5, grammar=False):
        self.theta = theta
        self.min_segment_len = min_segment_len
        self.window = window
        self.persistence = persistence
        self.lam = lam
        self.grammar = grammar

    def _config(self):
        return DetectionConfig(theta=self.theta,
                               min_segment_len=self.min_segment_len,
                               window=self.window,
                               persistence=self.persistence,
                               lam=self.lam, grammar=self.grammar)

    def fit(self, X=None, y=None):
        self._config()
        return self

    def predict(self, X):
        cfg = self._config()
        if isinstance(X, VelocitySeries):
            return segment_and_classify(X, cfg)
        return [segment_and_classify(s, cfg) for s in X]
