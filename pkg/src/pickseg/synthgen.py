"""Synthetic labeled motion generator.

Produces pose/velocity recordings whose per-axis activity follows the
primitive templates, with exact transition indices as ground truth, so the
numerical and segmentation components are testable without robot data.
Velocity profiles are raised-cosine bells (zero at segment ends), mimicking
demonstrations that start and stop near rest.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .kinematics import (IDENTITY_QUATERNION, PoseSeries, quat_from_rotvec,
                         quat_multiply)
from .resample import VelocitySeries
from .segmenter import (LABELS, TERMINAL_LABELS, PrimitiveLabel, Segment,
                        SegmentationResult, default_templates)

DEFAULT_AMPLITUDE_TRANSLATIONAL = 0.1  # m/s
DEFAULT_AMPLITUDE_ANGULAR = 0.5  # rad/s

_AXIS_WEIGHTS = {t.label: t.active for t in default_templates()}


@dataclass(frozen=True)
class MotionSpec:
    """Recipe for one synthetic recording."""

    labels: tuple
    durations: tuple  # seconds, one per label
    amplitude_translational: float = DEFAULT_AMPLITUDE_TRANSLATIONAL
    amplitude_angular: float = DEFAULT_AMPLITUDE_ANGULAR
    noise_std: float = 0.0  # relative to the per-group amplitude
    seed: int = 0
    rate: float = 20.0

    def __post_init__(self):
        labels = tuple(PrimitiveLabel.parse(l) if isinstance(l, str) else l
                       for l in self.labels)
        if not labels:
            raise ValueError("labels must be non-empty")
        durations = self.durations
        if np.isscalar(durations):
            durations = (float(durations),) * len(labels)
        durations = tuple(float(d) for d in durations)
        if len(durations) != len(labels):
            raise ValueError("need one duration per label")
        if any(d <= 0 for d in durations):
            raise ValueError("durations must be > 0")
        if self.noise_std < 0:
            raise ValueError("noise_std must be >= 0")
        if self.amplitude_translational <= 0 or self.amplitude_angular <= 0:
            raise ValueError("amplitudes must be > 0")
        if self.rate <= 0:
            raise ValueError("rate must be > 0")
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "durations", durations)


@dataclass(frozen=True)
class LabeledRecording:
    """Pose + velocity series with exact ground-truth segmentation."""

    pose: PoseSeries
    velocity: VelocitySeries
    truth: SegmentationResult


def _bell(num_samples, rate, duration, peak):
    tau = np.arange(num_samples) / rate
    return peak * 0.5 * (1.0 - np.cos(2.0 * np.pi * tau / duration))


def _integrate_pose(t, v, rate):
    """Integrate a velocity profile into a pose path starting at identity."""
    dt = 1.0 / rate
    n = len(t)
    p = np.zeros((n, 3))
    np.cumsum(0.5 * (v[:-1, :3] + v[1:, :3]) * dt, axis=0, out=p[1:])
    q = np.empty((n, 4))
    q[0] = IDENTITY_QUATERNION
    for k in range(n - 1):
        omega_mid = 0.5 * (v[k, 3:] + v[k + 1, 3:])
        q[k + 1] = quat_multiply(q[k], quat_from_rotvec(omega_mid * dt))
    return p, q


def generate_sequence(spec: MotionSpec) -> LabeledRecording:
    """Concatenated primitives with continuous pose and exact boundaries."""
    if spec.labels[-1] not in TERMINAL_LABELS:
        warnings.warn(
            f"final primitive {spec.labels[-1]} is not a terminal action "
            "(pull or slide)", stacklevel=2)
    rng = np.random.default_rng(spec.seed)
    amp = np.array([spec.amplitude_translational] * 3
                   + [spec.amplitude_angular] * 3)
    chunks = []
    segments = []
    start = 0
    for label, duration in zip(spec.labels, spec.durations):
        n = int(round(duration * spec.rate))
        if n < 2:
            raise ValueError(f"duration {duration} too short at rate {spec.rate}")
        peaks = _AXIS_WEIGHTS[label] * amp
        block = _bell(n, spec.rate, duration, 1.0)[:, None] * peaks[None, :]
        chunks.append(block)
        segments.append(Segment(label, start, start + n - 1))
        start += n
    v = np.vstack(chunks)
    if spec.noise_std > 0:
        v = v + rng.normal(0.0, spec.noise_std, size=v.shape) * amp[None, :]
    t = np.arange(len(v)) / spec.rate
    p, q = _integrate_pose(t, v, spec.rate)
    rec_id = f"synth-{spec.seed}"
    pose = PoseSeries(t, p, q, source_rate=spec.rate, recording_id=rec_id)
    velocity = VelocitySeries.from_arrays(t, v, spec.rate, rec_id)
    truth = SegmentationResult(tuple(segments), len(v))
    return LabeledRecording(pose, velocity, truth)


def generate_primitive(label, duration, amplitude_translational=None,
                       amplitude_angular=None, noise_std=0.0, seed=0,
                       rate=20.0) -> LabeledRecording:
    """Single-primitive recording; see :func:`generate_sequence`."""
    spec = MotionSpec(
        labels=(label,), durations=(float(duration),),
        amplitude_translational=(amplitude_translational
                                 or DEFAULT_AMPLITUDE_TRANSLATIONAL),
        amplitude_angular=amplitude_angular or DEFAULT_AMPLITUDE_ANGULAR,
        noise_std=noise_std, seed=seed, rate=rate)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return generate_sequence(spec)


def random_composite_spec(rng, num_segments=None, noise_std=0.0, rate=20.0,
                          min_duration=2.0, max_duration=5.0) -> MotionSpec:
    """Grammar-valid random composite: no adjacent repeats, terminal ending.

    Durations snap to the sample grid so boundaries are exact.
    """
    if num_segments is None:
        num_segments = int(rng.integers(2, 5))
    last = TERMINAL_LABELS[int(rng.integers(len(TERMINAL_LABELS)))]
    labels = [last]
    for _ in range(num_segments - 1):
        choices = [l for l in LABELS if l != labels[0]]
        labels.insert(0, choices[int(rng.integers(len(choices)))])
    steps = rng.integers(int(min_duration * rate), int(max_duration * rate) + 1,
                         size=num_segments)
    durations = tuple(float(s) / rate for s in steps)
    return MotionSpec(labels=tuple(labels), durations=durations,
                      noise_std=noise_std, rate=rate,
                      seed=int(rng.integers(2 ** 31)))
