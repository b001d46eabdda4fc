"""Gaussian-kernel smoothing/downsampling and numerical differentiation.

Raw recordings arrive at a high sampling rate (typically 500 Hz); they are
reduced to a uniform low-rate grid with a Nadaraya-Watson kernel-weighted
average per channel, then differentiated with centered finite differences to
obtain the 6-dim generalized velocity the classifier consumes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin

from .errors import (DegenerateInput, DegenerateWeights, EmptyObservations,
                     SeriesTooShort)
from .kinematics import PoseSeries, enforce_sign_continuity
from .validation import as_float_array, check_finite, check_strictly_increasing, \
    check_uniform_spacing

SUP_THRESHOLD = 1e-6  # below this a velocity group is considered motionless


@dataclass(frozen=True)
class KernelConfig:
    """Bandwidth (seconds) and output grid density (Hz) for smoothing."""

    sigma: float = 0.05
    output_rate: float = 20.0

    def __post_init__(self):
        if self.sigma <= 0:
            raise ValueError("sigma must be > 0")
        if self.output_rate <= 0:
            raise ValueError("output_rate must be > 0")


@dataclass(frozen=True)
class VelocitySeries:
    """Uniformly sampled 6-dim generalized velocity [pdot; omega]."""

    t: np.ndarray
    v: np.ndarray
    rate: float
    recording_id: str = ""
    sup_translational: float = 0.0
    sup_angular: float = 0.0

    def __post_init__(self):
        t = np.atleast_1d(as_float_array(self.t))
        v = as_float_array(self.v, (t.size, 6), "v")
        check_strictly_increasing(t)
        check_finite(v, "v")
        if t.size >= 2:
            check_uniform_spacing(t)
        object.__setattr__(self, "t", t)
        object.__setattr__(self, "v", v)

    @classmethod
    def from_arrays(cls, t, v, rate, recording_id=""):
        """Build a series with the sup fields computed from the data."""
        v = as_float_array(v)
        sup_t = float(np.max(np.abs(v[:, :3]))) if v.size else 0.0
        sup_a = float(np.max(np.abs(v[:, 3:]))) if v.size else 0.0
        return cls(t, v, float(rate), recording_id, sup_t, sup_a)

    def __len__(self):
        return self.t.size


def nw_estimate(obs_t, obs_y, query_t, sigma):
    """Gaussian-kernel weighted average of ``obs_y`` at time ``query_t``."""
    obs_t = np.atleast_1d(as_float_array(obs_t))
    obs_y = np.atleast_1d(as_float_array(obs_y))
    if obs_t.size == 0:
        raise EmptyObservations("no observations supplied")
    if obs_t.shape != obs_y.shape:
        raise ValueError("obs_t and obs_y must have equal length")
    if sigma <= 0:
        raise ValueError("sigma must be > 0")
    w = np.exp(-((float(query_t) - obs_t) ** 2) / (2.0 * sigma * sigma))
    total = w.sum()
    if total == 0.0:
        raise DegenerateWeights(
            f"all kernel weights underflowed at t={query_t!r} (sigma={sigma})")
    return float((w @ obs_y) / total)


def _nw_weight_matrix(grid, obs_t, sigma):
    d = grid[:, None] - obs_t[None, :]
    w = np.exp(-(d * d) / (2.0 * sigma * sigma))
    totals = w.sum(axis=1)
    bad = np.nonzero(totals == 0.0)[0]
    if bad.size:
        raise DegenerateWeights(
            f"kernel weights underflowed at grid point t={grid[bad[0]]:.6g}")
    return w / totals[:, None]


def output_grid(duration, rate):
    """Uniform grid 0, 1/rate, ... covering [0, duration]."""
    n = int(np.floor(duration * rate + 1e-9)) + 1
    return np.arange(n) / rate


def resample_pose(series: PoseSeries, cfg: KernelConfig) -> PoseSeries:
    """Smooth all 7 pose channels onto a uniform grid.

    The series must be sign-continuous; quaternions are smoothed
    component-wise and renormalized per sample afterwards.
    """
    if series.duration < 2.0 / cfg.output_rate:
        raise SeriesTooShort(
            f"duration {series.duration:.4g} s below 2/output_rate")
    rel_t = series.t - series.t[0]
    grid = output_grid(series.duration, cfg.output_rate)
    w = _nw_weight_matrix(grid, rel_t, cfg.sigma)
    p_out = w @ series.p
    q_out = w @ series.q
    q_out /= np.linalg.norm(q_out, axis=1)[:, None]
    return PoseSeries(grid, p_out, q_out, source_rate=cfg.output_rate,
                      recording_id=series.recording_id)


def central_diff(values, dt):
    """Centered differences, 2nd-order one-sided stencils at the endpoints.

    Output length equals input length; exact for polynomials of degree <= 2.
    """
    y = as_float_array(values)
    if y.shape[0] < 3:
        raise SeriesTooShort("central differences need at least 3 samples")
    if dt <= 0:
        raise ValueError("dt must be > 0")
    out = np.empty_like(y)
    out[1:-1] = (y[2:] - y[:-2]) / (2.0 * dt)
    out[0] = (-3.0 * y[0] + 4.0 * y[1] - y[2]) / (2.0 * dt)
    out[-1] = (3.0 * y[-1] - 4.0 * y[-2] + y[-3]) / (2.0 * dt)
    return out


def differentiate(series: PoseSeries) -> VelocitySeries:
    """Generalized velocity of a uniformly sampled pose trajectory.

    Linear velocity comes from centered differences of the position;
    angular velocity from the quaternion rate via ``omega = 2 J(q)^T qdot``.
    """
    dt = check_uniform_spacing(series.t)
    pdot = central_diff(series.p, dt)
    qdot = central_diff(series.q, dt)
    eta, eps = series.q[:, :1], series.q[:, 1:]
    qd0, qdv = qdot[:, :1], qdot[:, 1:]
    omega = 2.0 * (-eps * qd0 + eta * qdv - np.cross(eps, qdv))
    v = np.hstack([pdot, omega])
    return VelocitySeries.from_arrays(series.t, v, 1.0 / dt,
                                      series.recording_id)


def sup_normalize(series: VelocitySeries,
                  threshold=SUP_THRESHOLD) -> VelocitySeries:
    """Divide each velocity group by its maximum absolute component.

    A group is scaled only when its sup exceeds ``threshold``; raises when
    both groups are below it (motionless recording). Idempotent.
    """
    st, sa = series.sup_translational, series.sup_angular
    if st <= threshold and sa <= threshold:
        raise DegenerateInput(
            f"both velocity sups below {threshold:g}; nothing to normalize")
    v = series.v.copy()
    if st > threshold:
        v[:, :3] /= st
    if sa > threshold:
        v[:, 3:] /= sa
    return VelocitySeries.from_arrays(series.t, v, series.rate,
                                      series.recording_id)


def pose_to_velocity(series: PoseSeries, cfg: KernelConfig) -> VelocitySeries:
    """Full pre-processing chain: sign continuity, smoothing, differentiation."""
    return differentiate(resample_pose(enforce_sign_continuity(series), cfg))


class VelocityResampler(TransformerMixin, BaseEstimator):
    """Transformer from raw pose trajectories to generalized velocities.

    Stateless; ``fit`` only validates parameters so the transformer can sit
    in a scikit-learn pipeline ahead of the rule segmenter.
    """

    def __init__(self, sigma=0.05, output_rate=20.0):
        self.sigma = sigma
        self.output_rate = output_rate

    def _config(self):
        return KernelConfig(sigma=self.sigma, output_rate=self.output_rate)

    def fit(self, X=None, y=None):
        self._config()
        return self

    def transform(self, X):
        cfg = self._config()
        if isinstance(X, PoseSeries):
            return pose_to_velocity(X, cfg)
        return [pose_to_velocity(s, cfg) for s in X]
