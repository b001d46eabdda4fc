"""Unit-quaternion and SE(3) algebra for frame-relative motion analysis.

Quaternions are stored scalar-first, ``(eta, eps_x, eps_y, eps_z)``, and are
kept sign-continuous along a recording so that numerical differentiation of
the orientation channels is meaningful (q and -q encode the same rotation).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import EmptySeries, NonUnitQuaternion, SeriesTooShort
from .validation import as_float_array, check_finite, check_strictly_increasing

IDENTITY_QUATERNION = np.array([1.0, 0.0, 0.0, 0.0])

# strict tolerance for algebraic operations; looser one for file ingestion
UNIT_NORM_TOL = 1e-6
INGEST_NORM_TOL = 1e-3


def skew(u):
    """Skew-symmetric matrix S(u) such that S(u) @ w == cross(u, w)."""
    ux, uy, uz = as_float_array(u, (3,), "u")
    return np.array([
        [0.0, -uz, uy],
        [uz, 0.0, -ux],
        [-uy, ux, 0.0],
    ])


def quat_normalize(q, tol=INGEST_NORM_TOL):
    """Renormalize a quaternion, rejecting norms outside ``1 +/- tol``."""
    q = as_float_array(q, (4,), "q")
    norm = float(np.linalg.norm(q))
    if abs(norm - 1.0) > tol:
        raise NonUnitQuaternion(
            f"quaternion norm {norm:.6g} outside unit tolerance {tol:g}")
    return q / norm


def quat_conjugate(q):
    q = as_float_array(q, (4,), "q")
    return np.array([q[0], -q[1], -q[2], -q[3]])


def quat_multiply(a, b):
    a = as_float_array(a, (4,), "a")
    b = as_float_array(b, (4,), "b")
    eta = a[0] * b[0] - a[1:] @ b[1:]
    eps = a[0] * b[1:] + b[0] * a[1:] + np.cross(a[1:], b[1:])
    return np.concatenate(([eta], eps))


def quat_to_matrix(q):
    """Rotation matrix of a unit quaternion."""
    eta, ex, ey, ez = quat_normalize(q)
    return np.array([
        [1 - 2 * (ey * ey + ez * ez), 2 * (ex * ey - eta * ez), 2 * (ex * ez + eta * ey)],
        [2 * (ex * ey + eta * ez), 1 - 2 * (ex * ex + ez * ez), 2 * (ey * ez - eta * ex)],
        [2 * (ex * ez - eta * ey), 2 * (ey * ez + eta * ex), 1 - 2 * (ex * ex + ey * ey)],
    ])


def quat_from_rotvec(phi):
    """Unit quaternion rotating by the rotation vector ``phi`` (radians)."""
    phi = as_float_array(phi, (3,), "phi")
    angle = float(np.linalg.norm(phi))
    if angle < 1e-12:
        # first-order expansion keeps the map smooth through zero
        return quat_normalize(np.concatenate(([1.0], 0.5 * phi)), tol=1.0)
    axis = phi / angle
    return np.concatenate(([np.cos(angle / 2.0)], np.sin(angle / 2.0) * axis))


def quat_rotate(q, vec):
    return quat_to_matrix(q) @ as_float_array(vec, (3,), "vec")


def jq_matrix(q):
    """4x3 map from angular velocity to unit-quaternion rates.

    Stacks ``-eps`` on top of ``eta*I3 + S(eps)``.
    """
    q = as_float_array(q, (4,), "q")
    if abs(np.linalg.norm(q) - 1.0) > UNIT_NORM_TOL:
        raise NonUnitQuaternion(
            f"quaternion norm {np.linalg.norm(q):.6g} outside {UNIT_NORM_TOL:g}")
    eta, eps = q[0], q[1:]
    out = np.empty((4, 3))
    out[0] = -eps
    out[1:] = eta * np.eye(3) + skew(eps)
    return out


def quat_rate_to_omega(q, qdot):
    """Angular velocity from a quaternion rate: ``omega = 2 * J(q)^T qdot``."""
    qdot = as_float_array(qdot, (4,), "qdot")
    return 2.0 * jq_matrix(q).T @ qdot


@dataclass(frozen=True)
class PoseSample:
    """One timestamped end-effector pose (position + unit quaternion)."""

    t: float
    p: np.ndarray
    q: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "p", as_float_array(self.p, (3,), "p"))
        object.__setattr__(self, "q", quat_normalize(self.q))

    @classmethod
    def identity(cls, t=0.0):
        return cls(t, np.zeros(3), IDENTITY_QUATERNION.copy())


@dataclass(frozen=True)
class PoseSeries:
    """Timestamped SE(3) trajectory relative to a fixed task frame."""

    t: np.ndarray
    p: np.ndarray
    q: np.ndarray
    source_rate: float | None = None
    recording_id: str = ""

    def __post_init__(self):
        t = np.atleast_1d(as_float_array(self.t))
        if t.size == 0:
            raise EmptySeries("pose series has no samples")
        if t.size < 2:
            raise SeriesTooShort("pose series needs at least 2 samples")
        p = as_float_array(self.p, (t.size, 3), "p")
        q = as_float_array(self.q, (t.size, 4), "q")
        check_strictly_increasing(t)
        check_finite(t, "t")
        check_finite(p, "p")
        check_finite(q, "q")
        norms = np.linalg.norm(q, axis=1)
        if np.any(np.abs(norms - 1.0) > INGEST_NORM_TOL):
            worst = float(np.max(np.abs(norms - 1.0)))
            raise NonUnitQuaternion(
                f"quaternion rows deviate from unit norm by up to {worst:.3g}")
        object.__setattr__(self, "t", t)
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q / norms[:, None])

    def __len__(self):
        return self.t.size

    @property
    def duration(self):
        return float(self.t[-1] - self.t[0])

    def sample(self, k):
        return PoseSample(float(self.t[k]), self.p[k].copy(), self.q[k].copy())


def enforce_sign_continuity(series: PoseSeries) -> PoseSeries:
    """Flip quaternion signs so consecutive samples have non-negative dot.

    The represented rotations are unchanged (q and -q are the same rotation);
    idempotent.
    """
    q = series.q
    dots = np.sum(q[:-1] * q[1:], axis=1)
    steps = np.where(dots < 0.0, -1.0, 1.0)
    flips = np.concatenate(([1.0], np.cumprod(steps)))
    return PoseSeries(series.t, series.p, q * flips[:, None],
                      series.source_rate, series.recording_id)


def express_in_frame(raw: PoseSeries, f_pose: PoseSample) -> PoseSeries:
    """Re-express a trajectory relative to the task frame ``f_pose``."""
    rf = quat_to_matrix(f_pose.q)
    p_rel = (raw.p - f_pose.p) @ rf  # row-wise R^T (p - p_f)
    qf_inv = quat_conjugate(f_pose.q)
    a0, av = qf_inv[0], qf_inv[1:]
    eta = a0 * raw.q[:, 0] - raw.q[:, 1:] @ av
    eps = (a0 * raw.q[:, 1:] + raw.q[:, :1] * av
           + np.cross(np.broadcast_to(av, (len(raw), 3)), raw.q[:, 1:]))
    q_rel = np.column_stack([eta, eps])
    return PoseSeries(raw.t, p_rel, q_rel, raw.source_rate, raw.recording_id)
