"""Small input-validation helpers shared across the package."""

from __future__ import annotations

import numpy as np


def as_float_array(x, shape=None, name="array"):
    """Convert to a float ndarray, optionally checking the exact shape."""
    a = np.asarray(x, dtype=float)
    if shape is not None and a.shape != shape:
        raise ValueError(f"{name} has shape {a.shape}, expected {shape}")
    return a


def check_finite(a, name="array"):
    if not np.all(np.isfinite(a)):
        raise ValueError(f"{name} contains non-finite values")


def check_strictly_increasing(t, name="t"):
    t = np.asarray(t, dtype=float)
    if t.ndim != 1:
        raise ValueError(f"{name} must be 1-D")
    if t.size >= 2 and not np.all(np.diff(t) > 0):
        raise ValueError(f"{name} must be strictly increasing")


def check_uniform_spacing(t, tol=1e-9, name="t"):
    """Return the grid step, raising if the spacing is not uniform."""
    t = np.asarray(t, dtype=float)
    d = np.diff(t)
    if d.size == 0:
        raise ValueError(f"{name} needs at least two samples")
    dt = float(d[0])
    if np.max(np.abs(d - dt)) > tol:
        raise ValueError(f"{name} is not uniformly spaced within {tol:g} s")
    return dt
