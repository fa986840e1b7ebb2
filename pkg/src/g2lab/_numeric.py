"""Trigonometric helpers that work on float arrays and on mpmath object arrays."""
from __future__ import annotations

import mpmath
import numpy as np

_mp_cos = np.frompyfunc(lambda t: mpmath.cos(2 * mpmath.pi * t), 1, 1)
_mp_sin = np.frompyfunc(lambda t: mpmath.sin(mpmath.pi * t), 1, 1)


def is_mp(a) -> bool:
    return isinstance(a, mpmath.mpf) or (isinstance(a, np.ndarray) and a.dtype == object)


def as_theta(theta) -> np.ndarray:
    """Array view of points with last axis 2; keeps mpmath object arrays as they are."""
    if isinstance(theta, np.ndarray):
        return theta
    arr = np.asarray(theta)
    if arr.dtype == object:
        return arr
    return arr.astype(float)


def cos2pi(t):
    """cos(2 pi t)."""
    if is_mp(t):
        return _mp_cos(t)
    return np.cos(2 * np.pi * t)


def sinpi(t):
    """sin(pi t)."""
    if is_mp(t):
        return _mp_sin(t)
    return np.sin(np.pi * t)


def pi_value(like):
    return mpmath.pi if is_mp(like) else np.pi


def to_mp(theta, dps: int = 30) -> np.ndarray:
    """Exact conversion of a float array into an mpmath object array (precision set by caller)."""
    arr = np.asarray(theta, dtype=float)
    out = np.empty(arr.shape, dtype=object)
    flat = out.reshape(-1)
    for i, v in enumerate(arr.reshape(-1)):
        flat[i] = mpmath.mpf(float(v))
    return out
