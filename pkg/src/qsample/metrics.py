"""Distances between pure states and between distributions."""
from __future__ import annotations

import numpy as np

from .errors import InvalidStateError

NORM_TOL = 1e-8


def trace_distance(a, b) -> float:
    """sqrt(1 - |<a|b>|^2) for normalized pure states, clamped to [0, 1]."""
    a = np.asarray(a).ravel()
    b = np.asarray(b).ravel()
    for name, v in (("a", a), ("b", b)):
        if abs(np.linalg.norm(v) - 1.0) > NORM_TOL:
            raise InvalidStateError(f"state {name} has norm {np.linalg.norm(v):.12g}, expected 1")
    ov = abs(np.vdot(a, b)) ** 2
    return float(np.sqrt(np.clip(1.0 - ov, 0.0, 1.0)))


def tv_distance(p, q) -> float:
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    for name, v in (("p", p), ("q", q)):
        if abs(v.sum() - 1.0) > NORM_TOL:
            raise InvalidStateError(f"distribution {name} sums to {v.sum():.12g}, expected 1")
    return float(0.5 * np.abs(p - q).sum())
