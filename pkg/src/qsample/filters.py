"""Chebyshev gap filter: a polynomial in cos(theta) equal to 1 at theta = 0
and uniformly small for |theta| >= Delta.

The interval ``[-1, cos Delta]`` is mapped affinely onto ``[-1, 1]`` by
``m(c) = (2c + 1 - cos Delta) / (1 + cos Delta)`` and the filter is
``T_d(m(cos theta)) / T_d(m(1))``. Outside the gap it is bounded by
``1 / T_d(m(1))``, the attenuation reported as ``achieved_eps``.
"""
from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass

import numpy as np

from .errors import InvalidParameterError


def chebyshev_t(d: int, x):
    """T_d(x) for real x >= -1, using the cosh form above 1."""
    x = np.asarray(x, dtype=float)
    inside = np.abs(x) <= 1.0
    out = np.empty_like(x)
    out[inside] = np.cos(d * np.arccos(x[inside]))
    above = x > 1.0
    out[above] = np.cosh(d * np.arccosh(x[above]))
    below = x < -1.0
    out[below] = (-1) ** d * np.cosh(d * np.arccosh(-x[below]))
    return out


@dataclass(frozen=True)
class ChebyshevFilter:
    Delta: float
    eps_target: float
    d: int
    achieved_eps: float
    m1: float

    def __call__(self, theta):
        return eval_filter(self, theta)

    def to_json(self) -> str:
        return json.dumps({k: v for k, v in asdict(self).items() if k != "m1"})


def _map(Delta: float, c):
    cd = math.cos(Delta)
    return (2.0 * np.asarray(c) + 1.0 - cd) / (1.0 + cd)


def synthesize_filter(Delta: float, eps: float) -> ChebyshevFilter:
    """Lowest-degree Chebyshev filter with attenuation ``<= eps`` beyond ``Delta``."""
    if not (0.0 < Delta <= math.pi) or not math.isfinite(Delta):
        raise InvalidParameterError(f"Delta must lie in (0, pi], got {Delta!r}")
    if not (0.0 < eps < 1.0):
        raise InvalidParameterError(f"eps must lie in (0, 1), got {eps!r}")
    if 1.0 + math.cos(Delta) < 1e-15:
        # Delta = pi: (1 + cos theta)/2 vanishes on the whole filtered set.
        return ChebyshevFilter(Delta=Delta, eps_target=eps, d=1, achieved_eps=0.0, m1=math.inf)
    m1 = float(_map(Delta, 1.0))
    a = math.acosh(m1)
    d = max(1, math.ceil(math.acosh(1.0 / eps) / a))
    # Guard the ceiling against rounding in either direction.
    while d > 1 and math.cosh((d - 1) * a) >= 1.0 / eps:
        d -= 1
    while math.cosh(d * a) < 1.0 / eps:
        d += 1
    return ChebyshevFilter(Delta=Delta, eps_target=eps, d=d, achieved_eps=1.0 / math.cosh(d * a), m1=m1)


def eval_filter(filt: ChebyshevFilter, theta):
    """Filter value at eigenphase(s) ``theta``; real, even in theta."""
    c = np.cos(np.asarray(theta, dtype=float))
    if math.isinf(filt.m1):
        return 0.5 * (1.0 + c)
    x = _map(filt.Delta, c)
    # Inside the gap x can exceed 1 by rounding when theta ~ 0; cap at m1.
    x = np.minimum(x, filt.m1)
    out = chebyshev_t(filt.d, x) / math.cosh(filt.d * math.acosh(filt.m1))
    out = np.where(c == 1.0, 1.0, out)
    return out if out.ndim else float(out)


def indicator_filter(theta, tol: float = 1e-12):
    """Exact projector onto the 1-eigenspace: 1 at theta = 0, else 0."""
    return np.where(np.abs(np.asarray(theta, dtype=float)) <= tol, 1.0, 0.0)


def filter_degree_curve(Delta: float, eps_list) -> list[tuple[float, int]]:
    return [(float(e), synthesize_filter(Delta, e).d) for e in eps_list]
