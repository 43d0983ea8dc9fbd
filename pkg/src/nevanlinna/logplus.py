"""Positive part of the logarithm and the two basic inequalities it obeys.

Natural logarithms throughout. The additive inequality

    log+(s + t) <= log+ s + log+ t + c

holds with the sharp constant ``c = log 2``; the multiplicative one

    log+(s t) <= log+ s + log+ t

needs no constant. Both are exposed as residuals (right side minus left
side) so they can be checked pointwise and in bulk.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError

LOG2 = math.log(2.0)


@dataclass(frozen=True)
class InequalityResidual:
    value: float
    attained_at: tuple[float, float]


def log_plus(t):
    """``max(0, ln t)`` for ``t > 0`` and ``0`` otherwise; accepts arrays."""
    arr = np.asarray(t, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.where(arr > 1.0, np.log(np.where(arr > 1.0, arr, 1.0)), 0.0)
    return float(out) if out.ndim == 0 else out


def _check_nonneg(*xs):
    for x in xs:
        a = np.asarray(x, dtype=float)
        if np.any(np.isnan(a)) or np.any(a < 0.0):
            raise DomainError("arguments must be nonnegative")


def sum_inequality_residual(s, t, c: float = LOG2):
    """``log+ s + log+ t + c - log+(s + t)``; nonnegative when ``c >= log 2``."""
    _check_nonneg(s, t)
    s = np.asarray(s, dtype=float)
    t = np.asarray(t, dtype=float)
    # grouped so that swapping s and t gives a bitwise identical result
    out = (log_plus(s) + log_plus(t)) + c - log_plus(s + t)
    return float(out) if np.ndim(out) == 0 else out


def product_inequality_residual(s, t):
    """``log+ s + log+ t - log+(s t)``."""
    _check_nonneg(s, t)
    s = np.asarray(s, dtype=float)
    t = np.asarray(t, dtype=float)
    out = (log_plus(s) + log_plus(t)) - log_plus(s * t)
    return float(out) if np.ndim(out) == 0 else out


def minimal_constant_scan(grid_size: int, s_max: float) -> InequalityResidual:
    """Largest value of ``log+(s+t) - log+ s - log+ t`` on a grid of ``[0, s_max]^2``.

    The grid is ``{0, 1}`` together with ``grid_size`` log-spaced points in
    ``[1e-9, s_max]``. The exact point ``(1, 1)`` is evaluated first and wins
    ties, so the reported maximiser is deterministic.
    """
    if int(grid_size) != grid_size or grid_size < 2:
        raise DomainError("grid_size must be an integer >= 2")
    if not s_max >= 2.0 or not math.isfinite(s_max):
        raise DomainError("s_max must be finite and >= 2")
    pts = np.unique(np.concatenate(([0.0, 1.0], np.geomspace(1e-9, s_max, int(grid_size)))))
    best = log_plus(2.0)
    where = (1.0, 1.0)
    lp = log_plus(pts)
    for i, s in enumerate(pts):
        gap = log_plus(s + pts) - lp[i] - lp
        j = int(np.argmax(gap))
        if gap[j] > best:
            best = float(gap[j])
            where = (float(s), float(pts[j]))
    return InequalityResidual(best, where)


def random_pairs(rng: np.random.Generator, n: int, lo: float = 1e-9, hi: float = 1e9):
    """``n`` pairs drawn log-uniformly from ``[lo, hi]^2``."""
    u = rng.uniform(math.log(lo), math.log(hi), size=(2, n))
    return np.exp(u[0]), np.exp(u[1])
