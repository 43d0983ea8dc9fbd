"""Arc integrals of ``log+|f|`` on circles ``|z| = r`` and their radial growth.

Two quadrature rules are used. Full circles get the periodic trapezoid rule on
``M, 2M, 4M, ...`` equispaced points, each level computed in one folded-DFT
sweep. Arcs get a globally adaptive Simpson rule: every panel carries its own
error estimate and the worst panels are bisected until the total is below
``abs_tol``. The integrand is continuous but has kinks wherever ``|f| = 1``,
which is what the adaptivity is for.
"""
from __future__ import annotations

import csv
import enum
import io
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import series as sc
from .errors import DomainError, ToleranceNotMet
from .logplus import LOG2, log_plus
from .series import CoefficientSeries

TWO_PI = 2.0 * math.pi
MAX_TAIL = 0.1
MAX_CIRCLE_POINTS = 2 ** 24


@dataclass(frozen=True)
class ArcWindow:
    A: float
    B: float

    def __post_init__(self):
        if not (math.isfinite(self.A) and math.isfinite(self.B)) or not self.A < self.B:
            raise DomainError(f"window needs finite A < B, got ({self.A}, {self.B})")
        if self.B - self.A > TWO_PI * (1 + 1e-12):
            raise DomainError("window longer than a full turn")

    @property
    def width(self) -> float:
        return self.B - self.A

    def shifted(self, w: float) -> "ArcWindow":
        return ArcWindow(self.A + w, self.B + w)

    def contains(self, other: "ArcWindow") -> bool:
        return self.A <= other.A and other.B <= self.B


FULL_CIRCLE = ArcWindow(0.0, TWO_PI)


@dataclass(frozen=True)
class RadialSchedule:
    radii: tuple[float, ...]

    def __post_init__(self):
        radii = tuple(float(r) for r in self.radii)
        object.__setattr__(self, "radii", radii)
        if not radii:
            raise DomainError("empty radial schedule")
        if any(not 0.0 < r < 1.0 for r in radii):
            raise DomainError("radii must lie in (0, 1)")
        if any(b <= a for a, b in zip(radii, radii[1:])):
            raise DomainError("radii must be strictly increasing")

    @classmethod
    def geometric(cls, k_min: int = 1, k_max: int = 12) -> "RadialSchedule":
        """``r_k = 1 - 2^-k`` for ``k = k_min .. k_max``."""
        if k_min < 1 or k_max < k_min:
            raise DomainError("need 1 <= k_min <= k_max")
        return cls(tuple(1.0 - 2.0 ** -k for k in range(k_min, k_max + 1)))

    def __len__(self):
        return len(self.radii)

    def __iter__(self):
        return iter(self.radii)


@dataclass(frozen=True)
class QuadratureConfig:
    abs_tol: float = 1e-8
    max_refinement_depth: int = 30
    initial_panels: int = 16

    def __post_init__(self):
        if not self.abs_tol >= 1e-13:
            raise DomainError("abs_tol must be >= 1e-13")
        if not 1 <= self.max_refinement_depth <= 40:
            raise DomainError("max_refinement_depth must lie in [1, 40]")
        if self.initial_panels < 1:
            raise DomainError("initial_panels must be positive")


DEFAULT_CONFIG = QuadratureConfig()


@dataclass(frozen=True)
class CharacteristicCurve:
    window: ArcWindow
    samples: tuple[tuple[float, float, float], ...]
    failed: tuple[bool, ...] = ()

    def __post_init__(self):
        if not self.failed:
            object.__setattr__(self, "failed", (False,) * len(self.samples))

    @property
    def radii(self) -> np.ndarray:
        return np.array([s[0] for s in self.samples])

    @property
    def values(self) -> np.ndarray:
        return np.array([s[1] for s in self.samples])

    @property
    def errors(self) -> np.ndarray:
        return np.array([s[2] for s in self.samples])

    def is_strictly_increasing(self) -> bool:
        return bool(np.all(np.diff(self.values) > 0))

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["r", "value", "error_estimate"])
        for r, v, e in self.samples:
            w.writerow([repr(r), repr(v), repr(e)])
        return buf.getvalue()


class Verdict(str, enum.Enum):
    DIVERGENT = "DIVERGENT"
    BOUNDED = "BOUNDED"
    INCONCLUSIVE = "INCONCLUSIVE"


@dataclass(frozen=True)
class GrowthThresholds:
    """Heuristic cut-offs for :func:`growth_fit`; empirical, not a proof of anything."""

    slope: float = 0.05
    r_squared: float = 0.9
    plateau: float = 0.01


@dataclass(frozen=True)
class GrowthReport:
    slope: float
    intercept: float
    r_squared: float
    verdict: Verdict

    def to_dict(self) -> dict:
        return {"slope": self.slope, "intercept": self.intercept,
                "r_squared": self.r_squared, "verdict": self.verdict.value}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


# -- quadrature ---------------------------------------------------------------

def _integrand(f: CoefficientSeries, r: float):
    def g(theta):
        return log_plus(np.abs(sc.evaluate(f, r * np.exp(1j * theta))))
    return g


def _check_inputs(f: CoefficientSeries, r: float) -> None:
    if not 0.0 < r < 1.0:
        raise DomainError(f"radius must lie in (0, 1), got {r}")
    tb = sc.tail_bound_at(f, r)
    if not tb < MAX_TAIL:
        raise DomainError(f"series tail {tb:.3g} at r={r} too large; truncate adequately first")


def adaptive_simpson(func, a: float, b: float, cfg: QuadratureConfig = DEFAULT_CONFIG):
    """Globally adaptive Simpson rule for a vectorised ``func`` on ``[a, b]``.

    Each panel keeps five samples (ends, quarter points, midpoint). Its
    estimate is the two-halves Simpson sum with Richardson correction; its
    error estimate is a third of the halving difference, which still covers
    panels straddling a kink. At each sweep the panels whose
    errors exceed a cut are bisected together, the cut chosen so that the
    untouched panels account for at most half the tolerance.

    Returns ``(value, error_estimate)``; raises :class:`ToleranceNotMet`
    when the depth limit blocks further progress.
    """
    n0 = cfg.initial_panels
    h = np.full(n0, (b - a) / n0)
    left = a + (b - a) * np.arange(n0) / n0
    nodes = a + (b - a) * np.arange(4 * n0 + 1) / (4 * n0)
    fv = func(nodes)
    fa, fl, fm, fr = (fv[k:-1:4] for k in range(4))
    fb = fv[4::4]
    depth = np.zeros(n0, dtype=np.int64)

    while True:
        s1 = h / 6.0 * (fa + 4.0 * fm + fb)
        s2 = h / 12.0 * (fa + 4.0 * fl + 2.0 * fm + 4.0 * fr + fb)
        diff = s2 - s1
        # kink panels converge at O(h^2); /3 is the matching Richardson factor
        err = np.abs(diff) / 3.0
        total_err = math.fsum(err)
        if total_err <= cfg.abs_tol:
            break
        order = np.argsort(err, kind="stable")
        keep_sum = np.cumsum(err[order])
        n_keep = int(np.searchsorted(keep_sum, 0.5 * cfg.abs_tol, side="right"))
        refine = np.zeros(err.size, dtype=bool)
        refine[order[n_keep:]] = True
        refine &= depth < cfg.max_refinement_depth
        if not refine.any():
            value = math.fsum(s2 + diff / 15.0)
            raise ToleranceNotMet(
                f"error estimate {total_err:.3g} above {cfg.abs_tol:.3g} at depth limit",
                value, total_err)

        idx = np.flatnonzero(refine)
        ra, rh = left[idx], h[idx]
        q = rh / 4.0
        new = func(np.concatenate([ra + 0.5 * q, ra + 1.5 * q, ra + 2.5 * q, ra + 3.5 * q]))
        m = idx.size
        e1, e3, e5, e7 = new[:m], new[m:2 * m], new[2 * m:3 * m], new[3 * m:]
        keep = ~refine
        left = np.concatenate([left[keep], ra, ra + 2.0 * q])
        h = np.concatenate([h[keep], 2.0 * q, 2.0 * q])
        fa, fl, fm, fr, fb = (
            np.concatenate([fa[keep], fa[idx], fm[idx]]),
            np.concatenate([fl[keep], e1, e5]),
            np.concatenate([fm[keep], fl[idx], fr[idx]]),
            np.concatenate([fr[keep], e3, e7]),
            np.concatenate([fb[keep], fm[idx], fb[idx]]),
        )
        depth = np.concatenate([depth[keep], depth[idx] + 1, depth[idx] + 1])

    return math.fsum(s2 + diff / 15.0), total_err


def arc_log_integral(f: CoefficientSeries, r: float, window: ArcWindow,
                     cfg: QuadratureConfig = DEFAULT_CONFIG) -> tuple[float, float]:
    """``int_A^B log+|f(r e^{i theta})| d theta`` with its quadrature error estimate.

    No normalisation is applied. Pass ``differentiate(g)`` to integrate
    ``log+|g'|``. Truncation error of ``f`` is not included; see
    :func:`nevanlinna.series.tail_bound_at`.
    """
    _check_inputs(f, r)
    if f.support.size == 0:
        return 0.0, 0.0
    return adaptive_simpson(_integrand(f, r), window.A, window.B, cfg)


def circle_log_mean(f: CoefficientSeries, r: float,
                    cfg: QuadratureConfig = DEFAULT_CONFIG) -> tuple[float, float]:
    """Mean of ``log+|f|`` over ``|z| = r`` by trapezoid doubling.

    The series is first truncated so its tail moves the mean by at most
    ``abs_tol / 2``. Doubling stops once two consecutive differences are
    below ``abs_tol``; with kinks in the integrand a single small difference
    can be a coincidence. Returns ``(value, larger of those differences)``.
    """
    _check_inputs(f, r)
    f = sc.truncate_for(f, r, cfg.abs_tol / 4.0)
    M = sc.default_circle_size(f)
    prev = float(np.mean(log_plus(np.abs(sc.evaluate_circle(f, r, M)))))
    last_delta = delta = math.inf
    for _ in range(cfg.max_refinement_depth):
        if 2 * M > MAX_CIRCLE_POINTS:
            break
        M *= 2
        cur = float(np.mean(log_plus(np.abs(sc.evaluate_circle(f, r, M)))))
        delta = abs(cur - prev)
        if delta < cfg.abs_tol and last_delta < cfg.abs_tol:
            return cur, max(delta, last_delta)
        prev, last_delta = cur, delta
    raise ToleranceNotMet(f"trapezoid doubling did not settle below {cfg.abs_tol:.3g}",
                          prev, delta)


def full_characteristic(f: CoefficientSeries, r: float,
                        cfg: QuadratureConfig = DEFAULT_CONFIG) -> float:
    """``(1/2pi) int_0^{2pi} log+|f(r e^{i theta})| d theta``."""
    return circle_log_mean(f, r, cfg)[0]


# -- radial behaviour ---------------------------------------------------------

def _scan_one(f, r, window, cfg):
    g = sc.truncate_for(f, r, cfg.abs_tol / (2.0 * window.width))
    try:
        value, err = arc_log_integral(g, r, window, cfg)
        return (r, value, err), False
    except ToleranceNotMet as exc:
        return (r, exc.value, exc.error_estimate), True


def radial_scan(f: CoefficientSeries, window: ArcWindow, schedule: RadialSchedule,
                cfg: QuadratureConfig = DEFAULT_CONFIG, workers: int = 1) -> CharacteristicCurve:
    """One arc integral per radius, re-truncating the series at each radius.

    Radii are independent, so ``workers > 1`` evaluates them on a thread
    pool; results come back in schedule order either way.
    """
    radii = list(schedule)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            out = list(pool.map(lambda r: _scan_one(f, r, window, cfg), radii))
    else:
        out = [_scan_one(f, r, window, cfg) for r in radii]
    return CharacteristicCurve(window, tuple(s for s, _ in out), tuple(bad for _, bad in out))


def growth_fit(curve: CharacteristicCurve,
               thresholds: GrowthThresholds = GrowthThresholds()) -> GrowthReport:
    """Least-squares line of the curve against ``x = ln(1/(1-r))`` plus a verdict.

    DIVERGENT needs a clearly positive slope with a good linear fit; BOUNDED
    needs a flat slope and a settled second half. Anything else, including a
    curve with failed samples, is INCONCLUSIVE.
    """
    n = len(curve.samples)
    if n < 4:
        raise DomainError("growth_fit needs at least 4 samples")
    x = -np.log1p(-curve.radii)
    y = curve.values
    xm, ym = x.mean(), y.mean()
    sxx = float(np.sum((x - xm) ** 2))
    sxy = float(np.sum((x - xm) * (y - ym)))
    slope = sxy / sxx
    intercept = float(ym - slope * xm)
    ss_tot = float(np.sum((y - ym) ** 2))
    ss_res = float(np.sum((y - (intercept + slope * x)) ** 2))
    r2 = 1.0 if ss_tot == 0.0 else min(1.0, max(0.0, 1.0 - ss_res / ss_tot))

    tail = y[n // 2:]
    if any(curve.failed):
        verdict = Verdict.INCONCLUSIVE
    elif slope > thresholds.slope and r2 > thresholds.r_squared:
        verdict = Verdict.DIVERGENT
    elif abs(slope) <= thresholds.slope and float(tail.max() - tail.min()) < thresholds.plateau:
        verdict = Verdict.BOUNDED
    else:
        verdict = Verdict.INCONCLUSIVE
    return GrowthReport(float(slope), intercept, float(r2), verdict)


# -- direct checks of the functional's properties ------------------------------

def subadditivity_check(g: CoefficientSeries, h: CoefficientSeries, lam: complex, r: float,
                        window: ArcWindow, cfg: QuadratureConfig = DEFAULT_CONFIG):
    """Slack in ``T(g + lam h) <= T(g) + T(h) + (B-A)(log+|lam| + log 2)``.

    Returns ``(rhs - lhs, summed error estimates)``.
    """
    lhs, e0 = arc_log_integral(sc.axpy(g, lam, h), r, window, cfg)
    tg, e1 = arc_log_integral(g, r, window, cfg)
    th, e2 = arc_log_integral(h, r, window, cfg)
    rhs = tg + th + window.width * (log_plus(abs(complex(lam))) + LOG2)
    return rhs - lhs, e0 + e1 + e2


def continuity_check(f_sequence: Sequence[CoefficientSeries], f_limit: CoefficientSeries,
                     r: float, window: ArcWindow,
                     cfg: QuadratureConfig = DEFAULT_CONFIG) -> list[float]:
    """``|T(f_n)(r) - T(f_limit)(r)|`` for each member of the sequence."""
    ref, _ = arc_log_integral(f_limit, r, window, cfg)
    return [abs(arc_log_integral(fn, r, window, cfg)[0] - ref) for fn in f_sequence]


def window_monotonicity_check(f: CoefficientSeries, r: float, inner: ArcWindow,
                              outer: ArcWindow, cfg: QuadratureConfig = DEFAULT_CONFIG):
    """``(T_outer - T_inner, summed error estimates)`` for nested windows."""
    if not outer.contains(inner):
        raise DomainError("inner window must lie inside outer window")
    t_out, e_out = arc_log_integral(f, r, outer, cfg)
    t_in, e_in = arc_log_integral(f, r, inner, cfg)
    return t_out - t_in, e_out + e_in
