"""Truncated power series on the closed unit disk.

A :class:`CoefficientSeries` holds Taylor coefficients ``a_0 .. a_N`` together
with a majorant for the neglected tail, so every evaluation can be paired with
a rigorous truncation bound at the radius where it is used.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, replace
from typing import Iterable, Sequence

import numpy as np

from .errors import DomainError

# Folding sums with more rows than this use compensated summation.
COMPENSATED_DEGREE = 2 ** 14
_DISK_SLACK = 1e-12


@dataclass(frozen=True)
class TailTerm:
    """One additive piece of a tail majorant.

    ``gap_base == 0`` describes a generic tail: the neglected coefficients
    start at exponent ``start`` and their moduli sum to at most ``weight``.
    ``gap_base == b > 1`` describes a lacunary tail with coefficient moduli
    ``weight * b**-n`` at exponents ``b**n`` for ``n >= start``.

    ``derivs`` counts how many times the represented tail has been
    differentiated.
    """

    weight: float
    start: int
    derivs: int = 0
    gap_base: int = 0

    def at(self, r: float) -> float:
        """Upper bound on the modulus of this tail piece on ``|z| = r``."""
        if self.weight == 0.0:
            return 0.0
        if self.gap_base:
            return self.weight * _lacunary_tail(self.gap_base, self.start, self.derivs, r)
        j = self.derivs
        if j == 0:
            return self.weight * r ** self.start
        if r >= 1.0:
            return math.inf
        if j == 1:
            # sup_{n>N} n r^(n-1) <= (N+1) r^N / (1-r), doubled for safety
            return 2.0 * self.weight * self.start * r ** (self.start - 1) / (1.0 - r)
        return self.weight * _falling_power_sup(self.start, j, r)

    def differentiated(self) -> "TailTerm":
        return replace(self, derivs=self.derivs + 1)

    def scaled(self, factor: float) -> "TailTerm":
        return replace(self, weight=self.weight * factor)


def _log_falling(n: int, j: int) -> float:
    # log of n (n-1) ... (n-j+1)
    return math.lgamma(n + 1) - math.lgamma(n - j + 1)


def _falling_power_sup(start: int, j: int, r: float) -> float:
    """``sup_{n >= start} n(n-1)...(n-j+1) r^(n-j)`` for ``0 <= r < 1``."""
    if r == 0.0:
        return float(math.factorial(j)) if start <= j else 0.0
    lr = math.log(r)
    # terms grow while (n+1) r > n+1-j, i.e. n+1 < j/(1-r)
    peak = max(start, math.ceil(j / (1.0 - r)) - 1)
    best = -math.inf
    for n in range(max(start, j, peak - 1), peak + 2):
        best = max(best, _log_falling(n, j) + (n - j) * lr)
    return math.exp(best)


def _lacunary_tail(base: int, start: int, j: int, r: float) -> float:
    """``sum_{n >= start} base^-n * D^j[z^(base^n)]`` majorised at ``|z| = r``."""
    if r >= 1.0:
        if j:
            return math.inf
        return base ** -start / (1.0 - 1.0 / base)
    if r == 0.0:
        return 0.0
    lr = math.log(r)
    total = 0.0
    n = start
    while True:
        e = base ** n
        if e >= j:
            log_term = -n * math.log(base) + _log_falling(e, j) + (e - j) * lr
            if log_term < -745.0 and e * -lr > j + 1:
                break
            total += math.exp(log_term)
        n += 1
    return total


def _as_tail(tail) -> tuple[TailTerm, ...]:
    if isinstance(tail, TailTerm):
        tail = (tail,)
    terms = tuple(tail)
    for t in terms:
        if not t.weight >= 0.0:
            raise DomainError(f"tail weight must be nonnegative, got {t.weight}")
    return tuple(t for t in terms if t.weight > 0.0)


class CoefficientSeries:
    """Truncated Taylor series ``sum a_n z^n`` plus a certified tail majorant.

    Parameters
    ----------
    coeffs : sequence of complex
        ``a_0 .. a_N``. Trailing zeros are kept as given.
    tail : float or sequence of TailTerm, optional
        A float ``B`` means the omitted coefficients satisfy
        ``sum_{n>N} |a_n| <= B``. ``0`` marks an exact polynomial.
    """

    __slots__ = ("coeffs", "tail", "_support")

    def __init__(self, coeffs: Iterable[complex], tail=0.0):
        arr = np.array(coeffs, dtype=np.complex128).ravel()
        if arr.size == 0:
            raise DomainError("a series needs at least one coefficient")
        if not np.all(np.isfinite(arr)):
            raise DomainError("coefficients must be finite")
        arr.setflags(write=False)
        self.coeffs = arr
        if isinstance(tail, (int, float)):
            if not tail >= 0.0 or math.isinf(tail):
                raise DomainError(f"tail bound must be finite and nonnegative, got {tail}")
            tail = (TailTerm(float(tail), arr.size),)
        self.tail = _as_tail(tail)
        self._support = None

    # -- basic properties -------------------------------------------------

    @property
    def degree(self) -> int:
        """Index of the last stored coefficient (``N``)."""
        return self.coeffs.size - 1

    @property
    def effective_degree(self) -> int:
        """Index of the last nonzero coefficient (0 for the zero series)."""
        nz = self.support
        return int(nz[-1]) if nz.size else 0

    @property
    def support(self) -> np.ndarray:
        if self._support is None:
            self._support = np.flatnonzero(self.coeffs)
        return self._support

    @property
    def tail_majorant(self) -> float:
        """Tail bound on the closed disk; ``inf`` for differentiated tails."""
        return sum(t.at(1.0) for t in self.tail)

    @property
    def abs_sum(self) -> float:
        return float(np.abs(self.coeffs).sum())

    @property
    def is_polynomial(self) -> bool:
        return not self.tail

    def certifies_disk_algebra(self) -> bool:
        """Absolute summability of the coefficients (sufficient, not necessary)."""
        return math.isfinite(self.abs_sum + self.tail_majorant)

    def trimmed(self) -> np.ndarray:
        return self.coeffs[: self.effective_degree + 1]

    def __eq__(self, other):
        if not isinstance(other, CoefficientSeries):
            return NotImplemented
        return np.array_equal(self.trimmed(), other.trimmed()) and self.tail == other.tail

    __hash__ = None

    def isclose(self, other: "CoefficientSeries", atol: float = 1e-12) -> bool:
        """Coefficientwise comparison, ignoring trailing zeros and tails."""
        n = max(self.coeffs.size, other.coeffs.size)
        a = np.zeros(n, complex)
        b = np.zeros(n, complex)
        a[: self.coeffs.size] = self.coeffs
        b[: other.coeffs.size] = other.coeffs
        return bool(np.all(np.abs(a - b) <= atol))

    def __repr__(self):
        return (f"CoefficientSeries(degree={self.degree}, nonzero={self.support.size}, "
                f"tail_majorant={self.tail_majorant:.3g})")

    # -- JSON ---------------------------------------------------------------

    def to_dict(self) -> dict:
        tail = self.tail_majorant
        if not math.isfinite(tail):
            raise ValueError("a radius-dependent (differentiated) tail has no JSON form")
        return {"coeffs": [[float(c.real), float(c.imag)] for c in self.coeffs],
                "tail": float(tail)}

    @classmethod
    def from_dict(cls, data: dict) -> "CoefficientSeries":
        try:
            raw = data["coeffs"]
            coeffs = [complex(float(re), float(im)) for re, im in raw]
            tail = float(data.get("tail", 0.0))
        except (KeyError, TypeError, ValueError) as exc:
            raise DomainError(f"malformed series literal: {exc}") from exc
        return cls(coeffs, tail)

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> "CoefficientSeries":
        return cls.from_dict(json.loads(text))


def polynomial(*coeffs: complex) -> CoefficientSeries:
    """Exact polynomial ``coeffs[0] + coeffs[1] z + ...``."""
    return CoefficientSeries(coeffs, 0.0)


def monomial(n: int, c: complex = 1.0) -> CoefficientSeries:
    a = np.zeros(n + 1, complex)
    a[n] = c
    return CoefficientSeries(a)


# -- formal operations ------------------------------------------------------

def differentiate(f: CoefficientSeries) -> CoefficientSeries:
    """Termwise derivative; the tail becomes radius dependent."""
    a = f.coeffs
    if a.size == 1:
        out = np.zeros(1, complex)
    else:
        out = a[1:] * np.arange(1, a.size)
    return CoefficientSeries(out, tuple(t.differentiated() for t in f.tail))


def rotate(f: CoefficientSeries, w: float) -> CoefficientSeries:
    """Coefficients of ``z -> f(z e^{iw})``."""
    n = np.arange(f.coeffs.size)
    return CoefficientSeries(f.coeffs * np.exp(1j * (n * float(w))), f.tail)


def axpy(g: CoefficientSeries, lam: complex, h: CoefficientSeries) -> CoefficientSeries:
    """``g + lam * h`` with tail majorant ``tail(g) + |lam| tail(h)``."""
    lam = complex(lam)
    n = max(g.coeffs.size, h.coeffs.size)
    out = np.zeros(n, complex)
    out[: g.coeffs.size] += g.coeffs
    out[: h.coeffs.size] += lam * h.coeffs
    scale = abs(lam)
    return CoefficientSeries(out, g.tail + tuple(t.scaled(scale) for t in h.tail))


def truncate(f: CoefficientSeries, degree: int) -> CoefficientSeries:
    """Keep ``a_0 .. a_degree`` and fold the rest into the tail majorant."""
    if degree < 0:
        raise DomainError("truncation degree must be nonnegative")
    if degree >= f.degree:
        return f
    dropped = float(np.abs(f.coeffs[degree + 1:]).sum())
    return CoefficientSeries(f.coeffs[: degree + 1], f.tail + (TailTerm(dropped, degree + 1),))


def truncate_for(f: CoefficientSeries, r: float, budget: float) -> CoefficientSeries:
    """Shortest truncation whose tail bound at radius ``r`` stays within ``budget``.

    Returns ``f`` unchanged when its own tail already exceeds the budget.
    """
    _check_radius(r)
    room = budget - tail_bound_at(f, r)
    if room < 0.0:
        return f
    mags = np.abs(f.coeffs)
    # suffix[d] = sum_{n >= d} |a_n|
    suffix = np.cumsum(mags[::-1])[::-1]
    d = np.arange(1, f.coeffs.size)
    bound = suffix[1:] * np.power(float(r), d)
    ok = np.flatnonzero(bound <= room)
    if ok.size == 0:
        return f
    return truncate(f, int(ok[0]))


# -- evaluation ---------------------------------------------------------------

def _check_radius(r: float) -> None:
    if not 0.0 <= r <= 1.0:
        raise DomainError(f"radius must lie in [0, 1], got {r}")


def evaluate(f: CoefficientSeries, z):
    """Nested (Horner) evaluation of the stored polynomial at ``z``.

    ``z`` may be a scalar or an array. Runs of zero coefficients are skipped
    by raising ``z`` to the gap length, so sparse series cost one step per
    nonzero term.
    """
    z = np.asarray(z, dtype=np.complex128)
    if z.size and np.max(np.abs(z)) > 1.0 + _DISK_SLACK:
        raise DomainError("evaluation point outside the closed unit disk")
    idx = f.support
    a = f.coeffs
    if idx.size == 0:
        out = np.zeros_like(z)
    else:
        gaps = np.diff(idx)
        acc = np.full_like(z, a[idx[-1]])
        if idx.size == idx[-1] - idx[0] + 1:
            for k in range(idx.size - 2, -1, -1):
                acc = acc * z + a[idx[k]]
        else:
            for k in range(idx.size - 2, -1, -1):
                acc = acc * z ** int(gaps[k]) + a[idx[k]]
        if idx[0]:
            acc = acc * z ** int(idx[0])
        out = acc
    return complex(out) if out.ndim == 0 else out


def default_circle_size(f: CoefficientSeries) -> int:
    n1 = f.effective_degree + 1
    return max(1024, 4 * (-(-n1 // 1024)) * 1024)


def _neumaier_rows(rows: np.ndarray) -> np.ndarray:
    total = np.zeros(rows.shape[1], dtype=rows.dtype)
    comp = np.zeros_like(total)
    for row in rows:
        t = total + row
        big = np.abs(total.real) >= np.abs(row.real)
        comp.real += np.where(big, (total.real - t.real) + row.real, (row.real - t.real) + total.real)
        big = np.abs(total.imag) >= np.abs(row.imag)
        comp.imag += np.where(big, (total.imag - t.imag) + row.imag, (row.imag - t.imag) + total.imag)
        total = t
    return total + comp


def fold_coefficients(f: CoefficientSeries, r: float, M: int) -> np.ndarray:
    """``c_j = sum_{n = j mod M} a_n r^n`` for ``j = 0 .. M-1``."""
    a = f.trimmed()
    weighted = a * np.power(float(r), np.arange(a.size))
    if a.size <= M:
        out = np.zeros(M, complex)
        out[: a.size] = weighted
        return out
    rows = -(-a.size // M)
    padded = np.zeros(rows * M, complex)
    padded[: a.size] = weighted
    padded = padded.reshape(rows, M)
    if a.size - 1 > COMPENSATED_DEGREE:
        return _neumaier_rows(padded)
    return padded.sum(axis=0)


def evaluate_circle(f: CoefficientSeries, r: float, M: int | None = None) -> np.ndarray:
    """Values ``f(r e^{2 pi i k / M})`` for ``k = 0 .. M-1`` by folded DFT."""
    _check_radius(r)
    if M is None:
        M = default_circle_size(f)
    if M < 1:
        raise DomainError("circle size must be a positive integer")
    c = fold_coefficients(f, r, int(M))
    return np.fft.ifft(c, norm="forward")


def tail_bound_at(f: CoefficientSeries, r: float) -> float:
    """Bound on the modulus of the neglected tail on ``|z| = r``."""
    _check_radius(r)
    return float(sum(t.at(r) for t in f.tail))


def sup_norm_estimate(f: CoefficientSeries, M: int = 4096, r: float = 1.0) -> float:
    """Largest modulus on an ``M``-point grid of ``|z| = r``."""
    return float(np.max(np.abs(evaluate_circle(f, r, M))))


def random_polynomial(rng: np.random.Generator, degree: int, scale: float = 1.0) -> CoefficientSeries:
    """Polynomial with independent standard complex normal coefficients."""
    a = rng.standard_normal(degree + 1) + 1j * rng.standard_normal(degree + 1)
    return CoefficientSeries(scale * a / math.sqrt(2.0))


def as_series(obj: "CoefficientSeries | Sequence[complex]") -> CoefficientSeries:
    return obj if isinstance(obj, CoefficientSeries) else CoefficientSeries(obj)
