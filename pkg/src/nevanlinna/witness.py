"""Explicit disk-algebra functions whose derivatives have unbounded characteristic.

The witness is the lacunary series ``sum_{n>=1} b^-n z^(b^n)``. Its
coefficients are absolutely summable, so it is continuous on the closed disk,
while its derivative ``sum z^(b^n - 1)`` is a Hadamard-gap series whose
coefficients do not tend to zero.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import series as sc
from .errors import DomainError
from .series import CoefficientSeries, TailTerm

# Dense storage of degree b**K; keeps memory at a few hundred MB at most.
MAX_WITNESS_DEGREE = 2 ** 24


@dataclass(frozen=True)
class WitnessSpec:
    depth: int = 20
    gap_base: int = 2

    def __post_init__(self):
        if int(self.depth) != self.depth or self.depth < 1:
            raise DomainError("witness depth must be a positive integer")
        if int(self.gap_base) != self.gap_base or self.gap_base < 2:
            raise DomainError("gap base must be an integer >= 2")
        if self.gap_base ** self.depth > MAX_WITNESS_DEGREE:
            raise DomainError(f"witness degree {self.gap_base}**{self.depth} too large to store")


def lacunary_witness(spec: WitnessSpec = WitnessSpec()) -> CoefficientSeries:
    """Truncation ``sum_{n=1}^{K} b^-n z^(b^n)`` with the exact lacunary tail."""
    b, K = spec.gap_base, spec.depth
    a = np.zeros(b ** K + 1, complex)
    for n in range(1, K + 1):
        a[b ** n] = float(b) ** -n
    return CoefficientSeries(a, (TailTerm(1.0, K + 1, gap_base=b),))


def rotated_witness(spec: WitnessSpec, w: float) -> CoefficientSeries:
    """``z -> witness(z e^{iw})``."""
    return sc.rotate(lacunary_witness(spec), w)


def genericity_perturbation(g: CoefficientSeries, N: int,
                            spec: WitnessSpec = WitnessSpec()) -> CoefficientSeries:
    """``g + witness / N``, within ``1/N`` of ``g`` in sup norm."""
    if int(N) != N or N < 1:
        raise DomainError("N must be a positive integer")
    return sc.axpy(g, 1.0 / N, lacunary_witness(spec))


def partial_sums(f: CoefficientSeries, degrees) -> list[CoefficientSeries]:
    """Exact polynomial truncations of ``f`` at each degree, tails dropped."""
    return [CoefficientSeries(f.coeffs[: d + 1]) for d in degrees]
