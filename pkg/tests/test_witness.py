import math

import numpy as np
import pytest

from nevanlinna import series as sc
from nevanlinna.characteristic import ArcWindow, FULL_CIRCLE, arc_log_integral, full_characteristic
from nevanlinna.errors import DomainError
from nevanlinna.series import polynomial
from nevanlinna.witness import (
    WitnessSpec,
    genericity_perturbation,
    lacunary_witness,
    partial_sums,
    rotated_witness,
)


def test_depth_one():
    f = lacunary_witness(WitnessSpec(1))
    assert f.isclose(polynomial(0, 0, 0.5), atol=0)
    assert f.tail_majorant == pytest.approx(0.5)


def test_depth_two():
    f = lacunary_witness(WitnessSpec(2))
    assert f.isclose(polynomial(0, 0, 0.5, 0, 0.25), atol=0)
    assert f.tail_majorant == pytest.approx(0.25)


def test_depth_twenty(witness20):
    assert witness20.degree == 2 ** 20
    assert witness20.abs_sum < 1
    assert witness20.support.tolist() == [2 ** n for n in range(1, 21)]


@pytest.mark.parametrize("K", [1, 3, 8, 20])
def test_disk_algebra_certificate(K):
    f = lacunary_witness(WitnessSpec(K))
    assert f.abs_sum + f.tail_majorant <= 1.0
    assert f.abs_sum + f.tail_majorant == pytest.approx(1.0)


def test_base_three_tail():
    f = lacunary_witness(WitnessSpec(3, gap_base=3))
    assert f.support.tolist() == [3, 9, 27]
    assert f.tail_majorant == pytest.approx(3.0 ** -3 / 2)


def test_derivative_structure(witness20_prime):
    nz = witness20_prime.support
    assert nz.tolist() == [2 ** n - 1 for n in range(1, 21)]
    assert np.all(witness20_prime.coeffs[nz] == 1.0)


@pytest.mark.parametrize("kw", [dict(depth=0), dict(gap_base=1), dict(depth=2.5), dict(depth=30)])
def test_invalid_spec(kw):
    with pytest.raises(DomainError):
        WitnessSpec(**kw)


def test_rotated_identity():
    spec = WitnessSpec(6)
    assert rotated_witness(spec, 0.0) == lacunary_witness(spec)


def test_rotated_half_turn_depth_one():
    # a_2 e^{2 i pi} = a_2
    assert rotated_witness(WitnessSpec(1), math.pi).isclose(polynomial(0, 0, 0.5), atol=1e-15)


@pytest.mark.parametrize("w", [0.3, 2.0, -5.0])
def test_rotated_derivative_full_characteristic(w):
    spec = WitnessSpec(12)
    base = full_characteristic(sc.differentiate(lacunary_witness(spec)), 0.9)
    rot = full_characteristic(sc.differentiate(rotated_witness(spec, w)), 0.9)
    assert rot == pytest.approx(base, abs=2e-8)


def test_perturbation_of_zero_is_witness():
    spec = WitnessSpec(5)
    assert genericity_perturbation(polynomial(0), 1, spec).isclose(lacunary_witness(spec), atol=0)


def test_perturbation_converges_coefficientwise(rng):
    g = sc.random_polynomial(rng, 5)
    spec = WitnessSpec(6)
    gaps = [np.abs(genericity_perturbation(g, N, spec).coeffs[:6] - g.coeffs).max()
            for N in (1, 10, 100, 10 ** 6)]
    assert gaps == sorted(gaps, reverse=True)
    assert gaps[-1] <= 1e-6


@pytest.mark.parametrize("N", [1, 10, 100, 1000])
def test_perturbation_sup_distance(rng, N):
    g = sc.random_polynomial(rng, 10)
    p = genericity_perturbation(g, N)
    dist = np.max(np.abs(sc.evaluate_circle(p, 1.0, 4096) - sc.evaluate_circle(g, 1.0, 4096)))
    assert dist <= 1 / N + 1e-12


def test_perturbation_rejects_bad_n():
    with pytest.raises(DomainError):
        genericity_perturbation(polynomial(0), 0)


def test_deeper_truncations_do_not_shrink(witness20_prime):
    r = 0.99
    vals = []
    for K in (8, 12, 16):
        d = sc.differentiate(lacunary_witness(WitnessSpec(K)))
        v, err = arc_log_integral(sc.truncate(d, d.degree), r, ArcWindow(0, 1))
        vals.append(v)
    assert all(v >= 0 for v in vals)
    assert vals[0] <= vals[1] + 2e-8 and vals[1] <= vals[2] + 2e-8


def test_partial_sums():
    f = lacunary_witness(WitnessSpec(4))
    ps = partial_sums(f, [3, 8])
    assert ps[0] == polynomial(0, 0, 0.5)
    assert ps[1] == polynomial(0, 0, 0.5, 0, 0.25, 0, 0, 0, 0.125)
    assert all(p.is_polynomial for p in ps)
