import math

import pytest

from src.errors import InputError, QuadratureError
from src.polynomials.polynomial import Polynomial, UnitCirclePoint
from src.spaces.dirichlet import dmu_norm_sq, evaluation_bound_sq, local_dirichlet, tuple_dmu_norm_sq
from src.spaces.measure import AtomicMeasure, FunctionTuple
from src.spaces.multipliers import (
    estimate_multiplier_norm,
    mult_norm_lower,
    mult_norm_upper,
    product_inequality_check,
)
from src.spaces.quadrature import local_dirichlet_quadrature


def test_local_dirichlet_examples(z):
    for angle in (0.0, 1.0, -2.5):
        assert local_dirichlet(z, UnitCirclePoint.at_angle(angle)) == pytest.approx(1.0)
    assert local_dirichlet(Polynomial.constant(5.0), 1.0) == 0.0
    assert local_dirichlet(z * z, 1.0) == pytest.approx(2.0)


def test_evaluation_bound(rng):
    p = Polynomial(rng.standard_normal(5) + 1j * rng.standard_normal(5))
    zeta = UnitCirclePoint.at_angle(0.4)
    assert abs(p(zeta.value)) ** 2 <= evaluation_bound_sq(p, zeta) + 1e-12


@pytest.mark.parametrize(
    "p, quad_tol, expected",
    [
        (Polynomial.monomial(1), 1e-5, 1.0),
        (Polynomial.constant(2.0), 1e-5, 0.0),
        (Polynomial.monomial(2), 1e-5, 2.0),
    ],
)
def test_quadrature_matches_closed_form(p, quad_tol, expected):
    assert local_dirichlet_quadrature(p, 1.0, tol=quad_tol) == pytest.approx(expected, abs=1e-4)


def test_quadrature_off_axis(rng):
    p = Polynomial(rng.uniform(-1, 1, 5) + 1j * rng.uniform(-1, 1, 5))
    zeta = UnitCirclePoint.at_angle(2.0)
    exact = local_dirichlet(p, zeta)
    assert local_dirichlet_quadrature(p, zeta, tol=1e-6) == pytest.approx(exact, abs=max(1e-4, 1e-3 * exact))


def test_quadrature_cap_carries_estimate(z):
    with pytest.raises(QuadratureError) as info:
        local_dirichlet_quadrature(z ** 3, 1.0, tol=1e-300, max_cells=1)
    assert info.value.estimate > 0


def test_dmu_norm_examples(z):
    two_atoms = AtomicMeasure.from_points([(1.0, 2.0), (-1.0, 3.0)])
    assert dmu_norm_sq(Polynomial.constant(1.0), two_atoms) == pytest.approx(1.0)
    assert dmu_norm_sq(z, AtomicMeasure.dirac(1.0)) == pytest.approx(2.0)
    assert dmu_norm_sq(z, two_atoms) == pytest.approx(6.0)
    assert dmu_norm_sq(z, AtomicMeasure()) == pytest.approx(1.0)


def test_tuple_norm_examples(z):
    at_one = AtomicMeasure.dirac(1.0)
    assert tuple_dmu_norm_sq(FunctionTuple.of(1.0, 0.0), at_one) == pytest.approx(1.0)
    assert tuple_dmu_norm_sq(FunctionTuple.of(z, 1.0 - z), at_one) == pytest.approx(5.0)
    assert tuple_dmu_norm_sq(FunctionTuple.of(0.0), at_one) == 0.0


def test_measure_validation():
    with pytest.raises(InputError) as info:
        AtomicMeasure.dirac(1.0, weight=0.0)
    assert info.value.code == "NONPOSITIVE_WEIGHT"
    with pytest.raises(InputError) as info:
        AtomicMeasure.from_points([(1.0, 1.0), (1.0, 2.0)])
    assert info.value.code == "DUPLICATE_ATOM"


def test_mult_norm_upper_examples(z):
    at_one = AtomicMeasure.dirac(1.0)
    assert mult_norm_upper(FunctionTuple.of(1.0), at_one).upper == pytest.approx(math.sqrt(2.0))
    assert mult_norm_upper(FunctionTuple.of(0.0), at_one).upper == 0.0
    assert mult_norm_upper(FunctionTuple.of(z), at_one).upper == pytest.approx(math.sqrt(6.0), rel=1e-6)


def test_mult_norm_lower_examples(z):
    at_one = AtomicMeasure.dirac(1.0)
    assert mult_norm_lower(FunctionTuple.of(1.0), at_one, 4).lower >= 1.0 - 1e-12
    assert mult_norm_lower(FunctionTuple.of(0.3 - 0.4j), at_one, 4).lower >= 0.5 - 1e-12
    assert mult_norm_lower(FunctionTuple.of(z), at_one, 4).lower >= math.sqrt(2.0) - 1e-12


def test_multiplier_sandwich(rng, z):
    measure = AtomicMeasure.from_points([(UnitCirclePoint.at_angle(0.5), 1.0), (-1.0, 2.5)])
    phi = FunctionTuple.of(Polynomial(rng.uniform(-1, 1, 3)), 1.0 - z * z)
    estimate = estimate_multiplier_norm(phi, measure, trial_degree=5)
    assert 0.0 < estimate.lower <= estimate.upper
    assert estimate.to_dict()["trial_degree"] == 5


def test_product_inequalities(rng, z):
    zeta = UnitCirclePoint.at_angle(-0.8)
    for _ in range(20):
        phi = Polynomial(rng.uniform(-1, 1, 4) + 1j * rng.uniform(-1, 1, 4))
        f = Polynomial(rng.uniform(-1, 1, 4) + 1j * rng.uniform(-1, 1, 4))
        slacks = product_inequality_check(phi, f, zeta)
        assert slacks.c is None
        assert slacks.all_nonnegative


def test_product_inequality_when_f_vanishes(z):
    zeta = UnitCirclePoint.at_angle(1.3)
    f = (z - zeta.value) * (z + 0.5)
    slacks = product_inequality_check(2.0 - z * z, f, zeta)
    assert slacks.c is not None
    assert slacks.all_nonnegative
