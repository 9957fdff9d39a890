import math

import numpy as np
import pytest

from src.errors import InputError, NonFiniteError, ResolutionError, ZeroPolynomialError
from src.polynomials.bounds import min_modulus_closed_disk, sup_circle, sup_circle_sum_sq
from src.polynomials.polynomial import Polynomial, UnitCirclePoint, divide_at, h2_inner, h2_norm_sq
from src.polynomials.roots import polynomial_gcd, root_margin, roots

CUBE = Polynomial([8.0, 12.0, 6.0, 1.0]) / 27.0


def test_canonical_form_strips_trailing_zeros():
    p = Polynomial([1.0, 2.0, 0.0, 0.0])
    assert p.degree == 1
    assert Polynomial([0.0, 0.0]).is_zero
    assert Polynomial.zero().degree == -1


def test_non_finite_coefficients_rejected():
    with pytest.raises(NonFiniteError):
        Polynomial([1.0, math.nan])


@pytest.mark.parametrize(
    "p, point, expected",
    [
        (Polynomial([1.0, 1.0]), 0.0, 1.0),
        (Polynomial.monomial(2), 1j, -1.0),
        (CUBE, 1.0, 1.0),
    ],
)
def test_evaluate(p, point, expected):
    assert p(point) == pytest.approx(expected, abs=1e-15)


def test_arithmetic_with_scalars_on_either_side(z):
    assert (1.0 - z).coeffs.tolist() == [1.0, -1.0]
    assert (2.0 + z).coeffs.tolist() == [2.0, 1.0]
    assert (np.float64(3.0) * z).coeffs.tolist() == [0.0, 3.0]
    assert ((z + 2.0) ** 3 / 27.0).allclose(CUBE)


def test_divmod_matches_product(z):
    q, r = (z ** 3 - 1.0).divmod(z - 1.0)
    assert q.allclose(z * z + z + 1.0)
    assert r.is_zero or r.max_abs_coeff() < 1e-15


def test_divide_at_examples(z):
    value, quotient = divide_at(z * z, 1.0)
    assert value == 1.0
    assert quotient.allclose(z + 1.0)

    value, quotient = divide_at(Polynomial.constant(3.0 - 1j), 1j)
    assert value == 3.0 - 1j
    assert quotient.is_zero

    zeta = UnitCirclePoint.at_angle(0.3)
    value, quotient = divide_at(z, zeta)
    assert value == pytest.approx(zeta.value)
    assert quotient.allclose(Polynomial.constant(1.0))


def test_divide_at_reconstructs(rng):
    p = Polynomial(rng.standard_normal(7) + 1j * rng.standard_normal(7))
    zeta = UnitCirclePoint.at_angle(1.1)
    value, quotient = divide_at(p, zeta)
    rebuilt = quotient * Polynomial([-zeta.value, 1.0]) + value
    assert rebuilt.distance(p) < 1e-13


def test_h2_norms_and_inner_products(z):
    assert h2_norm_sq(1.0 + z) == 2.0
    assert h2_norm_sq(Polynomial.zero()) == 0.0
    assert h2_norm_sq(Polynomial.monomial(5, 3.0)) == 9.0
    assert h2_inner(z, z) == 1.0
    assert h2_inner(Polynomial.constant(1.0), z) == 0.0
    assert h2_inner(1.0 + z, 1.0 - z) == 0.0


def test_unit_circle_point_renormalizes_and_rejects():
    point = UnitCirclePoint(complex(0.70710678, 0.70710678))
    assert abs(point.value) == pytest.approx(1.0, abs=1e-15)
    assert point.angle == pytest.approx(math.pi / 4, abs=1e-8)
    with pytest.raises(InputError) as info:
        UnitCirclePoint(2.0)
    assert info.value.code == "OFF_CIRCLE"


def test_exact_circle_points_kept_bit_for_bit():
    value = complex(math.cos(0.7), math.sin(0.7))
    if abs(abs(value) - 1.0) <= 4.0 * np.finfo(float).eps:
        assert UnitCirclePoint(value).value == value


def test_roots_examples(z):
    assert sorted(roots(z * z - 1.0).real.tolist()) == pytest.approx([-1.0, 1.0])
    assert np.allclose(roots(CUBE), -2.0, atol=1e-4)
    assert len(roots(Polynomial.constant(4.0))) == 0
    with pytest.raises(ZeroPolynomialError):
        roots(Polynomial.zero())


def test_root_margin(z):
    assert root_margin(z + 2.0) == pytest.approx(1.0)
    assert root_margin(CUBE) == pytest.approx(1.0, abs=1e-4)
    assert root_margin(Polynomial.constant(1.0)) == math.inf


def test_polynomial_gcd(z):
    g = polynomial_gcd([(z - 0.5) * (z + 3.0), (z - 0.5) * (z - 2.0)])
    assert g.degree == 1
    assert g(0.5) == pytest.approx(0.0, abs=1e-10)
    assert polynomial_gcd([z, 1.0 - z]).degree == 0


@pytest.mark.parametrize("d", [1, 2])
def test_sup_circle_monomial_is_tight(d):
    bound = sup_circle(Polynomial.monomial(d))
    assert bound.contains(1.0)
    assert bound.width <= 1e-6


@pytest.mark.parametrize("p, expected", [(Polynomial([1.0, 1.0]), 2.0), (CUBE, 1.0)])
def test_sup_circle_encloses(p, expected):
    assert sup_circle(p).contains(expected, slack=1e-12)


def test_sup_circle_resolution_too_small():
    with pytest.raises(ResolutionError):
        sup_circle(Polynomial.monomial(10), resolution=16)


def test_sup_circle_sum_sq_encloses(z):
    # |z|^2 + |1 - z|^2 peaks at z = -1.
    assert sup_circle_sum_sq([z, 1.0 - z]).contains(5.0, slack=1e-12)


def test_min_modulus_examples(z):
    assert min_modulus_closed_disk(z + 2.0).contains(1.0, slack=1e-12)
    assert min_modulus_closed_disk(Polynomial.constant(-3.0)).contains(3.0)
    assert min_modulus_closed_disk(CUBE).contains(1.0 / 27.0, slack=1e-12)
    inside = min_modulus_closed_disk(z - 0.5)
    assert inside.lower == 0.0
    with pytest.raises(ZeroPolynomialError):
        min_modulus_closed_disk(Polynomial.zero())


def test_certified_bounds_hold_on_samples(rng):
    for _ in range(5):
        p = Polynomial(rng.uniform(-1, 1, 6) + 1j * rng.uniform(-1, 1, 6)) + 4.0
        circle = np.exp(1j * rng.uniform(0, 2 * math.pi, 2000))
        disk = np.sqrt(rng.uniform(0, 1, 2000)) * circle
        assert np.all(np.abs(p(circle)) <= sup_circle(p).upper)
        assert np.all(np.abs(p(disk)) >= min_modulus_closed_disk(p).lower)
