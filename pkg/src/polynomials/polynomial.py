"""Exact-form polynomial arithmetic on the closed unit disk.

Polynomials are stored by ascending Taylor coefficients (index k is the
coefficient of z^k) in double precision. Values are immutable.
"""
import cmath
import math
from dataclasses import dataclass
from typing import Iterable, List, Sequence, Tuple, Union

import numpy as np

from src.errors import InputError, NonFiniteError

ComplexScalar = complex
Number = Union[int, float, complex, np.number]

# Points closer than this to the circle are renormalized when read from input.
CIRCLE_INPUT_TOLERANCE = 1e-6
# Stored circle points satisfy ||ζ| - 1| <= this.
CIRCLE_TOLERANCE = 1e-12
COEFF_TOLERANCE = 1e-12


def as_scalar(value: Number) -> complex:
    """Coerce a number to a finite Python complex."""
    z = complex(value)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise NonFiniteError(f"non-finite scalar {value!r}")
    return z


class Polynomial:
    """Complex polynomial in canonical form (no trailing zero coefficients).

    The zero polynomial has an empty coefficient array; its ``degree`` is
    reported as -1, standing in for -infinity.
    """

    __slots__ = ("_coeffs",)
    # numpy scalars on the left defer to the reflected operators below.
    __array_ufunc__ = None

    def __init__(self, coeffs: Iterable[Number] = ()):
        if isinstance(coeffs, Polynomial):
            arr = coeffs.coeffs.copy()
        else:
            source = coeffs if isinstance(coeffs, np.ndarray) else list(coeffs)
            arr = np.atleast_1d(np.asarray(source, dtype=complex)).ravel().copy()
        if not np.all(np.isfinite(arr)):
            raise NonFiniteError("polynomial coefficients must be finite")
        nonzero = np.flatnonzero(arr)
        arr = arr[: nonzero[-1] + 1] if nonzero.size else arr[:0]
        arr.setflags(write=False)
        self._coeffs = arr

    # Construction helpers
    @classmethod
    def zero(cls) -> "Polynomial":
        return cls(())

    @classmethod
    def constant(cls, c: Number) -> "Polynomial":
        return cls([as_scalar(c)])

    @classmethod
    def monomial(cls, k: int, c: Number = 1.0) -> "Polynomial":
        coeffs = np.zeros(k + 1, dtype=complex)
        coeffs[k] = as_scalar(c)
        return cls(coeffs)

    @classmethod
    def from_roots(cls, roots: Sequence[Number], leading: Number = 1.0) -> "Polynomial":
        result = cls.constant(leading)
        for r in roots:
            result = result * cls([-complex(r), 1.0])
        return result

    # Basic properties
    @property
    def coeffs(self) -> np.ndarray:
        return self._coeffs

    @property
    def degree(self) -> int:
        return len(self._coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return len(self._coeffs) == 0

    @property
    def leading(self) -> complex:
        return complex(self._coeffs[-1]) if len(self._coeffs) else 0j

    def max_abs_coeff(self) -> float:
        return float(np.max(np.abs(self._coeffs))) if len(self._coeffs) else 0.0

    def abs_coeff_sum(self, derivative_order: int = 0) -> float:
        """Σ_k k(k-1)...(k-r+1)|c_k|, an upper bound for sup_{|z|<=1} |p^{(r)}(z)|."""
        if self.is_zero:
            return 0.0
        k = np.arange(len(self._coeffs), dtype=float)
        weight = np.ones_like(k)
        for r in range(derivative_order):
            weight = weight * np.clip(k - r, 0.0, None)
        return float(np.sum(weight * np.abs(self._coeffs)))

    # Evaluation
    def __call__(self, z):
        return evaluate(self, z)

    def derivative(self) -> "Polynomial":
        if self.degree < 1:
            return Polynomial.zero()
        k = np.arange(1, len(self._coeffs))
        return Polynomial(self._coeffs[1:] * k)

    # Arithmetic
    def _padded(self, other: "Polynomial") -> Tuple[np.ndarray, np.ndarray]:
        n = max(len(self._coeffs), len(other.coeffs))
        a = np.zeros(n, dtype=complex)
        b = np.zeros(n, dtype=complex)
        a[: len(self._coeffs)] = self._coeffs
        b[: len(other.coeffs)] = other.coeffs
        return a, b

    @staticmethod
    def _coerce(other) -> "Polynomial":
        if isinstance(other, Polynomial):
            return other
        return Polynomial.constant(other)

    def __add__(self, other) -> "Polynomial":
        a, b = self._padded(self._coerce(other))
        return Polynomial(a + b)

    __radd__ = __add__

    def __sub__(self, other) -> "Polynomial":
        a, b = self._padded(self._coerce(other))
        return Polynomial(a - b)

    def __rsub__(self, other) -> "Polynomial":
        return self._coerce(other) - self

    def __neg__(self) -> "Polynomial":
        return Polynomial(-self._coeffs)

    def __mul__(self, other) -> "Polynomial":
        if not isinstance(other, Polynomial):
            return Polynomial(self._coeffs * as_scalar(other))
        if self.is_zero or other.is_zero:
            return Polynomial.zero()
        return Polynomial(np.convolve(self._coeffs, other.coeffs))

    __rmul__ = __mul__

    def __truediv__(self, other: Number) -> "Polynomial":
        return Polynomial(self._coeffs / as_scalar(other))

    def __pow__(self, exponent: int) -> "Polynomial":
        if exponent < 0:
            raise ValueError("negative powers are not polynomials")
        result = Polynomial.constant(1.0)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def divmod(self, divisor: "Polynomial") -> Tuple["Polynomial", "Polynomial"]:
        """Euclidean division; raises ZeroDivisionError for a zero divisor."""
        if divisor.is_zero:
            raise ZeroDivisionError("division by the zero polynomial")
        if self.degree < divisor.degree:
            return Polynomial.zero(), self
        q, r = np.polynomial.polynomial.polydiv(self._coeffs, divisor.coeffs)
        return Polynomial(q), Polynomial(r)

    def taylor_at(self, center: Number, order: int) -> np.ndarray:
        """Coefficients t_j = p^{(j)}(center)/j! for j < order (repeated synthetic division)."""
        out = np.zeros(order, dtype=complex)
        current = self
        for j in range(order):
            value, current = divide_at(current, center)
            out[j] = value
        return out

    # Comparison helpers
    def distance(self, other: "Polynomial") -> float:
        """Max coefficientwise absolute difference."""
        a, b = self._padded(other)
        return float(np.max(np.abs(a - b))) if len(a) else 0.0

    def allclose(self, other: "Polynomial", tol: float = COEFF_TOLERANCE) -> bool:
        scale = max(1.0, self.max_abs_coeff(), other.max_abs_coeff())
        return self.distance(other) <= tol * scale

    def to_pairs(self) -> List[List[float]]:
        return [[float(c.real), float(c.imag)] for c in self._coeffs]

    def __len__(self) -> int:
        return len(self._coeffs)

    def __repr__(self) -> str:
        if self.is_zero:
            return "Polynomial(0)"
        terms = ", ".join(f"{c:.6g}" for c in self._coeffs)
        return f"Polynomial([{terms}])"


@dataclass(frozen=True)
class UnitCirclePoint:
    """A point ζ of the unit circle, renormalized on construction."""

    value: complex

    def __post_init__(self):
        z = as_scalar(self.value)
        modulus = abs(z)
        if abs(modulus - 1.0) > CIRCLE_INPUT_TOLERANCE:
            raise InputError(f"point {z} is off the unit circle (|z| = {modulus:.3g})", code="OFF_CIRCLE")
        # Points already on the circle to working precision are kept bit-for-bit.
        if abs(modulus - 1.0) > 4.0 * np.finfo(float).eps:
            z = z / modulus
        object.__setattr__(self, "value", z)

    @classmethod
    def at_angle(cls, theta: float) -> "UnitCirclePoint":
        return cls(cmath.exp(1j * theta))

    @property
    def angle(self) -> float:
        return cmath.phase(self.value)

    def __complex__(self) -> complex:
        return self.value


def _point(zeta) -> complex:
    return zeta.value if isinstance(zeta, UnitCirclePoint) else complex(zeta)


def evaluate(p: Polynomial, z):
    """Horner evaluation of Σ c_k z^k; accepts scalars or numpy arrays."""
    if p.is_zero:
        return np.zeros_like(np.asarray(z, dtype=complex)) if np.ndim(z) else 0j
    value = np.polynomial.polynomial.polyval(z, p.coeffs)
    return complex(value) if np.ndim(value) == 0 else value


def divide_at(p: Polynomial, zeta) -> Tuple[complex, Polynomial]:
    """Synthetic division: p(z) = value + (z - ζ)·quotient(z)."""
    z0 = _point(zeta)
    c = p.coeffs
    n = len(c)
    if n == 0:
        return 0j, Polynomial.zero()
    if n == 1:
        return complex(c[0]), Polynomial.zero()
    quotient = np.zeros(n - 1, dtype=complex)
    quotient[-1] = c[-1]
    for k in range(n - 2, 0, -1):
        quotient[k - 1] = c[k] + z0 * quotient[k]
    value = complex(c[0] + z0 * quotient[0])
    return value, Polynomial(quotient)


def h2_norm_sq(p: Polynomial) -> float:
    """Hardy-space norm squared, Σ|c_k|^2 (Parseval)."""
    return float(np.sum(np.abs(p.coeffs) ** 2))


def h2_inner(p: Polynomial, q: Polynomial) -> complex:
    """⟨p, q⟩_{H^2} = Σ c_k(p)·conj(c_k(q))."""
    n = min(len(p), len(q))
    if n == 0:
        return 0j
    return complex(np.sum(p.coeffs[:n] * np.conj(q.coeffs[:n])))
