"""Root finding and gcds for complex polynomials.

Roots come from Aberth-Ehrlich simultaneous iteration started on a perturbed
circle; when the iteration stalls or leaves a large residual the companion
matrix eigenvalues are used instead.
"""
import logging
from typing import Optional, Sequence

import numpy as np

from src.errors import ZeroPolynomialError
from src.polynomials.polynomial import Polynomial

logger = logging.getLogger(__name__)

MAX_ITERATIONS = 500
CLUSTER_RADIUS = 1e-6
RESIDUAL_FACTOR = 1e-8
GCD_TOLERANCE = 1e-9


def _residual_ok(p: Polynomial, z: np.ndarray) -> bool:
    bound = RESIDUAL_FACTOR * (1.0 + p.abs_coeff_sum())
    return bool(np.all(np.abs(p(z)) <= bound))


def _aberth(monic: np.ndarray) -> Optional[np.ndarray]:
    n = len(monic) - 1
    derivative = monic[1:] * np.arange(1, n + 1)
    radius = abs(monic[0]) ** (1.0 / n) if monic[0] != 0 else 1.0
    angles = 2.0 * np.pi * np.arange(n) / n + 0.4
    z = radius * np.exp(1j * angles) * (1.0 + 0.01 * np.arange(n) / n)

    for iteration in range(MAX_ITERATIONS):
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            pv = np.polynomial.polynomial.polyval(z, monic)
            dpv = np.polynomial.polynomial.polyval(z, derivative)
            ratio = np.where(pv == 0, 0.0, pv / dpv)
            diff = z[:, None] - z[None, :]
            np.fill_diagonal(diff, 1.0)
            inverse = 1.0 / diff
            np.fill_diagonal(inverse, 0.0)
            step = ratio / (1.0 - ratio * inverse.sum(axis=1))
        if not np.all(np.isfinite(step)):
            logger.debug("Aberth iteration produced non-finite step at iteration %d", iteration)
            return None
        z = z - step
        if np.all(np.abs(step) <= 1e-15 * (1.0 + np.abs(z))):
            break
    return z


def _cluster(p: Polynomial, z: np.ndarray) -> np.ndarray:
    """Replace roots closer than CLUSTER_RADIUS by their centroid when that keeps the residual small."""
    z = z.copy()
    assigned = np.zeros(len(z), dtype=bool)
    for i in range(len(z)):
        if assigned[i]:
            continue
        members = np.flatnonzero((np.abs(z - z[i]) <= CLUSTER_RADIUS) & ~assigned)
        assigned[members] = True
        if len(members) > 1:
            centroid = z[members].mean()
            if _residual_ok(p, np.array([centroid])):
                z[members] = centroid
    return z


def roots(p: Polynomial) -> np.ndarray:
    """All deg(p) roots with multiplicity, sorted by (real, imag)."""
    if p.is_zero:
        raise ZeroPolynomialError("the zero polynomial has no finite root set")
    n = p.degree
    if n == 0:
        return np.zeros(0, dtype=complex)
    monic = p.coeffs / p.leading
    if n == 1:
        return np.array([-monic[0]], dtype=complex)

    z = _aberth(monic)
    if z is None or not _residual_ok(p, z):
        logger.debug("falling back to companion eigenvalues for degree %d", n)
        z = np.roots(p.coeffs[::-1]).astype(complex)
    z = _cluster(p, z)
    order = np.lexsort((z.imag, z.real))
    return z[order]


def root_margin(p: Polynomial) -> float:
    """min |root| - 1; +inf for nonzero constants."""
    r = roots(p)
    if len(r) == 0:
        return float("inf")
    return float(np.min(np.abs(r)) - 1.0)


def _trim(p: Polynomial, threshold: float) -> Polynomial:
    c = p.coeffs.copy()
    c[np.abs(c) <= threshold] = 0.0
    return Polynomial(c)


def polynomial_gcd(polys: Sequence[Polynomial], tol: float = GCD_TOLERANCE) -> Polynomial:
    """Monic gcd by coefficientwise Euclid; remainders below tol (relative) count as zero."""
    nonzero = [p for p in polys if not p.is_zero]
    if not nonzero:
        return Polynomial.zero()
    g = nonzero[0] / nonzero[0].max_abs_coeff()
    for p in nonzero[1:]:
        if g.degree == 0:
            break
        a, b = g, p / p.max_abs_coeff()
        if a.degree < b.degree:
            a, b = b, a
        while not b.is_zero:
            _, r = a.divmod(b)
            r = _trim(r, tol * max(1.0, a.max_abs_coeff()))
            a = b
            b = r / r.max_abs_coeff() if not r.is_zero else r
        g = a / a.max_abs_coeff()
    return g / g.leading
