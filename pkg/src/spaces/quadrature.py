"""Area-integral evaluation of the local Dirichlet integral.

    D_ζ(f) = ∫_D |f'(z)|^2 (1 - |z|^2)/|ζ - z|^2 dA(z),   dA = dx dy / π

The integrand is singular at ζ, so the polar tensor grid is graded
dyadically toward the circle (in s = 1 - r) and toward arg ζ (in angle).
Grading levels are added until two successive estimates agree to ``tol``.
"""
import logging
import math
from functools import lru_cache
from typing import Tuple

import numpy as np
from scipy import special

from src.errors import QuadratureError
from src.polynomials.polynomial import Polynomial, UnitCirclePoint

logger = logging.getLogger(__name__)

GAUSS_POINTS = 16
INITIAL_LEVEL = 8
LEVEL_STEP = 2
MAX_PANEL_WIDTH = math.pi / 8
MAX_CELLS = 2 ** 24


@lru_cache(maxsize=8)
def _gauss(n: int) -> Tuple[np.ndarray, np.ndarray]:
    x, w = special.roots_legendre(n)
    return x, w


def _panels_to_nodes(breaks: np.ndarray, n: int) -> Tuple[np.ndarray, np.ndarray]:
    x, w = _gauss(n)
    a, b = breaks[:-1], breaks[1:]
    half = 0.5 * (b - a)
    nodes = (0.5 * (a + b))[:, None] + half[:, None] * x[None, :]
    weights = half[:, None] * w[None, :]
    return nodes.ravel(), weights.ravel()


def _radial_breaks(level: int) -> np.ndarray:
    """Breakpoints in s = 1 - r: 0, 2^-level, ..., 1/4, 1/2, 1."""
    return np.concatenate([[0.0], 2.0 ** -np.arange(level, -1, -1)])


def _angular_breaks(level: int) -> np.ndarray:
    """Breakpoints in t = θ - arg ζ on [-π, π], graded toward t = 0."""
    positive = [0.0] + [math.pi * 2.0 ** -k for k in range(level, -1, -1)]
    refined = [positive[0]]
    for a, b in zip(positive[:-1], positive[1:]):
        pieces = max(1, int(math.ceil((b - a) / MAX_PANEL_WIDTH)))
        refined.extend(a + (b - a) * np.arange(1, pieces + 1) / pieces)
    positive = np.array(refined)
    return np.concatenate([-positive[::-1], positive[1:]])


def _estimate(derivative: Polynomial, alpha: float, level: int, n: int) -> Tuple[float, int]:
    s_breaks = _radial_breaks(level)
    t_breaks = _angular_breaks(level)
    s, ws = _panels_to_nodes(s_breaks, n)
    t, wt = _panels_to_nodes(t_breaks, n)
    r = 1.0 - s

    z = r[:, None] * np.exp(1j * (t[None, :] + alpha))
    fp = np.abs(derivative(z)) ** 2
    # |ζ - z|^2 = (1 - r)^2 + 4 r sin^2(t/2), written without cancellation near ζ.
    denominator = s[:, None] ** 2 + 4.0 * r[:, None] * np.sin(0.5 * t[None, :]) ** 2
    kernel = (s * (2.0 - s) * r)[:, None] / denominator
    total = np.sum(ws[:, None] * wt[None, :] * fp * kernel) / math.pi
    cells = (len(s_breaks) - 1) * (len(t_breaks) - 1)
    return float(total), cells


def local_dirichlet_quadrature(
    p: Polynomial,
    zeta,
    tol: float = 1e-5,
    gauss_points: int = GAUSS_POINTS,
    max_cells: int = MAX_CELLS,
) -> float:
    """Adaptive polar quadrature of D_ζ(p); independent of the synthetic-division formula.

    Args:
        p: The polynomial.
        zeta: Point of the unit circle.
        tol: Absolute change between successive levels that ends the refinement.
        gauss_points: Gauss-Legendre nodes per panel and direction.
        max_cells: Cell budget.

    Returns:
        The area-integral estimate of D_ζ(p).

    Raises:
        QuadratureError: The cell budget ran out; carries the last estimate.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    derivative = p.derivative()
    if derivative.is_zero:
        return 0.0
    point = zeta if isinstance(zeta, UnitCirclePoint) else UnitCirclePoint(zeta)
    alpha = point.angle

    level = INITIAL_LEVEL
    previous, _ = _estimate(derivative, alpha, level, gauss_points)
    while True:
        level += LEVEL_STEP
        current, cells = _estimate(derivative, alpha, level, gauss_points)
        change = abs(current - previous)
        logger.debug("quadrature level %d: estimate %.12g (change %.3g, %d cells)", level, current, change, cells)
        if change <= tol:
            return current
        if cells > max_cells or level >= 52:
            raise QuadratureError(
                f"quadrature did not reach tol {tol:g} (last change {change:.3g})",
                estimate=current,
                error_estimate=change,
            )
        previous = current
