"""Certified enclosures of sup/inf quantities on the circle and the closed disk.

Circle bounds evaluate on a uniform grid and correct with Bernstein's
inequality, so they hold without interval arithmetic. Disk infima use polar
cells refined where the enclosure is not yet conclusive.
"""
import logging
import math
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from src.errors import ResolutionError, ZeroPolynomialError
from src.polynomials.polynomial import Polynomial
from src.polynomials.roots import roots

logger = logging.getLogger(__name__)

DEFAULT_GRID = 4096
_EPS = np.finfo(float).eps


@dataclass(frozen=True)
class CertifiedBound:
    """Rigorous enclosure lower <= true value <= upper."""

    lower: float
    upper: float
    method: str

    def __post_init__(self):
        if not (math.isfinite(self.lower) and math.isfinite(self.upper)):
            raise ValueError(f"certified bounds must be finite, got [{self.lower}, {self.upper}]")
        if self.lower > self.upper:
            raise ValueError(f"inverted enclosure [{self.lower}, {self.upper}]")

    @property
    def width(self) -> float:
        return self.upper - self.lower

    def contains(self, value: float, slack: float = 0.0) -> bool:
        return self.lower - slack <= value <= self.upper + slack

    def to_dict(self) -> dict:
        return {"lower": self.lower, "upper": self.upper, "method": self.method}


def default_resolution(degree: int) -> int:
    return max(DEFAULT_GRID, 64 * max(degree, 0))


def evaluation_slack(p: Polynomial) -> float:
    """Bound on the floating error of one Horner evaluation on the closed disk."""
    if p.degree <= 0:
        return 0.0
    return 8.0 * _EPS * (p.degree + 1) * p.abs_coeff_sum()


def circle_grid(resolution: int) -> np.ndarray:
    return np.exp(2j * np.pi * np.arange(resolution) / resolution)


def _check_resolution(degree: int, resolution: int) -> None:
    if resolution <= math.pi * degree:
        raise ResolutionError(
            f"resolution {resolution} too small for degree {degree} (need N > pi*deg = {math.pi * degree:.1f})"
        )


def _trig_max_upper(grid_max: float, degree: int, resolution: int) -> float:
    """Upper bound for the max of a nonnegative trigonometric polynomial of the given degree.

    First order: |g(θ) - g(θ_k)| <= δ·deg·max g. Second order at the maximizer
    (g' = 0 there): g(θ_k) >= max g·(1 - δ²deg²/2).
    """
    if degree <= 0:
        return grid_max
    delta = math.pi / resolution
    candidates = []
    if degree * delta < 1.0:
        candidates.append(grid_max / (1.0 - degree * delta))
    second = 0.5 * (degree * delta) ** 2
    if second < 1.0:
        candidates.append(grid_max / (1.0 - second))
    return min(candidates) if candidates else math.inf


def sup_circle(p: Polynomial, resolution: Optional[int] = None) -> CertifiedBound:
    """Enclosure of sup_{|z|=1} |p(z)|."""
    d = max(p.degree, 0)
    n = resolution or default_resolution(d)
    _check_resolution(d, n)
    if p.is_zero:
        return CertifiedBound(0.0, 0.0, f"grid-{n}:exact")

    values = np.abs(p(circle_grid(n)))
    slack = evaluation_slack(p)
    grid_max = float(values.max())
    lower = max(0.0, grid_max - slack)
    top = grid_max + slack
    if d == 0:
        return CertifiedBound(lower, top, f"grid-{n}:constant")

    # Mean value + Bernstein: sup <= max_grid / (1 - π·deg/N).
    first = top / (1.0 - math.pi * d / n)
    # Second order on |p|^2, a trigonometric polynomial of the same degree.
    second = math.sqrt(_trig_max_upper(top * top, d, n))
    upper = min(first, second)
    return CertifiedBound(lower, max(upper, lower), f"grid-{n}:bernstein")


def sup_circle_sum_sq(polys: Sequence[Polynomial], resolution: Optional[int] = None) -> CertifiedBound:
    """Enclosure of sup_{|z|=1} Σ_j |φ_j(z)|^2.

    The sum is subharmonic, so this also bounds the sup over the closed disk.
    """
    d = max([max(p.degree, 0) for p in polys] or [0])
    n = resolution or default_resolution(d)
    _check_resolution(d, n)
    z = circle_grid(n)
    total = np.zeros(n)
    slack = 0.0
    for p in polys:
        if p.is_zero:
            continue
        v = np.abs(p(z))
        total += v * v
        s = evaluation_slack(p)
        slack += s * (2.0 * p.abs_coeff_sum() + s)
    grid_max = float(total.max()) if n else 0.0
    lower = max(0.0, grid_max - slack)
    upper = _trig_max_upper(grid_max + slack, d, n)
    return CertifiedBound(lower, max(upper, lower), f"grid-{n}:bernstein-sumsq")


def min_modulus_closed_disk(p: Polynomial, resolution: Optional[int] = None) -> CertifiedBound:
    """Enclosure of min_{|z|<=1} |p(z)|.

    With a root in the closed disk the minimum is 0 and the upper field holds
    the residual scale at that root. Otherwise 1/p is analytic on the disk and
    the minimum sits on the circle.
    """
    if p.is_zero:
        raise ZeroPolynomialError("min modulus of the zero polynomial")
    d = p.degree
    if d == 0:
        c = abs(p.coeffs[0])
        return CertifiedBound(c, c, "constant")

    r = roots(p)
    inside = r[np.abs(r) <= 1.0]
    slack = evaluation_slack(p)
    if inside.size:
        residual = float(np.min(np.abs(p(inside)))) + slack
        return CertifiedBound(0.0, residual, "root-in-disk")

    n = resolution or default_resolution(d)
    _check_resolution(d, n)
    values = np.abs(p(circle_grid(n)))
    grid_min = float(values.min())
    sup = sup_circle(p, n).upper
    delta = math.pi / n
    base = max(0.0, grid_min - slack)
    first = base - delta * d * sup
    # At the minimizer of |p|^2 its derivative vanishes: g(θ_k) <= g_min + δ²deg²·sup²/2.
    second_sq = base * base - 0.5 * (delta * d * sup) ** 2
    second = math.sqrt(second_sq) if second_sq > 0 else 0.0
    lower = max(0.0, first, second)
    return CertifiedBound(lower, max(grid_min + slack, lower), f"grid-{n}:bernstein")


def taylor_table(p: Polynomial) -> List[np.ndarray]:
    """Coefficient arrays of p^{(k)}/k! for k = 0..deg, for vectorized Taylor expansion."""
    c = p.coeffs
    n = len(c)
    table = []
    for k in range(n):
        idx = np.arange(k, n)
        binom = np.array([math.comb(int(m), k) for m in idx], dtype=float)
        table.append(c[k:] * binom)
    return table


def taylor_at(table: List[np.ndarray], z: np.ndarray) -> np.ndarray:
    """Taylor coefficients at every center; shape (len(table), len(z))."""
    if not table:
        return np.zeros((0, len(z)), dtype=complex)
    return np.array([np.polynomial.polynomial.polyval(z, t) for t in table]).reshape(len(table), len(z))


@dataclass(frozen=True)
class DiskInfimum:
    lower: float
    grid_min: float
    argmin: complex
    finest_radius: float
    refinements: int
    cells: int


CellBounds = Callable[[np.ndarray, np.ndarray], Tuple[np.ndarray, np.ndarray]]


def certified_disk_infimum(
    cell_bounds: CellBounds,
    radial_cells: int = 32,
    angular_cells: int = 64,
    max_refinements: int = 6,
    refine_fraction: float = 0.9,
    max_cells: int = 1_000_000,
) -> DiskInfimum:
    """Certified lower bound for inf over the closed disk of a continuous function.

    ``cell_bounds(centers, radii)`` returns the function value at each cell
    center and a lower bound valid on the disk of the given radius around it
    (intersected with the closed unit disk). Cells whose bound falls below
    ``refine_fraction`` times the smallest sampled value are split in four,
    at most ``max_refinements`` times.
    """
    i = np.arange(radial_cells)
    j = np.arange(angular_cells)
    r0 = np.repeat(i / radial_cells, angular_cells)
    r1 = np.repeat((i + 1) / radial_cells, angular_cells)
    t0 = np.tile(2.0 * np.pi * j / angular_cells, radial_cells)
    t1 = np.tile(2.0 * np.pi * (j + 1) / angular_cells, radial_cells)

    grid_min = math.inf
    argmin = 0j
    accepted = math.inf
    total_cells = 0
    level = 0
    rho = np.zeros(0)
    while True:
        rc = 0.5 * (r0 + r1)
        tc = 0.5 * (t0 + t1)
        centers = rc * np.exp(1j * tc)
        rho = 0.5 * (r1 - r0) + 0.5 * r1 * (t1 - t0)
        values, lowers = cell_bounds(centers, rho)
        total_cells += len(centers)
        k = int(np.argmin(values))
        if values[k] < grid_min:
            grid_min = float(values[k])
            argmin = complex(centers[k])

        refine = lowers < refine_fraction * grid_min
        if np.any(~refine):
            accepted = min(accepted, float(lowers[~refine].min()))
        stop = (not np.any(refine)) or level >= max_refinements or 4 * int(refine.sum()) > max_cells
        if stop:
            if np.any(refine):
                accepted = min(accepted, float(lowers[refine].min()))
            break

        logger.debug("disk refinement level %d: splitting %d of %d cells", level, int(refine.sum()), len(refine))
        r0, r1, t0, t1 = r0[refine], r1[refine], t0[refine], t1[refine]
        rm, tm = 0.5 * (r0 + r1), 0.5 * (t0 + t1)
        r0, r1 = np.concatenate([r0, r0, rm, rm]), np.concatenate([rm, rm, r1, r1])
        t0, t1 = np.concatenate([t0, tm, t0, tm]), np.concatenate([tm, t1, tm, t1])
        level += 1

    return DiskInfimum(
        lower=max(0.0, accepted),
        grid_min=grid_min,
        argmin=argmin,
        finest_radius=float(rho.max()) if rho.size else 0.0,
        refinements=level,
        cells=total_cells,
    )
