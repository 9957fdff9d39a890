"""Certification of the corona condition inf_{|z|<=1} Σ_j |φ_j(z)|^2 >= ε^2 > 0."""
import logging
import math
from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np

from src.polynomials.bounds import DiskInfimum, certified_disk_infimum, min_modulus_closed_disk, taylor_at, taylor_table
from src.polynomials.roots import polynomial_gcd, roots
from src.spaces.measure import FunctionTuple

logger = logging.getLogger(__name__)

_EPS = np.finfo(float).eps
ROOT_DISK_TOLERANCE = 1e-9
COMMON_ROOT_RESIDUAL = 1e-6


@dataclass(frozen=True)
class EpsilonCertificate:
    """eps_sq_lower <= inf over the closed disk of Σ|φ_j|^2.

    A zero lower bound with no common roots means the scan was inconclusive.
    """

    eps_sq_lower: float
    grid_spacing: float
    gradient_bound: float
    common_roots_in_disk: Tuple[complex, ...] = field(default_factory=tuple)
    grid_min: Optional[float] = None
    refinements: int = 0

    def __post_init__(self):
        if self.eps_sq_lower < 0:
            raise ValueError("eps_sq_lower must be nonnegative")
        if self.eps_sq_lower > 0 and self.common_roots_in_disk:
            raise ValueError("a positive epsilon contradicts a common root in the disk")

    @property
    def epsilon(self) -> float:
        return math.sqrt(self.eps_sq_lower)

    @property
    def fails(self) -> bool:
        return bool(self.common_roots_in_disk)

    @property
    def inconclusive(self) -> bool:
        return self.eps_sq_lower == 0.0 and not self.common_roots_in_disk

    def to_dict(self) -> dict:
        return {
            "eps_sq_lower": self.eps_sq_lower,
            "grid_spacing": self.grid_spacing,
            "gradient_bound": self.gradient_bound,
            "common_roots_in_disk": [[z.real, z.imag] for z in self.common_roots_in_disk],
            "grid_min": self.grid_min,
            "refinements": self.refinements,
        }


def gradient_bound(phi: FunctionTuple) -> float:
    """G = 2·Σ_j (Σ_k |c_jk|)(Σ_k k|c_jk|), a Lipschitz constant of Σ|φ_j|^2 on the closed disk."""
    return 2.0 * sum(p.abs_coeff_sum() * p.abs_coeff_sum(1) for p in phi)


def common_roots_in_disk(phi: FunctionTuple) -> Tuple[complex, ...]:
    """Roots of the tuple's gcd lying in the closed disk, confirmed by evaluating every entry."""
    g = polynomial_gcd(phi.entries)
    if g.degree < 1:
        return ()
    found = []
    for r in roots(g):
        if abs(r) > 1.0 + ROOT_DISK_TOLERANCE:
            continue
        confirmed = all(
            abs(p(complex(r))) <= COMMON_ROOT_RESIDUAL * (1.0 + p.abs_coeff_sum()) for p in phi if not p.is_zero
        )
        if confirmed:
            found.append(complex(r))
    return tuple(found)


def _cell_bounds_factory(phi: FunctionTuple):
    tables = [taylor_table(p) for p in phi if not p.is_zero]
    order = max(len(t) for t in tables)
    lipschitz = gradient_bound(phi)
    slack = 16.0 * _EPS * (order + 1) * sum(p.abs_coeff_sum() ** 2 for p in phi)

    def cell_bounds(centers: np.ndarray, radii: np.ndarray):
        # coeffs[j, k, c]: k-th Taylor coefficient of φ_j at center c.
        coeffs = np.zeros((len(tables), order, len(centers)), dtype=complex)
        for j, table in enumerate(tables):
            coeffs[j, : len(table)] = taylor_at(table, centers)
        values = np.sum(np.abs(coeffs[:, 0]) ** 2, axis=0)

        a0_sq = values
        a1_sq = np.sum(np.abs(coeffs[:, 1]) ** 2, axis=0) if order > 1 else np.zeros(len(centers))
        cross = np.abs(np.sum(coeffs[:, 1] * np.conj(coeffs[:, 0]), axis=0)) if order > 1 else np.zeros(len(centers))
        with np.errstate(divide="ignore", invalid="ignore"):
            t_star = np.where(a1_sq > 0, np.minimum(radii, cross / a1_sq), radii)
        linear_min = np.clip(a0_sq - 2.0 * t_star * cross + t_star ** 2 * a1_sq, 0.0, None)
        tail = np.zeros(len(centers))
        for k in range(2, order):
            tail += np.linalg.norm(coeffs[:, k], axis=0) * radii ** k
        local = np.clip(np.sqrt(linear_min) - tail, 0.0, None) ** 2
        global_ = values - radii * lipschitz
        lowers = np.clip(np.maximum(local, global_) - slack, 0.0, None)
        return values, lowers

    return cell_bounds


def estimate_epsilon(phi: FunctionTuple, max_refinements: int = 6) -> EpsilonCertificate:
    """Certified lower bound for inf over the closed disk of Σ|φ_j|².

    Args:
        phi: The tuple.
        max_refinements: Halvings of the polar cells before giving up.

    Returns:
        An EpsilonCertificate; ``fails`` when a common root lies in the closed
        disk, ``inconclusive`` when the scan could not certify a positive bound.
    """
    lipschitz = gradient_bound(phi)
    if phi.is_zero:
        return EpsilonCertificate(0.0, 0.0, 0.0, common_roots_in_disk=(0j,))

    common = common_roots_in_disk(phi)
    if common:
        logger.info("corona condition fails: %d common root(s) in the closed disk", len(common))
        return EpsilonCertificate(0.0, 0.0, lipschitz, common_roots_in_disk=common)

    infimum: DiskInfimum = certified_disk_infimum(_cell_bounds_factory(phi), max_refinements=max_refinements)
    eps_sq = infimum.lower
    for p in phi:
        if not p.is_zero:
            eps_sq = max(eps_sq, min_modulus_closed_disk(p).lower ** 2)

    if eps_sq == 0.0:
        logger.warning("epsilon scan inconclusive after %d refinements (grid min %.3g)", infimum.refinements, infimum.grid_min)
    else:
        logger.debug("eps^2 >= %.12g (grid min %.12g, %d cells)", eps_sq, infimum.grid_min, infimum.cells)
    return EpsilonCertificate(
        eps_sq_lower=float(eps_sq),
        grid_spacing=infimum.finest_radius,
        gradient_bound=lipschitz,
        grid_min=infimum.grid_min,
        refinements=infimum.refinements,
    )
