"""Polynomial base solutions of the Bezout equation Σ_j φ_j e_j = 1."""
import enum
import logging
from typing import Optional, Tuple

import numpy as np

from src.corona.epsilon import common_roots_in_disk
from src.errors import CoronaConditionError, DegreeCapExceeded, ZeroPolynomialError
from src.polynomials.bounds import circle_grid
from src.polynomials.polynomial import Polynomial
from src.polynomials.roots import polynomial_gcd
from src.spaces.measure import FunctionTuple

logger = logging.getLogger(__name__)

RANK_THRESHOLD = 1e-10
EXACT_RESIDUAL = 1e-10


class BezoutMode(str, enum.Enum):
    EXACT = "EXACT"
    APPROX = "APPROX"


def default_degree_cap(phi: FunctionTuple) -> int:
    return 2 * max(phi.max_degree, 0) + 4


def _coefficient_system(phi: FunctionTuple, degree: int) -> np.ndarray:
    """Matrix of e -> coefficients of Σ φ_j e_j, unknowns ordered (j, m) with deg e_j <= degree."""
    rows = max(phi.max_degree, 0) + degree + 1
    n = len(phi)
    matrix = np.zeros((rows, n * (degree + 1)), dtype=complex)
    for j, p in enumerate(phi):
        c = p.coeffs
        for m in range(degree + 1):
            matrix[m : m + len(c), j * (degree + 1) + m] = c
    return matrix


def _min_norm_solve(matrix: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    """Minimum-norm solution by truncated SVD (singular values below RANK_THRESHOLD·s_max dropped)."""
    u, s, vh = np.linalg.svd(matrix, full_matrices=False)
    if s.size == 0 or s[0] == 0:
        return np.zeros(matrix.shape[1], dtype=complex)
    keep = s > RANK_THRESHOLD * s[0]
    projected = (u[:, keep].conj().T @ rhs) / s[keep]
    return vh[keep].conj().T @ projected


def _unpack(solution: np.ndarray, n: int, degree: int) -> FunctionTuple:
    width = degree + 1
    solution = solution.copy()
    # Round-off below this level would otherwise inflate the stored degrees.
    solution[np.abs(solution) <= 1e-15 * max(np.max(np.abs(solution), initial=0.0), 1e-300)] = 0.0
    return FunctionTuple(tuple(Polynomial(solution[j * width : (j + 1) * width]) for j in range(n)))


def _exact(phi: FunctionTuple, degree_cap: int) -> Optional[Tuple[FunctionTuple, int]]:
    for degree in range(degree_cap + 1):
        matrix = _coefficient_system(phi, degree)
        rhs = np.zeros(matrix.shape[0], dtype=complex)
        rhs[0] = 1.0
        x = _min_norm_solve(matrix, rhs)
        residual = float(np.max(np.abs(matrix @ x - rhs)))
        logger.debug("Bezout degree %d: residual %.3g", degree, residual)
        if residual <= EXACT_RESIDUAL:
            return _unpack(x, len(phi), degree), degree
    return None


def _boundary_least_squares(phi: FunctionTuple, degree: int) -> FunctionTuple:
    """Minimize Σ |Σ_j φ_j e_j - 1|^2 over a circle grid fine enough to determine the residual."""
    points = max(64, 4 * (phi.max_degree + degree + 1))
    z = circle_grid(points)
    powers = np.vander(z, degree + 1, increasing=True)
    blocks = [p(z)[:, None] * powers for p in phi]
    matrix = np.hstack(blocks)
    rhs = np.ones(points, dtype=complex)
    x, *_ = np.linalg.lstsq(matrix, rhs, rcond=RANK_THRESHOLD)
    return _unpack(x, len(phi), degree)


def bezout_base(phi: FunctionTuple, degree_cap: Optional[int] = None) -> Tuple[FunctionTuple, BezoutMode]:
    """Base solution E of Φ·E^T = 1.

    EXACT when the tuple is coprime: the smallest degree d <= degree_cap whose
    coefficient system is solvable, minimum-norm solution. APPROX when the only
    common roots lie outside the closed disk: boundary least squares at degree_cap.

    Args:
        phi: Tuple with at least one nonzero entry.
        degree_cap: Largest entry degree tried; default 2·max deg Φ + 4.

    Returns:
        The solution tuple and the mode it was found in.

    Raises:
        ZeroPolynomialError: Every entry of Φ is zero.
        CoronaConditionError: Φ has a common root in the closed disk.
        DegreeCapExceeded: No solvable degree up to the cap.
    """
    if phi.is_zero:
        raise ZeroPolynomialError("the zero tuple has no Bezout solution")
    cap = default_degree_cap(phi) if degree_cap is None else int(degree_cap)
    if cap < 0:
        raise DegreeCapExceeded(f"degree cap must be nonnegative, got {cap}")

    common = common_roots_in_disk(phi)
    if common:
        raise CoronaConditionError(f"common root(s) {list(common)} in the closed disk")

    gcd = polynomial_gcd(phi.entries)
    if gcd.degree >= 1:
        logger.warning("tuple has a common factor of degree %d outside the disk; using APPROX mode", gcd.degree)
        return _boundary_least_squares(phi, cap), BezoutMode.APPROX

    found = _exact(phi, cap)
    if found is None:
        raise DegreeCapExceeded(f"no exact Bezout solution with entry degree <= {cap}")
    e, degree = found
    logger.info("exact base solution at entry degree %d", degree)
    return e, BezoutMode.EXACT
