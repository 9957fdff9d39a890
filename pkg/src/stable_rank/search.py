"""Bounded search for g such that F + g·H has no zeros in the closed disk.

Layers, tried in order:

1. g = 0 and constants on a small rational grid (skipped for deg H >= 2,
   where constant g cannot push every root out of the disk);
2. Hermite targets: u = S^m with S interpolating a branch of F^{1/m} at the
   roots of H, so that u ≡ F mod H and g = (u - F)/H is a polynomial;
3. seeded hill climbing on the smallest root modulus of F + g·H.
"""
import cmath
import itertools
import logging
import math
from dataclasses import dataclass
from typing import Iterator, List, Optional, Tuple

import numpy as np

from src.errors import BudgetError
from src.polynomials.polynomial import Polynomial
from src.polynomials.roots import polynomial_gcd, roots

logger = logging.getLogger(__name__)

ROOT_GROUPING = 1e-6
REMAINDER_TOLERANCE = 1e-8
MAX_BRANCH_COMBINATIONS = 256
CONSTANT_GRID_STEP = 0.25
CONSTANT_GRID_RADIUS = 2.0


@dataclass(frozen=True)
class SearchBudget:
    max_degree: int = 64
    max_iters: int = 2000
    seed: int = 0x5EED
    margin: float = 1e-3

    def __post_init__(self):
        if self.max_degree < 0:
            raise BudgetError(f"max_degree must be nonnegative, got {self.max_degree}")
        if self.max_iters < 0:
            raise BudgetError(f"max_iters must be nonnegative, got {self.max_iters}")
        if not (self.margin > 0 and math.isfinite(self.margin)):
            raise BudgetError(f"margin must be positive, got {self.margin}")

    def to_dict(self) -> dict:
        return {"max_degree": self.max_degree, "max_iters": self.max_iters, "seed": self.seed, "margin": self.margin}


def combination_margin(u: Polynomial) -> float:
    """min |root(u)| - 1, +inf for nonzero constants and -inf for the zero polynomial."""
    if u.is_zero:
        return -math.inf
    r = roots(u)
    return float(np.min(np.abs(r)) - 1.0) if len(r) else math.inf


def _constant_grid() -> List[complex]:
    steps = np.arange(-CONSTANT_GRID_RADIUS, CONSTANT_GRID_RADIUS + 1e-12, CONSTANT_GRID_STEP)
    values = [complex(a, b) for a in steps for b in steps if (a, b) != (0.0, 0.0)]
    return sorted(values, key=lambda c: (abs(c), c.real, c.imag))


def _group_roots(h: Polynomial) -> List[Tuple[complex, int]]:
    groups: List[List[complex]] = []
    for r in roots(h):
        for group in groups:
            if abs(group[0] - r) <= ROOT_GROUPING:
                group.append(complex(r))
                break
        else:
            groups.append([complex(r)])
    return [(complex(np.mean(g)), len(g)) for g in groups]


def _root_series(a: np.ndarray, alpha: float) -> np.ndarray:
    """Taylor coefficients of a(w)^alpha (principal branch at a[0]) by the power-series recurrence."""
    b = np.zeros(len(a), dtype=complex)
    b[0] = cmath.exp(alpha * cmath.log(a[0]))
    for n in range(1, len(a)):
        k = np.arange(1, n + 1)
        b[n] = np.sum(((alpha + 1.0) * k - n) * a[k] * b[n - k]) / (n * a[0])
    return b


def _hermite_interpolant(groups: List[Tuple[complex, int]], targets: List[np.ndarray]) -> Optional[Polynomial]:
    """The polynomial of degree < Σ m_k with prescribed Taylor coefficients at each node."""
    size = sum(m for _, m in groups)
    matrix = np.zeros((size, size), dtype=complex)
    rhs = np.zeros(size, dtype=complex)
    row = 0
    for (node, multiplicity), values in zip(groups, targets):
        for t in range(multiplicity):
            for j in range(t, size):
                matrix[row, j] = math.comb(j, t) * node ** (j - t)
            rhs[row] = values[t]
            row += 1
    try:
        coeffs = np.linalg.solve(matrix, rhs)
    except np.linalg.LinAlgError:
        return None
    if not np.all(np.isfinite(coeffs)):
        return None
    return Polynomial(coeffs)


def _quotient(u: Polynomial, f: Polynomial, h: Polynomial) -> Optional[Polynomial]:
    """(u - F)/H when the division is exact up to round-off."""
    q, r = (u - f).divmod(h)
    scale = max(1.0, u.max_abs_coeff(), f.max_abs_coeff())
    if r.max_abs_coeff() > REMAINDER_TOLERANCE * scale:
        return None
    return q


def _hermite_candidates(f: Polynomial, h: Polynomial, max_degree: int) -> Iterator[Polynomial]:
    n = h.degree
    if n == 0:
        q = _quotient(Polynomial.constant(1.0), f, h)
        if q is not None:
            yield q
        return
    groups = _group_roots(h)
    series = [f.taylor_at(node, multiplicity) for node, multiplicity in groups]
    if any(abs(s[0]) == 0 for s in series):
        return
    m = 1
    while m * (n - 1) - n <= max_degree or m == 1:
        base = [_root_series(s, 1.0 / m) for s in series]
        # Multiplying every branch by the same root of unity leaves S^m unchanged.
        choices = itertools.product(range(m), repeat=len(groups) - 1)
        for count, branch in enumerate(choices):
            if count >= MAX_BRANCH_COMBINATIONS:
                break
            targets = [base[0]] + [b * cmath.exp(2j * math.pi * l / m) for b, l in zip(base[1:], branch)]
            s = _hermite_interpolant(groups, targets)
            if s is None:
                continue
            q = _quotient(s ** m, f, h)
            if q is not None and q.degree <= max_degree:
                logger.debug("Hermite target m=%d branch %s", m, branch)
                yield q
        m += 1
        if n == 1:
            break


def _hill_climb(f: Polynomial, h: Polynomial, start: Polynomial, budget: SearchBudget) -> Optional[Polynomial]:
    degree = min(budget.max_degree, max(f.degree, h.degree, 1))
    rng = np.random.default_rng(budget.seed)
    current = np.zeros(degree + 1, dtype=complex)
    current[: min(len(start), degree + 1)] = start.coeffs[: degree + 1]
    best = combination_margin(f + Polynomial(current) * h)
    step = 0.5
    for iteration in range(budget.max_iters):
        if best >= budget.margin:
            return Polynomial(current)
        trial = current + step * (rng.standard_normal(degree + 1) + 1j * rng.standard_normal(degree + 1))
        value = combination_margin(f + Polynomial(trial) * h)
        if value > best:
            current, best = trial, value
            step *= 1.2
        else:
            step *= 0.7
            if step < 1e-6:
                step = 0.5
        if iteration % 200 == 0:
            logger.debug("hill climb iteration %d: best margin %.6g", iteration, best)
    return Polynomial(current) if best >= budget.margin else None


def search_g(f: Polynomial, h: Polynomial, budget: Optional[SearchBudget] = None) -> Optional[Polynomial]:
    """Reducer g for the pair (F, H), or None (NOT_FOUND) once the budget is spent.

    Layers are tried in order: constants on a fixed grid, Hermite-interpolated
    zero-free targets of increasing degree, then a seeded hill climb.

    Args:
        f: First entry F of a unimodular pair.
        h: Second entry H.
        budget: Degree, iteration, seed and margin limits.

    Returns:
        A polynomial g with F + g·H free of roots within the margin, or None.
    """
    budget = budget or SearchBudget()

    def accepted(g: Polynomial) -> bool:
        return combination_margin(f + g * h) >= budget.margin

    zero = Polynomial.zero()
    if accepted(zero):
        return zero
    if h.is_zero:
        return None

    if h.degree < 2:
        for c in _constant_grid():
            g = Polynomial.constant(c)
            if accepted(g):
                return g

    # Common factors with every root outside the disk carry over to F + gH unchanged.
    f_reduced, h_reduced = f, h
    common = polynomial_gcd([f, h])
    if common.degree >= 1 and not f.is_zero and np.all(np.abs(roots(common)) > 1.0 + budget.margin):
        f_reduced, _ = f.divmod(common)
        h_reduced, _ = h.divmod(common)

    best_hermite = zero
    best_margin = -math.inf
    for g in _hermite_candidates(f_reduced, h_reduced, budget.max_degree):
        margin = combination_margin(f + g * h)
        if margin >= budget.margin:
            return g
        if margin > best_margin:
            best_hermite, best_margin = g, margin

    g = _hill_climb(f, h, best_hermite, budget)
    if g is None:
        logger.warning("no reducer found within budget %s", budget.to_dict())
    return g
