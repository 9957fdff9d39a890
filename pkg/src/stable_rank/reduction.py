"""Reduction of unimodular pairs: find y with f + y·h invertible.

The atoms of μ are visited in stored order. At each atom ζ the current pair
(F, H) is transformed by

    Case 1, F(ζ) != 0:  (F, (F - F(ζ))·H)
    Case 2, F(ζ) == 0:  (F + H, H), followed by Case 1 at the same atom

and a reducer g of the final pair is searched for. Writing the final pair as
(f + α·h, β·h), the reducer of the original pair is y = α + g·β.
"""
import enum
import logging
import math
from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np

from src.errors import EtaNotCertifiedError, PreconditionError
from src.polynomials.bounds import CertifiedBound, certified_disk_infimum, min_modulus_closed_disk, taylor_at, taylor_table
from src.polynomials.polynomial import Polynomial, UnitCirclePoint
from src.report import CheckItem, Report, at_most
from src.spaces.measure import AtomicMeasure
from src.stable_rank.search import SearchBudget, combination_margin, search_g

logger = logging.getLogger(__name__)

CASE2_THRESHOLD = 1e-9
WITNESS_TOLERANCE = 1e-8
ETA_REFINE_FRACTION = 0.98


class Case(str, enum.Enum):
    CASE1 = "CASE1"
    CASE2 = "CASE2"


@dataclass(frozen=True)
class CaseStep:
    case: Case
    zeta: complex
    certified_eta: float

    def to_dict(self) -> dict:
        return {"case": self.case.value, "zeta": [self.zeta.real, self.zeta.imag], "certified_eta": self.certified_eta}


@dataclass(frozen=True)
class UnimodularPair:
    f: Polynomial
    h: Polynomial
    measure: AtomicMeasure
    eta_lower: CertifiedBound

    @classmethod
    def certify(cls, f: Polynomial, h: Polynomial, measure: AtomicMeasure) -> "UnimodularPair":
        bound = eta(f, h)
        if bound.lower <= 0:
            raise EtaNotCertifiedError(f"inf(|f| + |h|) not certified positive (lower {bound.lower:.3g})")
        return cls(f, h, measure, bound)


@dataclass(frozen=True)
class ReductionWitness:
    y: Polynomial
    u: Polynomial
    g: Polynomial
    root_margin: float
    min_modulus: CertifiedBound
    case_trace: Tuple[CaseStep, ...] = field(default_factory=tuple)

    def to_dict(self) -> dict:
        return {
            "y": {"coeffs": self.y.to_pairs()},
            "u": {"coeffs": self.u.to_pairs()},
            "g": {"coeffs": self.g.to_pairs()},
            "root_margin": self.root_margin if math.isfinite(self.root_margin) else None,
            "min_modulus": self.min_modulus.to_dict(),
            "case_trace": [step.to_dict() for step in self.case_trace],
        }


def _modulus_lower(table, order: int, centers: np.ndarray, radii: np.ndarray, lipschitz: float):
    """Value |p(c)| and a lower bound for |p| on the disk of radius ρ about c."""
    coeffs = taylor_at(table, centers)
    value = np.abs(coeffs[0])
    tail = np.zeros(len(centers))
    for k in range(1, order):
        tail += np.abs(coeffs[k]) * radii ** k
    return value, np.maximum(value - tail, value - radii * lipschitz)


def eta(f: Polynomial, h: Polynomial, max_refinements: int = 6) -> CertifiedBound:
    """Enclosure of inf over the closed disk of |f| + |h|."""
    polys = [p for p in (f, h) if not p.is_zero]
    if not polys:
        return CertifiedBound(0.0, 0.0, "zero-pair")
    tables = [(taylor_table(p), len(p), p.abs_coeff_sum(1)) for p in polys]
    slack = 16.0 * np.finfo(float).eps * sum((len(p) + 1) * p.abs_coeff_sum() for p in polys)

    def cell_bounds(centers, radii):
        values = np.zeros(len(centers))
        lowers = np.zeros(len(centers))
        for table, order, lipschitz in tables:
            v, lo = _modulus_lower(table, order, centers, radii, lipschitz)
            values += v
            lowers += np.clip(lo, 0.0, None)
        return values, np.clip(lowers - slack, 0.0, None)

    infimum = certified_disk_infimum(cell_bounds, max_refinements=max_refinements, refine_fraction=ETA_REFINE_FRACTION)
    lower = min(infimum.lower, infimum.grid_min)
    return CertifiedBound(lower, max(infimum.grid_min, lower), f"polar-cells:{infimum.cells}")


def _as_point(zeta) -> UnitCirclePoint:
    return zeta if isinstance(zeta, UnitCirclePoint) else UnitCirclePoint(zeta)


def case1_transform(
    f: Polynomial, h: Polynomial, zeta, eta_lower: Optional[float] = None
) -> Tuple[Tuple[Polynomial, Polynomial], float]:
    """(f, (f - f(ζ)
)·h) with a certified lower bound for inf(|f| + |h_new|).

    Where |f| >= |f(ζ)|/2 the new pair is at least |f(ζ)|/2; elsewhere
    |f - f(ζ)| >= |f(ζ)|/2 and the sum is at least min{1, |f(ζ)|/2}·η.

    Args:
        f: First entry; must not vanish at ζ.
        h: Second entry.
        zeta: The atom.
        eta_lower: Certified lower bound for inf(|f| + |h|); computed when omitted.

    Returns:
        The transformed pair and min(|f(ζ)|/2, min{1, |f(ζ)|/2}·η).

    Raises:
        PreconditionError: |f(ζ)| is below the Case 2 threshold.
    """
    point = _as_point(zeta)
    value = f(point.value)
    if abs(value) < CASE2_THRESHOLD:
        raise PreconditionError(f"|f(ζ)| = {abs(value):.3g} < {CASE2_THRESHOLD:g}; use case2_transform first")
    if eta_lower is None:
        eta_lower = eta(f, h).lower
    half = abs(value) / 2.0
    certified = min(half, min(1.0, half) * eta_lower)
    return (f, (f - value) * h), certified


def case2_transform(f: Polynomial, h: Polynomial) -> Tuple[Polynomial, Polynomial]:
    """(f + h, h); a reducer g' of the new pair gives y = 1 + g' for the old one."""
    return f + h, h


class PairReducer:
    """Walks the atoms of a measure and searches a reducer for the transformed pair."""

    def __init__(self, budget: Optional[SearchBudget] = None):
        """
        Args:
            budget: Degree, iteration, seed and margin limits of the reducer search.
        """
        self.budget = budget or SearchBudget()

    def reduce(self, f: Polynomial, h: Polynomial, measure: AtomicMeasure) -> Optional[ReductionWitness]:
        pair = UnimodularPair.certify(f, h, measure)
        big_f, big_h = f, h
        alpha, beta = Polynomial.zero(), Polynomial.constant(1.0)
        current_eta = pair.eta_lower.lower
        trace = []

        for atom in measure:
            zeta = atom.zeta.value
            if abs(big_f(zeta)) < CASE2_THRESHOLD:
                big_f, big_h = case2_transform(big_f, big_h)
                alpha = alpha + beta
                current_eta /= 2.0
                trace.append(CaseStep(Case.CASE2, zeta, current_eta))
                if abs(big_f(zeta)) < CASE2_THRESHOLD:
                    raise PreconditionError(f"both entries vanish at ζ = {zeta}; the pair is not unimodular")
            value = big_f(zeta)
            (big_f, big_h), current_eta = case1_transform(big_f, big_h, atom.zeta, current_eta)
            beta = (big_f - value) * beta
            trace.append(CaseStep(Case.CASE1, zeta, current_eta))

        g = search_g(big_f, big_h, self.budget)
        if g is None:
            logger.warning("reduction NOT_FOUND after %d case steps", len(trace))
            return None

        y = alpha + g * beta
        u = f + y * h
        margin = combination_margin(u)
        if margin < self.budget.margin:
            logger.error("recomposed combination has margin %.3g below %.3g", margin, self.budget.margin)
            return None
        logger.info("reduced pair with deg y = %d, root margin %.6g", y.degree, margin)
        return ReductionWitness(
            y=y,
            u=u,
            g=g,
            root_margin=margin,
            min_modulus=min_modulus_closed_disk(u),
            case_trace=tuple(trace),
        )


def reduce(f: Polynomial, h: Polynomial, measure: AtomicMeasure, budget: Optional[SearchBudget] = None) -> Optional[ReductionWitness]:
    return PairReducer(budget).reduce(f, h, measure)


def replay_trace(f: Polynomial, h: Polynomial, trace, g: Polynomial) -> Polynomial:
    """Recompute u = F + g·H by applying the recorded case steps to (f, h)."""
    big_f, big_h = f, h
    for step in trace:
        if step.case is Case.CASE2:
            big_f, big_h = case2_transform(big_f, big_h)
        else:
            big_h = (big_f - big_f(step.zeta)) * big_h
    return big_f + g * big_h


def _margins_match(claimed: float, actual: float) -> bool:
    if math.isinf(claimed) or math.isinf(actual):
        return claimed == actual
    return abs(claimed - actual) <= WITNESS_TOLERANCE


def verify_witness(f: Polynomial, h: Polynomial, w: ReductionWitness) -> Report:
    """Recompute u = f + y·h and its root margin and compare with the witness."""
    report = Report()
    u = f + w.y * h
    report.add(at_most("identity", u.distance(w.u), WITNESS_TOLERANCE))
    actual = combination_margin(u)
    report.add(
        CheckItem("root_margin_match", actual, w.root_margin, _margins_match(w.root_margin, actual), "recomputed vs claimed")
    )
    report.add(CheckItem("root_margin_positive", actual, 0.0, bool(actual > 0.0)))
    report.artifacts["witness"] = w.to_dict()
    return report
