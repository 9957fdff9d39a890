"""Multiplier-norm estimates for the column operator M_Φ: f -> (φ_j f)_j on D(μ).

Upper estimates are assembled from the product inequality for local
Dirichlet integrals, lower estimates are Rayleigh quotients over trial
polynomials. Neither is claimed sharp.
"""
import logging
import math
from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np

from src.polynomials.bounds import CertifiedBound, sup_circle, sup_circle_sum_sq
from src.polynomials.polynomial import Polynomial, UnitCirclePoint
from src.spaces.dirichlet import dmu_norm_sq, local_dirichlet, tuple_dmu_norm_sq
from src.spaces.measure import AtomicMeasure, FunctionTuple

logger = logging.getLogger(__name__)

DEFAULT_SEED = 0x5EED
RANDOM_TRIALS = 64
C_BRANCH_THRESHOLD = 1e-12


@dataclass(frozen=True)
class MultiplierNormEstimate:
    """lower <= ||M_Φ|| <= upper; an unpopulated side is 0 (lower) or inf (upper)."""

    lower: float = 0.0
    upper: float = math.inf
    trial_degree: int = -1
    s_inf: Optional[CertifiedBound] = None
    t_values: Tuple[float, ...] = field(default_factory=tuple)

    def __post_init__(self):
        if self.lower < 0 or self.lower > self.upper:
            raise ValueError(f"invalid multiplier estimate [{self.lower}, {self.upper}]")

    def to_dict(self) -> dict:
        return {
            "lower": self.lower,
            "upper": self.upper if math.isfinite(self.upper) else None,
            "trial_degree": self.trial_degree,
            "s_inf": self.s_inf.to_dict() if self.s_inf else None,
            "t_values": list(self.t_values),
        }


def mult_norm_upper(phi: FunctionTuple, measure: AtomicMeasure, resolution: Optional[int] = None) -> MultiplierNormEstimate:
    """upper = sqrt(2·S_∞ + 4·Σ_i max(a_i, 1)·T_i).

    S_∞ bounds sup Σ_j|φ_j|^2 and T_i = Σ_j D_{ζ_i}(φ_j). With f = f(ζ) + (z - ζ)g,
    Σ_j D_ζ(φ_j f) <= 2 S_∞ D_ζ(f) + 2|f(ζ)|^2 T and |f(ζ)|^2 <= 2(||f||^2 + D_ζ(f)).
    """
    s_inf = sup_circle_sum_sq(phi.entries, resolution)
    t_values = tuple(sum(local_dirichlet(p, atom.zeta) for p in phi) for atom in measure)
    total = 2.0 * s_inf.upper
    for atom, t in zip(measure, t_values):
        total += 4.0 * max(atom.weight, 1.0) * t
    return MultiplierNormEstimate(lower=0.0, upper=math.sqrt(total), s_inf=s_inf, t_values=t_values)


def _trial_polynomials(trial_degree: int, seed: int, samples: int):
    for m in range(trial_degree + 1):
        yield Polynomial.monomial(m)
    rng = np.random.default_rng(seed)
    for _ in range(samples):
        c = rng.uniform(-1.0, 1.0, trial_degree + 1) + 1j * rng.uniform(-1.0, 1.0, trial_degree + 1)
        norm = np.linalg.norm(c)
        if norm > 0:
            yield Polynomial(c / norm)


def mult_norm_lower(
    phi: FunctionTuple,
    measure: AtomicMeasure,
    trial_degree: int,
    seed: int = DEFAULT_SEED,
    samples: int = RANDOM_TRIALS,
) -> MultiplierNormEstimate:
    """Largest ||M_Φ f|| / ||f|| over monomials z^m (m <= trial_degree) and seeded random trials."""
    if trial_degree < 0:
        raise ValueError("trial_degree must be nonnegative")
    best = 0.0
    for f in _trial_polynomials(trial_degree, seed, samples):
        denominator = dmu_norm_sq(f, measure)
        if denominator <= 0:
            continue
        ratio = tuple_dmu_norm_sq(phi * f, measure) / denominator
        best = max(best, ratio)
    return MultiplierNormEstimate(lower=math.sqrt(best), upper=math.inf, trial_degree=trial_degree)


def estimate_multiplier_norm(
    phi: FunctionTuple,
    measure: AtomicMeasure,
    trial_degree: int,
    seed: int = DEFAULT_SEED,
    resolution: Optional[int] = None,
) -> MultiplierNormEstimate:
    upper = mult_norm_upper(phi, measure, resolution)
    lower = mult_norm_lower(phi, measure, trial_degree, seed)
    if lower.lower > upper.upper + 1e-9:
        logger.error("multiplier estimates crossed: lower %.12g > upper %.12g", lower.lower, upper.upper)
    return MultiplierNormEstimate(
        lower=min(lower.lower, upper.upper),
        upper=upper.upper,
        trial_degree=trial_degree,
        s_inf=upper.s_inf,
        t_values=upper.t_values,
    )


def column_operator_data(phi: FunctionTuple, measure: AtomicMeasure) -> Tuple[CertifiedBound, float]:
    """(bound for sup Σ|φ_j|^2, Σ_j ||φ_j||^2_{D(μ)}); M_Φ is bounded iff both are finite,
    and ||M_Φ|| <= 1 forces both below 1."""
    return sup_circle_sum_sq(phi.entries), tuple_dmu_norm_sq(phi, measure)


@dataclass(frozen=True)
class ProductSlacks:
    """Nonnegative slacks of the local Dirichlet product inequalities.

    a: 2(||φ||²_∞ D(f) + |f(ζ)|² D(φ)) - D(φf)
    b: 2(||φ||²_∞ D(f) + D(φf)) - |f(ζ)|² D(φ)
    c: ||φ||²_∞ D(f) - D(φf), only when f(ζ) = 0
    """

    a: float
    b: float
    c: Optional[float]
    phi_sup: float

    @property
    def all_nonnegative(self) -> bool:
        return min(self.a, self.b, self.c if self.c is not None else 0.0) >= -1e-10

    def to_dict(self) -> dict:
        return {"a": self.a, "b": self.b, "c": self.c, "phi_sup": self.phi_sup}


def product_inequality_check(phi: Polynomial, f: Polynomial, zeta) -> ProductSlacks:
    point = zeta if isinstance(zeta, UnitCirclePoint) else UnitCirclePoint(zeta)
    sup_sq = sup_circle(phi).upper ** 2
    d_f = local_dirichlet(f, point)
    d_phi = local_dirichlet(phi, point)
    d_prod = local_dirichlet(phi * f, point)
    f_zeta_sq = abs(f(point.value)) ** 2

    a = 2.0 * (sup_sq * d_f + f_zeta_sq * d_phi) - d_prod
    b = 2.0 * (sup_sq * d_f + d_prod) - f_zeta_sq * d_phi
    c = sup_sq * d_f - d_prod if math.sqrt(f_zeta_sq) <= C_BRANCH_THRESHOLD else None
    return ProductSlacks(a=a, b=b, c=c, phi_sup=math.sqrt(sup_sq))
