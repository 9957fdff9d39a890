"""Inductive corona solutions over the atoms of a measure, with checkable certificates.

Starting from a polynomial base solution E of Φ·E^T = 1, each atom ζ of μ is
absorbed by one lifting step

    b_j = conj(φ_j(ζ))/|Φ(ζ)|^2 - f_ζ·e_j/|Φ(ζ)|^2,   f_ζ = Σ_i (φ_i - φ_i(ζ))·conj(φ_i(ζ)),

after Φ has been scaled so that its column multiplier has norm at most 1.
"""
import logging
import math
from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np

from src.corona.bezout import BezoutMode, bezout_base
from src.corona.epsilon import EpsilonCertificate, estimate_epsilon
from src.errors import CoronaConditionError, PreconditionError, ZeroPolynomialError
from src.polynomials.bounds import CertifiedBound, sup_circle, sup_circle_sum_sq
from src.polynomials.polynomial import Polynomial, UnitCirclePoint
from src.report import CheckItem, Report, at_least, at_most
from src.spaces.dirichlet import dmu_norm_sq
from src.spaces.measure import AtomicMeasure, FunctionTuple
from src.spaces.multipliers import column_operator_data, mult_norm_lower, mult_norm_upper

logger = logging.getLogger(__name__)

IDENTITY_TOLERANCE = 1e-9
DEGENERATE_SQ = 1e-12
ATOM_SLACK = 1e-10
CHAIN_SLACK = 1e-9
CORRECTION_NORM_SQ_LIMIT = 4.0


def _as_point(zeta) -> UnitCirclePoint:
    return zeta if isinstance(zeta, UnitCirclePoint) else UnitCirclePoint(zeta)


@dataclass(frozen=True)
class CoronaProblem:
    phi: FunctionTuple
    measure: AtomicMeasure = field(default_factory=AtomicMeasure)

    def to_dict(self) -> dict:
        return {"tuple": self.phi.to_dict(), "measure": self.measure.to_dict()}


@dataclass(frozen=True)
class ChainRecord:
    """One induction step, all quantities for the scaled tuple.

    chain_bound = (1/ε)·sqrt(2 + 16·e_norm_upper²) bounds the multiplier norm
    of the lifted solution on D(μ_i); b_norm_lower is a Rayleigh-quotient lower
    estimate of that norm.
    """

    index: int
    zeta: complex
    weight: float
    phi_sq_at_atom: float
    e_norm_upper: float
    b_norm_lower: float
    chain_bound: float
    lift_bound_value: float
    correction_value_at_atom: float
    correction_norm_sq: float

    @property
    def holds(self) -> bool:
        return self.b_norm_lower <= self.chain_bound + CHAIN_SLACK

    def to_dict(self) -> dict:
        return {
            "index": self.index,
            "zeta": [self.zeta.real, self.zeta.imag],
            "weight": self.weight,
            "phi_sq_at_atom": self.phi_sq_at_atom,
            "e_norm_upper": self.e_norm_upper,
            "b_norm_lower": self.b_norm_lower,
            "chain_bound": self.chain_bound if math.isfinite(self.chain_bound) else None,
            "lift_bound_value": self.lift_bound_value,
            "correction_value_at_atom": self.correction_value_at_atom,
            "correction_norm_sq": self.correction_norm_sq,
        }


@dataclass(frozen=True)
class CoronaCertificate:
    solution: FunctionTuple
    residual_max_coeff: float
    epsilon: EpsilonCertificate
    scaled_epsilon: EpsilonCertificate
    scaling: float
    chain: Tuple[ChainRecord, ...]
    mode: BezoutMode
    base: FunctionTuple
    residual_sup: Optional[CertifiedBound] = None
    trial_degree: int = 6
    seed: int = 0x5EED

    def to_dict(self) -> dict:
        return {
            "solution": self.solution.to_dict(),
            "residual_max_coeff": self.residual_max_coeff,
            "epsilon": self.epsilon.to_dict(),
            "scaled_epsilon": self.scaled_epsilon.to_dict(),
            "scaling": self.scaling,
            "chain": [record.to_dict() for record in self.chain],
            "mode": self.mode.value,
            "base": self.base.to_dict(),
            "residual_sup": self.residual_sup.to_dict() if self.residual_sup else None,
            "trial_degree": self.trial_degree,
            "seed": self.seed,
        }


def normalize(phi: FunctionTuple, measure: AtomicMeasure) -> Tuple[FunctionTuple, float]:
    """Scale Φ by s = mult_norm_upper(Φ, μ) so that ||M_{Φ/s}|| <= 1.

    If (Φ/s)·B^T = 1 then Φ·(B/s)^T = 1.
    """
    if phi.is_zero:
        raise ZeroPolynomialError("cannot normalize the zero tuple")
    s = mult_norm_upper(phi, measure).upper
    return phi / s, s


def correction_function(phi: FunctionTuple, zeta) -> Polynomial:
    """f_ζ = Σ_i (φ_i - φ_i(ζ))·conj(φ_i(ζ)); it vanishes at ζ."""
    point = _as_point(zeta)
    values = phi(point.value)
    total = Polynomial.zero()
    for p, value in zip(phi, values):
        if value != 0:
            total = total + (p - value) * np.conj(value)
    return total


def _check_lift_preconditions(phi: FunctionTuple, e: FunctionTuple, point: UnitCirclePoint, require_identity: bool):
    if len(phi) != len(e):
        raise PreconditionError(f"tuple lengths differ ({len(phi)} vs {len(e)})", code="LENGTH_MISMATCH")
    if require_identity:
        residual = phi.bezout_residual(e)
        if residual > IDENTITY_TOLERANCE:
            raise PreconditionError(f"Bezout identity: max coefficient of Φ·E^T - 1 is {residual:.3g}")
    values = phi(point.value)
    norm_sq = float(np.sum(np.abs(values) ** 2))
    if norm_sq < DEGENERATE_SQ:
        raise PreconditionError(f"non-vanishing at atom: |Φ(ζ)|^2 = {norm_sq:.3g} at ζ = {point.value}")
    return values, norm_sq


def lift(phi: FunctionTuple, e: FunctionTuple, zeta, require_identity: bool = True) -> FunctionTuple:
    point = _as_point(zeta)
    values, norm_sq = _check_lift_preconditions(phi, e, point, require_identity)
    f_zeta = correction_function(phi, point) / norm_sq
    return FunctionTuple(tuple(complex(np.conj(v)) / norm_sq - f_zeta * e_j for v, e_j in zip(values, e)))


def anchor_index(phi: FunctionTuple, zeta) -> int:
    """Lowest index maximizing |φ_j(ζ)|."""
    return int(np.argmax(np.abs(phi(_as_point(zeta).value))))


def lift_anchor(phi: FunctionTuple, e: FunctionTuple, zeta, require_identity: bool = True) -> FunctionTuple:
    """Alternative solution anchored at the entry of largest modulus at ζ:

    d_j = δ_{jm}/φ_m(ζ) - (φ_m - φ_m(ζ))/φ_m(ζ)·e_j.
    """
    point = _as_point(zeta)
    values, _ = _check_lift_preconditions(phi, e, point, require_identity)
    m = anchor_index(phi, point)
    anchor = complex(values[m])
    factor = (phi[m] - anchor) / anchor
    entries = []
    for j, e_j in enumerate(e):
        d = -(factor * e_j)
        if j == m:
            d = d + 1.0 / anchor
        entries.append(d)
    return FunctionTuple(tuple(entries))


def lift_bound(phi: FunctionTuple, e: FunctionTuple, zeta) -> float:
    """sqrt(2/|Φ(ζ)|²·(1 + 4·sup Σ|e_j|²)) for the single-atom lift."""
    norm_sq = float(phi.sum_sq(_as_point(zeta).value))
    e_sup_sq = sup_circle_sum_sq(e.entries).upper
    return math.sqrt(2.0 / norm_sq * (1.0 + 4.0 * e_sup_sq))


def anchor_bound(phi: FunctionTuple, e: FunctionTuple, zeta, measure: AtomicMeasure) -> float:
    """sqrt(2/|φ_m(ζ)|² + 4(||φ_m||²_M/|φ_m(ζ)|² + 1)·sup Σ|e_j|²) for the anchored solution."""
    point = _as_point(zeta)
    m = anchor_index(phi, point)
    anchor_sq = abs(phi[m](point.value)) ** 2
    phi_m_norm = mult_norm_upper(FunctionTuple.of(phi[m]), measure).upper
    e_sup_sq = sup_circle_sum_sq(e.entries).upper
    return math.sqrt(2.0 / anchor_sq + 4.0 * (phi_m_norm ** 2 / anchor_sq + 1.0) * e_sup_sq)


def lift_chain(
    scaled_phi: FunctionTuple,
    e: FunctionTuple,
    measure: AtomicMeasure,
    eps: float,
    exact: bool = True,
    trial_degree: int = 6,
    seed: int = 0x5EED,
) -> Tuple[FunctionTuple, Tuple[ChainRecord, ...]]:
    """Lift a scaled base solution through every atom of ``measure`` in stored order.

    Args:
        scaled_phi: The tuple after normalization, ||M_Φ|| <= 1.
        e: Solution of scaled_phi·E^T = 1 to start from.
        measure: Atoms to absorb; the i-th lift is measured on its first i + 1 atoms.
        eps: Square root of the certified lower bound for Σ|φ_j|² of the scaled tuple.
        exact: Whether the Bezout identity must hold before each lift.
        trial_degree: Degree of the trial polynomials for the lower norm estimate.
        seed: Seed of the random trial polynomials.

    Returns:
        The final solution and one ChainRecord per atom.
    """
    chain = []
    for i, atom in enumerate(measure):
        previous = measure.prefix(i)
        current = measure.prefix(i + 1)
        e_norm_upper = mult_norm_upper(e, previous).upper
        phi_sq = float(scaled_phi.sum_sq(atom.zeta.value))
        single = lift_bound(scaled_phi, e, atom.zeta)
        b = lift(scaled_phi, e, atom.zeta, require_identity=exact)

        correction = correction_function(scaled_phi, atom.zeta)
        b_norm_lower = mult_norm_lower(b, current, trial_degree, seed).lower
        bound = math.sqrt(2.0 + 16.0 * e_norm_upper ** 2) / eps if eps > 0 else math.inf
        record = ChainRecord(
            index=i,
            zeta=atom.zeta.value,
            weight=atom.weight,
            phi_sq_at_atom=phi_sq,
            e_norm_upper=e_norm_upper,
            b_norm_lower=b_norm_lower,
            chain_bound=bound,
            lift_bound_value=single,
            correction_value_at_atom=abs(correction(atom.zeta.value)),
            correction_norm_sq=dmu_norm_sq(correction, measure),
        )
        logger.info(
            "lift %d at ζ=%.6g%+.6gi: |Φ(ζ)|²=%.6g, ||M_B|| >= %.6g, bound %.6g",
            i, atom.zeta.value.real, atom.zeta.value.imag, phi_sq, b_norm_lower, bound,
        )
        chain.append(record)
        e = b
    return e, tuple(chain)


class CoronaSolver:
    """Builds corona solutions atom by atom and records the norm-bound chain."""

    def __init__(self, degree_cap: Optional[int] = None, trial_degree: int = 6, seed: int = 0x5EED):
        """
        Initialize the solver.

        Args:
            degree_cap: Largest entry degree tried by the base solver (default 2·deg Φ + 4).
            trial_degree: Degree of the trial polynomials for multiplier lower estimates.
            seed: Seed of the random trial polynomials.
        """
        self.degree_cap = degree_cap
        self.trial_degree = trial_degree
        self.seed = seed

    def solve(self, problem: CoronaProblem) -> CoronaCertificate:
        """
        Solve Φ·B^T = 1 with B bounded as a multiplier of D(μ).

        Args:
            problem: The tuple and the measure.

        Returns:
            A certificate holding the solution, the epsilon estimates and the bound chain.

        Raises:
            CoronaConditionError: Φ has a common root in the closed disk.
            DegreeCapExceeded: No base solution up to the degree cap.
        """
        phi, measure = problem.phi, problem.measure
        epsilon = estimate_epsilon(phi)
        if epsilon.fails:
            raise CoronaConditionError(f"common root(s) {list(epsilon.common_roots_in_disk)} in the closed disk")
        if epsilon.inconclusive:
            logger.warning("epsilon could not be certified positive; the bound chain will be uninformative")

        base, mode = bezout_base(phi, self.degree_cap)
        exact = mode is BezoutMode.EXACT
        scaled_phi, s = normalize(phi, measure)
        scaled_epsilon = estimate_epsilon(scaled_phi)
        if not measure.has_unit_weights:
            logger.warning("weighted atoms: the bound chain is reported, not asserted")

        e, chain = lift_chain(
            scaled_phi, base * s, measure, scaled_epsilon.epsilon, exact, self.trial_degree, self.seed
        )
        solution = e / s
        residual = phi.bezout_residual(solution)
        residual_sup = None if exact else sup_circle(phi.dot(solution) - 1.0)
        return CoronaCertificate(
            solution=solution,
            residual_max_coeff=residual,
            epsilon=epsilon,
            scaled_epsilon=scaled_epsilon,
            scaling=s,
            chain=chain,
            mode=mode,
            base=base,
            residual_sup=residual_sup,
            trial_degree=self.trial_degree,
            seed=self.seed,
        )


def solve(problem: CoronaProblem, degree_cap: Optional[int] = None, trial_degree: int = 6, seed: int = 0x5EED) -> CoronaCertificate:
    return CoronaSolver(degree_cap, trial_degree, seed).solve(problem)


def _drift(claimed: float, actual: float) -> float:
    if math.isinf(claimed) or math.isinf(actual):
        return 0.0 if claimed == actual else math.inf
    return abs(claimed - actual)


def verify_certificate(problem: CoronaProblem, cert: CoronaCertificate, residual_tol: float = IDENTITY_TOLERANCE) -> Report:
    """Recheck a certificate from scratch; failures are listed, never raised.

    The chain is rebuilt from the stored base solution, so a solution or a
    chain record that was not produced by the lifts fails here.

    Args:
        problem: The tuple and measure the certificate claims to solve.
        cert: The certificate to check.
        residual_tol: Largest accepted coefficient of Φ·B^T - 1.

    Returns:
        A Report with one CheckItem per recomputed quantity.
    """
    phi, measure = problem.phi, problem.measure
    report = Report()
    exact = cert.mode is BezoutMode.EXACT

    residual = phi.bezout_residual(cert.solution) if len(cert.solution) == len(phi) else math.inf
    if exact:
        report.add(at_most("residual_max_coeff", residual, residual_tol))
        report.add(at_most("base_residual", phi.bezout_residual(cert.base), residual_tol))
    else:
        sup = sup_circle(phi.dot(cert.solution) - 1.0).upper if math.isfinite(residual) else math.inf
        report.add(CheckItem("residual_sup", sup, None, None, "APPROX mode: identity holds only approximately"))

    epsilon = estimate_epsilon(phi)
    if epsilon.inconclusive:
        report.add(CheckItem("epsilon", 0.0, None, None, "eps_sq_lower not certified positive"))
    report.add(at_most("epsilon_claim", cert.epsilon.eps_sq_lower, epsilon.eps_sq_lower + ATOM_SLACK))
    for i, atom in enumerate(measure):
        value = float(phi.sum_sq(atom.zeta.value))
        report.add(at_least(f"atom[{i}].phi_sq", value, epsilon.eps_sq_lower - ATOM_SLACK))

    scaled = phi / cert.scaling
    s_inf, column_sq = column_operator_data(scaled, measure)
    report.add(at_most("scaled.sup_sum_sq", s_inf.lower, 1.0 + CHAIN_SLACK))
    report.add(at_most("scaled.column_norm_sq", column_sq, 1.0 + CHAIN_SLACK))

    eps = estimate_epsilon(scaled).epsilon
    try:
        final, chain = lift_chain(scaled, cert.base * cert.scaling, measure, eps, exact, cert.trial_degree, cert.seed)
    except PreconditionError as e:
        report.add(CheckItem("chain", None, None, False, str(e)))
        report.artifacts["certificate"] = cert.to_dict()
        return report

    report.add(at_most("solution_matches_chain", cert.solution.distance(final / cert.scaling), residual_tol))
    report.add(CheckItem("chain_length", len(cert.chain), len(chain), len(cert.chain) == len(chain)))

    unit = measure.has_unit_weights
    for record, claimed in zip(chain, cert.chain):
        name = f"chain[{record.index}]"
        if unit:
            report.add(at_most(f"{name}.bound", record.b_norm_lower, record.chain_bound + CHAIN_SLACK))
        else:
            report.add(CheckItem(f"{name}.bound", record.b_norm_lower, record.chain_bound, None, "weighted atom: reported only"))
        drift = max(_drift(claimed.b_norm_lower, record.b_norm_lower), _drift(claimed.chain_bound, record.chain_bound))
        report.add(at_most(f"{name}.claim_drift", drift, CHAIN_SLACK))
        report.add(at_most(f"{name}.correction_at_atom", record.correction_value_at_atom, 1e-9))
        report.add(at_most(f"{name}.correction_norm_sq", record.correction_norm_sq, CORRECTION_NORM_SQ_LIMIT + CHAIN_SLACK))

    if chain:
        # the stored solution itself, scaled back, against the last bound
        norm_lower = mult_norm_lower(cert.solution * cert.scaling, measure, cert.trial_degree, cert.seed).lower
        bound = chain[-1].chain_bound
        if unit:
            report.add(at_most("solution.bound", norm_lower, bound + CHAIN_SLACK))
        else:
            report.add(CheckItem("solution.bound", norm_lower, bound, None, "weighted atom: reported only"))

    report.artifacts["certificate"] = cert.to_dict()
    return report
