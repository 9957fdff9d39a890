"""The seeded property-verification suite behind the ``verify-suite`` command.

Every item builds its own generator from (seed, item name), so results do
not depend on scheduling; items are merged into the report sorted by name.
"""
import logging
import math
import zlib
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Dict, List

import numpy as np

from src.api.settings import RunSettings
from src.corona.bezout import BezoutMode, bezout_base
from src.corona.epsilon import estimate_epsilon
from src.corona.koszul import check_identities, koszul_solution_form
from src.corona.solver import CoronaProblem, CoronaSolver, lift, lift_anchor, normalize, verify_certificate
from src.errors import DegreeCapExceeded, QuadratureError
from src.polynomials.bounds import min_modulus_closed_disk, sup_circle
from src.polynomials.polynomial import Polynomial, UnitCirclePoint
from src.report import CheckItem, Report, at_least, at_most
from src.spaces.dirichlet import local_dirichlet
from src.spaces.measure import AtomicMeasure, FunctionTuple
from src.spaces.multipliers import mult_norm_lower, mult_norm_upper, product_inequality_check
from src.spaces.quadrature import local_dirichlet_quadrature
from src.stable_rank.reduction import PairReducer, ReductionWitness, eta, verify_witness
from src.stable_rank.search import combination_margin

logger = logging.getLogger(__name__)

SuiteItem = Callable[[RunSettings, np.random.Generator], Report]


def _rng(settings: RunSettings, name: str) -> np.random.Generator:
    return np.random.default_rng([settings.seed, zlib.crc32(name.encode())])


def random_polynomial(rng: np.random.Generator, degree: int, scale: float = 1.0) -> Polynomial:
    c = rng.uniform(-scale, scale, degree + 1) + 1j * rng.uniform(-scale, scale, degree + 1)
    return Polynomial(c)


def random_circle_point(rng: np.random.Generator) -> UnitCirclePoint:
    return UnitCirclePoint.at_angle(rng.uniform(-math.pi, math.pi))


def random_disk_points(rng: np.random.Generator, count: int) -> np.ndarray:
    r = np.sqrt(rng.uniform(0.0, 1.0, count))
    return r * np.exp(1j * rng.uniform(0.0, 2.0 * math.pi, count))


def quadrature_oracle(settings: RunSettings, rng: np.random.Generator) -> Report:
    count = 200 if settings.full else 10
    worst, undecided = 0.0, 0
    for _ in range(count):
        p = random_polynomial(rng, int(rng.integers(0, 16)))
        zeta = random_circle_point(rng)
        exact = local_dirichlet(p, zeta)
        allowed = max(1e-4, 1e-3 * exact)
        try:
            value = local_dirichlet_quadrature(p, zeta, tol=max(settings.quad_tol, 0.1 * allowed))
        except QuadratureError:
            undecided += 1
            continue
        worst = max(worst, abs(value - exact) / allowed)
    report = Report()
    report.add(at_most("worst_relative_gap", worst, 1.0, f"{count} samples"))
    if undecided:
        report.add(CheckItem("quadrature_cap", undecided, 0, None, "samples stopped at the refinement cap"))
    anchors = [(Polynomial.monomial(1), 1.0), (Polynomial.monomial(2), 2.0)]
    for k, (p, expected) in enumerate(anchors, start=1):
        report.add(at_most(f"anchor_z{k}", abs(local_dirichlet(p, 1.0) - expected), 1e-12))
    return report


def product_inequalities(settings: RunSettings, rng: np.random.Generator) -> Report:
    count = 1000 if settings.full else 100
    worst = math.inf
    vanishing_cases = 0
    for i in range(count):
        zeta = random_circle_point(rng)
        phi = random_polynomial(rng, int(rng.integers(0, 6)))
        f = random_polynomial(rng, int(rng.integers(0, 6)))
        if i % 4 == 0:
            f = f * Polynomial([-zeta.value, 1.0])
            vanishing_cases += 1
        slacks = product_inequality_check(phi, f, zeta)
        values = [slacks.a, slacks.b] + ([slacks.c] if slacks.c is not None else [])
        worst = min(worst, min(values))
    return Report().add(at_least("min_slack", worst, -1e-10, f"{count} samples, {vanishing_cases} with f(ζ) = 0"))


def koszul_identities(settings: RunSettings, rng: np.random.Generator) -> Report:
    sizes = range(2, 51) if settings.full else range(2, 11)
    worst = 0.0
    for n in sizes:
        a = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        d = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        deviations = check_identities(a, d, seed=int(rng.integers(2 ** 32)))
        worst = max(worst, max(deviations.kernel, deviations.gram, deviations.cross) / deviations.scale)
    return Report().add(at_most("worst_scaled_deviation", worst, 1e-12))


def corona_worked(settings: RunSettings, rng: np.random.Generator) -> Report:
    phi = FunctionTuple.of(Polynomial.monomial(1), Polynomial([1.0, -1.0]))
    solver = CoronaSolver(settings.degree_cap, settings.trial_degree, settings.seed)
    report = Report()

    single = CoronaProblem(phi, AtomicMeasure.dirac(1.0))
    cert = solver.solve(single)
    expected = FunctionTuple.of(Polynomial([2.0, -1.0]), Polynomial([1.0, -1.0]))
    report.add(at_most("single.solution_gap", cert.solution.distance(expected), 1e-12))
    report.add(at_most("single.residual", cert.residual_max_coeff, 1e-12))
    report.extend(verify_certificate(single, cert, settings.residual_tol), prefix="single.")

    double = CoronaProblem(phi, AtomicMeasure.from_points([(1.0, 1.0), (-1.0, 1.0)]))
    cert = solver.solve(double)
    expected = FunctionTuple.of(Polynomial([1.0, 0.6, -0.6]), Polynomial([1.0, 0.0, -0.6]))
    report.add(at_most("double.solution_gap", cert.solution.distance(expected), 1e-10))
    report.add(at_most("double.residual", cert.residual_max_coeff, 1e-10))

    base = FunctionTuple.of(1.0, 1.0)
    gap = koszul_solution_form(phi, base, 1.0).distance(lift(phi, base, 1.0))
    report.add(at_most("koszul_vs_lift", gap, 1e-10))
    return report


def _random_exact_instance(rng: np.random.Generator, attempts: int = 200):
    for _ in range(attempts):
        n = int(rng.integers(2, 5))
        phi = FunctionTuple(tuple(random_polynomial(rng, int(rng.integers(0, 5))) for _ in range(n)))
        epsilon = estimate_epsilon(phi)
        if epsilon.eps_sq_lower < 0.01:
            continue
        try:
            base, mode = bezout_base(phi)
        except DegreeCapExceeded:
            continue
        if mode is BezoutMode.EXACT:
            atoms = int(rng.integers(1, 4))
            angles = np.sort(rng.uniform(-math.pi, math.pi, atoms))
            measure = AtomicMeasure.from_points([(UnitCirclePoint.at_angle(t), 1.0) for t in angles])
            return phi, base, measure, epsilon
    return None


def corona_random(settings: RunSettings, rng: np.random.Generator) -> Report:
    count = 50 if settings.full else 10
    solver = CoronaSolver(settings.degree_cap, settings.trial_degree, settings.seed)
    worst_stage, worst_atom, worst_chain, worst_agreement = 0.0, math.inf, -math.inf, 0.0
    built = 0
    for _ in range(count):
        instance = _random_exact_instance(rng)
        if instance is None:
            continue
        phi, base, measure, epsilon = instance
        built += 1
        scaled, s = normalize(phi, measure)
        e = base * s
        for atom in measure:
            worst_atom = min(worst_atom, float(phi.sum_sq(atom.zeta.value)) - epsilon.eps_sq_lower)
            closed = lift(scaled, e, atom.zeta, require_identity=False)
            worst_agreement = max(worst_agreement, koszul_solution_form(scaled, e, atom.zeta).distance(closed))
            anchored = lift_anchor(scaled, e, atom.zeta, require_identity=False)
            worst_stage = max(worst_stage, scaled.bezout_residual(anchored))
            e = lift(scaled, e, atom.zeta, require_identity=False)
            worst_stage = max(worst_stage, scaled.bezout_residual(e))
        cert = solver.solve(CoronaProblem(phi, measure))
        for record in cert.chain:
            worst_chain = max(worst_chain, record.b_norm_lower - record.chain_bound)
    report = Report()
    report.add(CheckItem("instances", built, count, built == count))
    report.add(at_most("worst_stage_residual", worst_stage, settings.residual_tol))
    report.add(at_least("worst_atom_margin", worst_atom, -1e-10))
    report.add(at_most("worst_chain_excess", worst_chain, 1e-9))
    report.add(at_most("worst_koszul_gap", worst_agreement, 1e-10))
    return report


def curated_pairs() -> List[tuple]:
    z = Polynomial.monomial(1)
    one = Polynomial.constant(1.0)
    at_one = AtomicMeasure.dirac(1.0)
    at_minus_one = AtomicMeasure.dirac(-1.0)
    return [
        ("z,1-z@1", z, 1.0 - z, at_one),
        ("1-z,1@1", 1.0 - z, one, at_one),
        ("2+z,1@1", 2.0 + z, one, at_one),
        ("0.5,z@-1", Polynomial.constant(0.5), z, at_minus_one),
        ("z,1", z, one, AtomicMeasure()),
        ("z,1-z@-1", z, 1.0 - z, at_minus_one),
        ("3-z^2,z@1", 3.0 - z * z, z, at_one),
        ("1,z@1", one, z, at_one),
        ("z-0.5,1@1", z - 0.5, one, at_one),
        ("z,1@1", z, one, at_one),
    ]


def stable_rank_curated(settings: RunSettings, rng: np.random.Generator) -> Report:
    reducer = PairReducer(settings.budget)
    report = Report()
    for name, f, h, measure in curated_pairs():
        witness = reducer.reduce(f, h, measure)
        if witness is None:
            report.add(CheckItem(f"{name}.found", None, None, None, "NOT_FOUND"))
            continue
        report.extend(verify_witness(f, h, witness), prefix=f"{name}.")
        report.add(at_least(f"{name}.margin", witness.root_margin, settings.root_margin))

    z = Polynomial.monomial(1)
    y = Polynomial([8.0, -7.0, -1.0]) / 27.0
    u = z + y * (1.0 - z)
    hand = ReductionWitness(y=y, u=u, g=-(z + 8.0) / 27.0, root_margin=combination_margin(u), min_modulus=min_modulus_closed_disk(u))
    report.extend(verify_witness(z, 1.0 - z, hand), prefix="hand_witness.")
    return report


def multiplier_sandwich(settings: RunSettings, rng: np.random.Generator) -> Report:
    measure = AtomicMeasure.dirac(1.0)
    report = Report()
    report.add(at_least("anchor_one", mult_norm_lower(FunctionTuple.of(1.0), measure, settings.trial_degree).lower, 1.0 - 1e-12))
    report.add(
        at_least("anchor_z", mult_norm_lower(FunctionTuple.of(Polynomial.monomial(1)), measure, settings.trial_degree).lower, math.sqrt(2.0) - 1e-12)
    )
    worst = -math.inf
    for _ in range(20 if settings.full else 5):
        phi = FunctionTuple(tuple(random_polynomial(rng, int(rng.integers(0, 4))) for _ in range(int(rng.integers(1, 4)))))
        atoms = [(random_circle_point(rng), float(rng.uniform(0.5, 2.0))) for _ in range(int(rng.integers(0, 3)))]
        mu = AtomicMeasure.from_points(atoms)
        gap = mult_norm_lower(phi, mu, settings.trial_degree, settings.seed).lower - mult_norm_upper(phi, mu).upper
        worst = max(worst, gap)
    report.add(at_most("worst_sandwich_gap", worst, 1e-9))
    return report


def bound_soundness(settings: RunSettings, rng: np.random.Generator) -> Report:
    points = 10_000 if settings.full else 1000
    instances = 10 if settings.full else 3
    violations = {"sup_circle": 0, "min_modulus": 0, "eta": 0, "epsilon": 0}
    for _ in range(instances):
        p = random_polynomial(rng, int(rng.integers(1, 8)))
        circle = np.exp(1j * rng.uniform(0.0, 2.0 * math.pi, points))
        violations["sup_circle"] += int(np.sum(np.abs(p(circle)) > sup_circle(p).upper))

        disk = random_disk_points(rng, points)
        shifted = p + (p.abs_coeff_sum() + 1.0)
        violations["min_modulus"] += int(np.sum(np.abs(shifted(disk)) < min_modulus_closed_disk(shifted).lower))

        f = random_polynomial(rng, int(rng.integers(0, 4)))
        h = random_polynomial(rng, int(rng.integers(0, 4)))
        violations["eta"] += int(np.sum(np.abs(f(disk)) + np.abs(h(disk)) < eta(f, h).lower))

        phi = FunctionTuple.of(f, h)
        violations["epsilon"] += int(np.sum(phi.sum_sq(disk) < estimate_epsilon(phi).eps_sq_lower))
    report = Report()
    for name, count in sorted(violations.items()):
        report.add(at_most(f"{name}.violations", count, 0))
    return report


SUITE: Dict[str, SuiteItem] = {
    "bounds.soundness": bound_soundness,
    "corona.random": corona_random,
    "corona.worked": corona_worked,
    "dirichlet.product_inequalities": product_inequalities,
    "dirichlet.quadrature_oracle": quadrature_oracle,
    "koszul.identities": koszul_identities,
    "multipliers.sandwich": multiplier_sandwich,
    "stable_rank.curated": stable_rank_curated,
}


def _run_item(name: str, settings: RunSettings) -> Report:
    logger.info("suite item %s", name)
    return SUITE[name](settings, _rng(settings, name))


def run_suite(settings: RunSettings, names=None) -> Report:
    """
    Run the verification items and merge their reports.

    Args:
        settings: Seed, worker count and the quick/full switch.
        names: Subset of SUITE keys; all items when omitted.

    Returns:
        One Report with every item's checks prefixed by the item name.
    """
    selected = sorted(names if names is not None else SUITE)
    with ThreadPoolExecutor(max_workers=max(1, settings.workers)) as pool:
        results = dict(zip(selected, pool.map(lambda name: _run_item(name, settings), selected)))
    report = Report()
    for name in selected:
        report.extend(results[name], prefix=f"{name}/")
    return report
