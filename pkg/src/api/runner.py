"""Dispatch of validated jobs to the solvers; every command answers with a Report."""
import logging
import math
from typing import Callable, Dict

from src.api.codec import Job
from src.api.schemas import Command
from src.api.settings import RunSettings
from src.api.suite import run_suite
from src.corona.bezout import BezoutMode, bezout_base
from src.corona.koszul import check_identities, koszul_solution_form
from src.corona.solver import (
    CoronaCertificate,
    CoronaProblem,
    CoronaSolver,
    anchor_bound,
    lift,
    lift_anchor,
    verify_certificate,
)
from src.errors import CoronaConditionError, DegreeCapExceeded, EtaNotCertifiedError, QuadratureError
from src.polynomials.polynomial import h2_norm_sq
from src.report import CheckItem, Report, at_most
from src.spaces.dirichlet import dmu_norm_sq, local_dirichlet
from src.spaces.multipliers import estimate_multiplier_norm
from src.spaces.quadrature import local_dirichlet_quadrature
from src.stable_rank.reduction import PairReducer, verify_witness
from src.visualization.grid_export import grid_export

logger = logging.getLogger(__name__)

SANDWICH_SLACK = 1e-9
KOSZUL_AGREEMENT = 1e-10


def run_norm(job: Job, settings: RunSettings) -> Report:
    p = job.require("polynomial")
    measure = job.measure_or_empty
    value = dmu_norm_sq(p, measure)
    report = Report()
    report.add(CheckItem("dmu_norm_sq", value, None, bool(math.isfinite(value))))
    report.artifacts.update(
        {
            "h2_norm_sq": h2_norm_sq(p),
            "dmu_norm_sq": value,
            "local_dirichlet": [local_dirichlet(p, atom.zeta) for atom in measure],
        }
    )
    return report


def run_ldi(job: Job, settings: RunSettings) -> Report:
    p, zeta = job.require("polynomial", "zeta")
    exact = local_dirichlet(p, zeta)
    report = Report()
    report.artifacts["local_dirichlet"] = exact
    threshold = max(1e-4, 1e-3 * exact)
    try:
        quadrature = local_dirichlet_quadrature(p, zeta, tol=settings.quad_tol)
    except QuadratureError as e:
        logger.warning("quadrature cross-check stopped early: %s", e)
        report.artifacts["quadrature"] = e.estimate
        report.add(CheckItem("quadrature_agreement", abs(e.estimate - exact), threshold, None, str(e)))
        return report
    report.artifacts["quadrature"] = quadrature
    report.add(at_most("quadrature_agreement", abs(quadrature - exact), threshold))
    return report


def run_multnorm(job: Job, settings: RunSettings) -> Report:
    phi = job.require("phi")
    estimate = estimate_multiplier_norm(phi, job.measure_or_empty, settings.trial_degree, settings.seed, settings.grid_n)
    report = Report()
    report.add(at_most("sandwich", estimate.lower, estimate.upper + SANDWICH_SLACK))
    report.artifacts["estimate"] = estimate.to_dict()
    return report


def _anchor_artifacts(problem: CoronaProblem, certificate: CoronaCertificate, settings: RunSettings, report: Report) -> None:
    """Alternative anchored solutions at every atom, from the certificate's scaled base solution."""
    s = certificate.scaling
    scaled = problem.phi / s
    e = certificate.base * s
    exact = certificate.mode is BezoutMode.EXACT
    records = []
    for i, atom in enumerate(problem.measure):
        d = lift_anchor(scaled, e, atom.zeta, require_identity=exact)
        residual = scaled.bezout_residual(d)
        records.append({"index": i, "residual": residual, "anchor_bound": anchor_bound(scaled, e, atom.zeta, problem.measure)})
        if exact:
            report.add(at_most(f"anchor[{i}].residual", residual, settings.residual_tol))
    report.artifacts["anchor"] = records


def run_corona(job: Job, settings: RunSettings) -> Report:
    problem = CoronaProblem(job.require("phi"), job.measure_or_empty)
    solver = CoronaSolver(settings.degree_cap, settings.trial_degree, settings.seed)
    try:
        certificate = solver.solve(problem)
    except CoronaConditionError as e:
        return Report().add(CheckItem("corona_condition", None, None, False, str(e)))
    except DegreeCapExceeded as e:
        return Report().add(CheckItem("base_solution", None, None, None, str(e)))
    report = verify_certificate(problem, certificate, settings.residual_tol)
    _anchor_artifacts(problem, certificate, settings, report)
    return report


def run_koszul_check(job: Job, settings: RunSettings) -> Report:
    report = Report()
    if job.vector_a is not None:
        d = job.vector_d if job.vector_d is not None else job.vector_a
        deviations = check_identities(job.vector_a, d, seed=settings.seed)
        scale = deviations.scale
        report.add(at_most("identity_a", deviations.kernel, 1e-12 * scale))
        report.add(at_most("identity_b", deviations.gram, 1e-12 * scale))
        report.add(at_most("identity_c", deviations.cross, 1e-12 * scale))
        report.artifacts["deviations"] = deviations.to_dict()
    if job.phi is not None:
        phi = job.phi
        e = job.solution if job.solution is not None else bezout_base(phi, settings.degree_cap)[0]
        points = [atom.zeta for atom in job.measure_or_empty]
        if job.zeta is not None:
            points.append(job.zeta)
        for i, zeta in enumerate(points):
            gap = koszul_solution_form(phi, e, zeta).distance(lift(phi, e, zeta))
            report.add(at_most(f"koszul_vs_lift[{i}]", gap, KOSZUL_AGREEMENT))
    if not report.items:
        job.require("vector_a")
    return report


def run_reduce(job: Job, settings: RunSettings) -> Report:
    f, h = job.require("f", "h")
    try:
        witness = PairReducer(settings.budget).reduce(f, h, job.measure_or_empty)
    except EtaNotCertifiedError as e:
        return Report().add(CheckItem("eta", 0.0, 0.0, None, str(e)))
    if witness is None:
        return Report().add(CheckItem("reducer_found", None, None, None, "NOT_FOUND within budget"))
    report = verify_witness(f, h, witness)
    report.add(CheckItem("root_margin_budget", witness.root_margin, settings.root_margin, witness.root_margin >= settings.root_margin))
    return report


def run_verify_suite(job: Job, settings: RunSettings) -> Report:
    return run_suite(settings)


def run_grid_export(job: Job, settings: RunSettings) -> Report:
    """Polar-grid CSV of Σ|φ_j|² and |b_j|; B is solved for when the job does not carry one."""
    phi = job.require("phi")
    report = Report()
    solution = job.solution
    if solution is None:
        solver = CoronaSolver(settings.degree_cap, settings.trial_degree, settings.seed)
        try:
            solution = solver.solve(CoronaProblem(phi, job.measure_or_empty)).solution
        except CoronaConditionError as e:
            report.add(CheckItem("corona_condition", None, None, False, str(e)))
        except DegreeCapExceeded as e:
            report.add(CheckItem("base_solution", None, None, None, str(e)))
    text = grid_export(phi, settings.resolution, angles=settings.angles, solution=solution)
    rows = text.count("\n") - 1
    report.add(CheckItem("rows", rows, settings.resolution * settings.angles, rows == settings.resolution * settings.angles))
    report.artifacts["csv"] = text
    return report


HANDLERS: Dict[Command, Callable[[Job, RunSettings], Report]] = {
    Command.NORM: run_norm,
    Command.LDI: run_ldi,
    Command.MULTNORM: run_multnorm,
    Command.CORONA: run_corona,
    Command.KOSZUL_CHECK: run_koszul_check,
    Command.REDUCE: run_reduce,
    Command.VERIFY_SUITE: run_verify_suite,
    Command.GRID_EXPORT: run_grid_export,
}


def run(job: Job) -> Report:
    """Run one validated job with its params applied over the configured defaults."""
    settings = RunSettings.from_params(job.params)
    logger.info("running %s", job.command.value)
    report = HANDLERS[job.command](job, settings)
    logger.info("%s finished with status %s", job.command.value, report.status.value)
    return report
