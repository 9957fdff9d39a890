import math
from dataclasses import replace

import pytest

from src.api.suite import curated_pairs
from src.errors import BudgetError, EtaNotCertifiedError, PreconditionError
from src.polynomials.polynomial import Polynomial, UnitCirclePoint
from src.report import Status
from src.spaces.measure import AtomicMeasure
from src.stable_rank.reduction import (
    Case,
    PairReducer,
    case1_transform,
    case2_transform,
    eta,
    reduce,
    replay_trace,
    verify_witness,
)
from src.stable_rank.search import SearchBudget, combination_margin, search_g

AT_ONE = AtomicMeasure.dirac(1.0)


def test_eta_examples(z):
    bound = eta(z, 1.0 - z)
    assert 0.95 <= bound.lower <= 1.0
    assert eta(Polynomial.constant(1.0), z ** 4).lower >= 1.0 - 1e-12
    assert eta(z, z).lower == 0.0


def test_case1_examples(z):
    (f, h), certified = case1_transform(z, 1.0 - z, 1.0, eta_lower=1.0)
    assert f.allclose(z)
    assert h.allclose((z - 1.0) * (1.0 - z))
    assert certified == pytest.approx(0.5)

    (f, h), certified = case1_transform(Polynomial.constant(3.0), z * z + 1.0, -1.0, eta_lower=0.8)
    assert h.is_zero
    assert certified == pytest.approx(0.8)

    (_, h), certified = case1_transform(2.0 + z, Polynomial.constant(1.0), 1.0, eta_lower=0.7)
    assert h.allclose(z - 1.0)
    assert certified == pytest.approx(0.7)


def test_case1_bound_is_sound(z):
    before = eta(2.0 + z, Polynomial.constant(1.0)).lower
    (f, h), certified = case1_transform(2.0 + z, Polynomial.constant(1.0), 1.0, eta_lower=before)
    assert eta(f, h).lower >= certified


def test_case1_bound_with_large_second_entry():
    (f, h), certified = case1_transform(Polynomial.constant(3.0), Polynomial.constant(10.0), 1.0)
    assert h.is_zero
    assert certified == pytest.approx(1.5)
    assert certified <= eta(f, h).lower + 1e-6


def test_case1_bound_on_random_pairs(rng):
    checked = 0
    while checked < 50:
        f = Polynomial(rng.uniform(-0.5, 0.5, 3) + 1j * rng.uniform(-0.5, 0.5, 3))
        h = Polynomial(rng.uniform(-2, 2, 3) + 1j * rng.uniform(-2, 2, 3))
        zeta = UnitCirclePoint.at_angle(rng.uniform(0, 2 * math.pi))
        before = eta(f, h).lower
        if abs(f(zeta.value)) <= 0.1 or before <= 0.0:
            continue
        (new_f, new_h), certified = case1_transform(f, h, zeta, eta_lower=before)
        assert certified <= eta(new_f, new_h).lower + 1e-6
        checked += 1


def test_case1_needs_nonvanishing_f(z):
    with pytest.raises(PreconditionError):
        case1_transform(1.0 - z, Polynomial.constant(1.0), 1.0)


def test_case2_examples(z):
    f, h = case2_transform(1.0 - z, Polynomial.constant(1.0))
    assert f.allclose(2.0 - z) and h.allclose(Polynomial.constant(1.0))
    f, _ = case2_transform(Polynomial.zero(), Polynomial.constant(1.0))
    assert f.allclose(Polynomial.constant(1.0))
    f, h = case2_transform(z - 1.0, z)
    assert f.allclose(2.0 * z - 1.0) and h.allclose(z)


def test_search_examples(z):
    g = search_g(z, -((1.0 - z) ** 2))
    assert g is not None
    assert g.distance(-(z + 8.0) / 27.0) < 1e-8
    assert search_g(2.0 - z, Polynomial.constant(1.0)).is_zero
    assert search_g(Polynomial.constant(0.5), z).is_zero


def test_search_not_found_is_a_value(z):
    assert search_g(z, z, SearchBudget(max_iters=50)) is None


def test_budget_validation():
    with pytest.raises(BudgetError):
        SearchBudget(max_degree=-1)
    with pytest.raises(BudgetError):
        SearchBudget(margin=0.0)


def test_combination_margin(z):
    assert combination_margin(Polynomial.constant(2.0)) == math.inf
    assert combination_margin(Polynomial.zero()) == -math.inf
    assert combination_margin(z + 3.0) == pytest.approx(2.0)


def test_reduce_worked_example(z):
    witness = reduce(z, 1.0 - z, AT_ONE)
    assert witness is not None
    assert witness.y.distance(-(z + 8.0) * (z - 1.0) / 27.0) < 1e-8
    assert witness.u.distance((z + 2.0) ** 3 / 27.0) < 1e-8
    assert witness.root_margin == pytest.approx(1.0, abs=1e-4)
    assert [step.case for step in witness.case_trace] == [Case.CASE1]


def test_reduce_case2_example(z):
    witness = reduce(1.0 - z, Polynomial.constant(1.0), AT_ONE)
    assert witness.y.allclose(Polynomial.constant(1.0))
    assert witness.u.allclose(2.0 - z)
    assert witness.root_margin == pytest.approx(1.0)
    assert [step.case for step in witness.case_trace] == [Case.CASE2, Case.CASE1]


def test_reduce_already_invertible(z):
    witness = reduce(Polynomial.constant(2.0), z, AT_ONE)
    assert witness.y.is_zero
    assert witness.u.allclose(Polynomial.constant(2.0))


def test_reduce_rejects_non_unimodular(z):
    with pytest.raises(EtaNotCertifiedError):
        reduce(z, z, AT_ONE)


def test_replay_trace_recovers_combination(z):
    witness = reduce(z, 1.0 - z, AT_ONE)
    assert replay_trace(z, 1.0 - z, witness.case_trace, witness.g).distance(witness.u) < 1e-10


def test_verify_witness(z):
    witness = reduce(z, 1.0 - z, AT_ONE)
    assert verify_witness(z, 1.0 - z, witness).status is Status.PASS

    bad_identity = replace(witness, y=witness.y + z)
    report = verify_witness(z, 1.0 - z, bad_identity)
    assert report.status is Status.FAIL
    assert "identity" in [item.name for item in report.failures()]

    bad_margin = replace(witness, root_margin=2.0)
    report = verify_witness(z, 1.0 - z, bad_margin)
    assert [item.name for item in report.failures()] == ["root_margin_match"]


@pytest.mark.parametrize("name, f, h, measure", curated_pairs(), ids=[pair[0] for pair in curated_pairs()])
def test_curated_pairs_reduce(name, f, h, measure):
    witness = PairReducer().reduce(f, h, measure)
    assert witness is not None, name
    assert witness.root_margin >= 1e-3
    assert verify_witness(f, h, witness).status is Status.PASS
