import numpy as np
import pytest

from src.corona.koszul import build_q, check_identities, koszul_product, koszul_solution_form
from src.errors import DegenerateAtomError, InputError
from src.polynomials.polynomial import Polynomial
from src.spaces.measure import FunctionTuple


def test_build_q_single_pair():
    q = build_q([1.0, 0.0])
    assert q.columns == 1
    assert np.allclose(q.to_dense(), [[0.0], [-1.0]])


def test_build_q_one_entry_has_no_columns():
    q = build_q([3.0])
    assert q.to_dense().shape == (1, 0)
    assert list(q.entries()) == []


def test_build_q_gram_example():
    a = np.array([1.0, 1.0]) / np.sqrt(2.0)
    dense = build_q(a).to_dense()
    assert np.allclose(dense[:, 0], np.array([1.0, -1.0]) / np.sqrt(2.0))
    assert np.allclose(dense @ dense.conj().T, [[0.5, -0.5], [-0.5, 0.5]])


def test_build_q_column_order():
    q = build_q([1.0, 2.0, 3.0])
    assert q.pairs == ((0, 1), (0, 2), (1, 2))
    dense = q.to_dense()
    assert np.allclose(dense[:, 1], [3.0, 0.0, -1.0])


def test_apply_matches_dense(rng):
    a = rng.standard_normal(6) + 1j * rng.standard_normal(6)
    q = build_q(a)
    x = rng.standard_normal(q.columns)
    assert np.allclose(q.apply(x), q.to_dense() @ x)
    with pytest.raises(InputError):
        q.apply(np.ones(q.columns + 1))


def test_build_q_rejects_empty():
    with pytest.raises(InputError) as info:
        build_q([])
    assert info.value.code == "EMPTY_VECTOR"


def test_identities_exact_cases():
    deviations = check_identities([1.0, 0.0], [1.0, 0.0])
    assert deviations.kernel == deviations.gram == deviations.cross == 0.0
    zero = check_identities(np.zeros(4), np.zeros(4))
    assert zero.to_dict() == {"kernel": 0.0, "gram": 0.0, "cross": 0.0, "scale": 1.0}


@pytest.mark.parametrize("n", [2, 5, 10])
def test_identities_random(rng, n):
    a = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    d = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    assert check_identities(a, d).within(1e-13)


def test_identities_length_mismatch():
    with pytest.raises(InputError) as info:
        check_identities([1.0, 2.0], [1.0])
    assert info.value.code == "LENGTH_MISMATCH"


def test_koszul_product_matches_pointwise(rng, z):
    phi = FunctionTuple.of(z, 1.0 - z, z * z + 0.5)
    e = FunctionTuple.of(Polynomial(rng.standard_normal(2)), 1.0, z)
    product = koszul_product(phi, e)
    point = 0.3 - 0.2j
    qa = build_q(phi(point)).to_dense()
    qd = build_q(e(point)).to_dense()
    expected = qa @ qd.T
    values = np.array([[entry(point) for entry in row] for row in product])
    assert np.allclose(values, expected)


def test_solution_form_worked_example(z):
    phi = FunctionTuple.of(z, 1.0 - z)
    b = koszul_solution_form(phi, FunctionTuple.of(1.0, 1.0), 1.0)
    assert b.distance(FunctionTuple.of(2.0 - z, 1.0 - z)) < 1e-14
    assert phi.bezout_residual(b) < 1e-14


def test_solution_form_trivial_cases(z):
    single = koszul_solution_form(FunctionTuple.of(2.0 + z), FunctionTuple.of(0.5), 1.0)
    assert single.distance(FunctionTuple.of(0.5)) == 0.0
    constant = koszul_solution_form(FunctionTuple.of(1.0, 0.0), FunctionTuple.of(1.0, 0.0), 1j)
    assert constant.distance(FunctionTuple.of(1.0, 0.0)) < 1e-15


def test_solution_form_degenerate_atom(z):
    with pytest.raises(DegenerateAtomError):
        koszul_solution_form(FunctionTuple.of(z - 1.0, (z - 1.0) * z), FunctionTuple.of(1.0, 1.0), 1.0)
