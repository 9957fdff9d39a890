import io

import numpy as np
import pandas as pd
import pytest

from src.errors import InputError
from src.polynomials.polynomial import Polynomial
from src.spaces.measure import FunctionTuple
from src.visualization.grid_export import DEFAULT_ANGLES, grid_export, grid_frame, polar_grid


def test_polar_grid_layout():
    frame = polar_grid(3, 4)
    assert len(frame) == 12
    assert frame["r"].tolist()[:4] == [0.0] * 4
    assert frame["r"].iloc[-1] == 1.0
    assert frame["theta"].tolist()[:4] == pytest.approx([0.0, np.pi / 2, np.pi, 3 * np.pi / 2])


def test_constant_tuple_has_unit_sum_sq():
    frame = grid_frame(FunctionTuple.of(1.0), resolution=4, angles=8)
    assert np.all(frame["sum_sq"] == 1.0)


def test_worked_pair_at_half(z):
    frame = grid_frame(FunctionTuple.of(z, 1.0 - z), resolution=3, angles=4)
    row = frame[(frame["r"] == 0.5) & (frame["theta"] == 0.0)]
    assert row["sum_sq"].iloc[0] == pytest.approx(0.5)


def test_solution_columns(z):
    frame = grid_frame(FunctionTuple.of(z, 1.0 - z), 2, 4, solution=FunctionTuple.of(2.0 - z, 1.0 - z))
    assert list(frame.columns) == ["r", "theta", "re_z", "im_z", "sum_sq", "abs_b0", "abs_b1"]
    assert frame["abs_b0"].iloc[0] == pytest.approx(2.0)


def test_csv_text_is_deterministic(z):
    phi = FunctionTuple.of(z, Polynomial([0.3, -0.1j, 1.0]))
    text = grid_export(phi, resolution=2)
    assert text == grid_export(phi, resolution=2)
    assert text.splitlines()[0] == "r,theta,re_z,im_z,sum_sq"
    assert len(text.splitlines()) == 1 + 2 * DEFAULT_ANGLES
    parsed = pd.read_csv(io.StringIO(text))
    assert np.allclose(parsed["sum_sq"], grid_frame(phi, 2)["sum_sq"], rtol=1e-15)


def test_resolution_must_be_at_least_two():
    with pytest.raises(InputError) as info:
        grid_export(FunctionTuple.of(1.0), resolution=1)
    assert info.value.code == "INVALID_PARAM"
