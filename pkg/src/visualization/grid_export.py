"""Polar-grid samples of a tuple (and optionally a solution) as CSV for external plotting."""
import logging
from typing import Optional

import numpy as np
import pandas as pd

from src.errors import InputError
from src.spaces.measure import FunctionTuple

logger = logging.getLogger(__name__)

DEFAULT_RESOLUTION = 32
DEFAULT_ANGLES = 64


def polar_grid(resolution: int, angles: int) -> pd.DataFrame:
    """Radii k/(R-1) for k = 0..R-1 and angles 2πk/A, radius-major."""
    if resolution < 2:
        raise InputError(f"grid resolution must be at least 2, got {resolution}", code="INVALID_PARAM")
    if angles < 1:
        raise InputError(f"grid needs at least one angle, got {angles}", code="INVALID_PARAM")
    radii = np.arange(resolution) / (resolution - 1)
    thetas = 2.0 * np.pi * np.arange(angles) / angles
    r, theta = np.meshgrid(radii, thetas, indexing="ij")
    z = r.ravel() * np.exp(1j * theta.ravel())
    return pd.DataFrame({"r": r.ravel(), "theta": theta.ravel(), "re_z": z.real, "im_z": z.imag})


def grid_frame(
    phi: FunctionTuple,
    resolution: int = DEFAULT_RESOLUTION,
    angles: int = DEFAULT_ANGLES,
    solution: Optional[FunctionTuple] = None,
) -> pd.DataFrame:
    frame = polar_grid(resolution, angles)
    z = frame["re_z"].to_numpy() + 1j * frame["im_z"].to_numpy()
    frame["sum_sq"] = phi.sum_sq(z)
    if solution is not None:
        for j, b in enumerate(solution):
            frame[f"abs_b{j}"] = np.abs(b(z))
    return frame


def grid_export(
    phi: FunctionTuple,
    resolution: int = DEFAULT_RESOLUTION,
    angles: int = DEFAULT_ANGLES,
    solution: Optional[FunctionTuple] = None,
) -> str:
    """CSV text with columns r, theta, re_z, im_z, sum_sq[, abs_b0, ...]; byte-stable for fixed inputs.

    Args:
        phi: Tuple whose Σ|φ_j|² is sampled.
        resolution: Number of radii k/(R - 1), at least 2.
        angles: Number of uniformly spaced angles per radius.
        solution: Optional corona solution; adds one |b_j| column per entry.

    Returns:
        The CSV document, header first, rows radius-major.
    """
    frame = grid_frame(phi, resolution, angles, solution)
    logger.info("exporting %d grid rows", len(frame))
    return frame.to_csv(index=False, lineterminator="\n", float_format="%.17g")
