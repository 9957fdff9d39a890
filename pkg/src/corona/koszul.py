"""Pair-column Koszul matrices and the polynomial correction B = E + Q_Φ Q_E^T v.

For a vector A = (a_1, ..., a_n) the matrix Q_A has one column per pair
(i, j), i < j, in lexicographic order, holding a_j at row i and -a_i at row j.
It satisfies

    (a) A·(Q_A x) = 0
    (b) (AA*)I - A*A = Q_A Q_A*
    (c) (AD^T)I - D^T A = Q_A Q_D^T
"""
import itertools
import logging
import math
from dataclasses import dataclass
from typing import Iterator, List, Sequence, Tuple

import numpy as np

from src.errors import DegenerateAtomError, InputError
from src.polynomials.polynomial import Polynomial, UnitCirclePoint
from src.spaces.measure import FunctionTuple

logger = logging.getLogger(__name__)

DEGENERATE_NORM = 1e-9
IDENTITY_SAMPLES = 16


@dataclass(frozen=True, eq=False)
class KoszulMatrix:
    source: np.ndarray
    pairs: Tuple[Tuple[int, int], ...]

    @property
    def rows(self) -> int:
        return len(self.source)

    @property
    def columns(self) -> int:
        return len(self.pairs)

    def entries(self) -> Iterator[Tuple[int, int, complex]]:
        """Stored (row, column, value) triples; two per column."""
        a = self.source
        for k, (i, j) in enumerate(self.pairs):
            yield i, k, complex(a[j])
            yield j, k, complex(-a[i])

    def to_dense(self) -> np.ndarray:
        q = np.zeros((self.rows, self.columns), dtype=complex)
        for row, col, value in self.entries():
            q[row, col] = value
        return q

    def apply(self, x: np.ndarray) -> np.ndarray:
        """Q_A x without forming the dense matrix."""
        x = np.asarray(x, dtype=complex)
        if x.shape != (self.columns,):
            raise InputError(f"expected a vector of length {self.columns}, got shape {x.shape}", code="LENGTH_MISMATCH")
        out = np.zeros(self.rows, dtype=complex)
        a = self.source
        for k, (i, j) in enumerate(self.pairs):
            out[i] += a[j] * x[k]
            out[j] -= a[i] * x[k]
        return out


def _pairs(n: int) -> Tuple[Tuple[int, int], ...]:
    return tuple(itertools.combinations(range(n), 2))


def build_q(a: Sequence) -> KoszulMatrix:
    source = np.asarray(a, dtype=complex).ravel()
    if source.size == 0:
        raise InputError("the Koszul matrix needs a nonempty vector", code="EMPTY_VECTOR")
    source = source.copy()
    source.setflags(write=False)
    return KoszulMatrix(source=source, pairs=_pairs(len(source)))


@dataclass(frozen=True)
class KoszulDeviations:
    """Max absolute entry errors of identities (a), (b), (c).

    ``kernel`` is measured on unit-norm random x; ``scale`` = 1 + ‖A‖² + ‖A‖‖D‖.
    """

    kernel: float
    gram: float
    cross: float
    scale: float

    def within(self, factor: float = 1e-12) -> bool:
        return max(self.kernel, self.gram, self.cross) <= factor * self.scale

    def to_dict(self) -> dict:
        return {"kernel": self.kernel, "gram": self.gram, "cross": self.cross, "scale": self.scale}


def check_identities(a: Sequence, d: Sequence, seed: int = 0x5EED, samples: int = IDENTITY_SAMPLES) -> KoszulDeviations:
    """Deviations of the three Q_A identities for the vectors a and d.

    Args:
        a: Nonempty complex vector A.
        d: Complex vector D of the same length.
        seed: Seed of the random test vectors for the operator identities.
        samples: Number of random test vectors.

    Returns:
        Largest absolute deviations together with the scale they compare against.

    Raises:
        InputError: LENGTH_MISMATCH or EMPTY_VECTOR.
    """
    a = np.asarray(a, dtype=complex).ravel()
    d = np.asarray(d, dtype=complex).ravel()
    if a.shape != d.shape:
        raise InputError(f"vector lengths differ ({a.size} vs {d.size})", code="LENGTH_MISMATCH")
    qa = build_q(a)
    qd = build_q(d)
    n = len(a)

    kernel = 0.0
    if qa.columns:
        rng = np.random.default_rng(seed)
        for _ in range(samples):
            x = rng.standard_normal(qa.columns) + 1j * rng.standard_normal(qa.columns)
            x /= np.linalg.norm(x)
            kernel = max(kernel, abs(np.dot(a, qa.apply(x))))

    dense_a = qa.to_dense()
    dense_d = qd.to_dense()
    identity = np.eye(n)
    gram_lhs = np.vdot(a, a).real * identity - np.outer(np.conj(a), a)
    gram = float(np.max(np.abs(gram_lhs - dense_a @ dense_a.conj().T)))
    cross_lhs = np.dot(a, d) * identity - np.outer(d, a)
    cross = float(np.max(np.abs(cross_lhs - dense_a @ dense_d.T)))

    norm_a = float(np.linalg.norm(a))
    scale = 1.0 + norm_a ** 2 + norm_a * float(np.linalg.norm(d))
    return KoszulDeviations(kernel=float(kernel), gram=gram, cross=cross, scale=scale)


def koszul_product(phi: FunctionTuple, e: FunctionTuple) -> List[List[Polynomial]]:
    """The n×n polynomial matrix Q_{Φ(z)} Q_{E(z)}^T, accumulated column by column."""
    if len(phi) != len(e):
        raise InputError(f"tuple lengths differ ({len(phi)} vs {len(e)})", code="LENGTH_MISMATCH")
    n = len(phi)
    product = [[Polynomial.zero() for _ in range(n)] for _ in range(n)]
    for i, j in _pairs(n):
        # Column (i, j) of Q_Φ is (φ_j at i, -φ_i at j); same layout for Q_E.
        product[i][i] = product[i][i] + phi[j] * e[j]
        product[i][j] = product[i][j] - phi[j] * e[i]
        product[j][i] = product[j][i] - phi[i] * e[j]
        product[j][j] = product[j][j] + phi[i] * e[i]
    return product


def koszul_solution_form(phi: FunctionTuple, e: FunctionTuple, zeta) -> FunctionTuple:
    """B^T = E^T + Q_{Φ(z)} Q_{E(z)}^T Φ(ζ)*/|Φ(ζ)|^2."""
    point = zeta if isinstance(zeta, UnitCirclePoint) else UnitCirclePoint(zeta)
    values = phi(point.value)
    norm = float(np.linalg.norm(values))
    if norm < DEGENERATE_NORM or not math.isfinite(norm):
        raise DegenerateAtomError(f"|Φ(ζ)| = {norm:.3g} at ζ = {point.value}")
    v = np.conj(values) / norm ** 2

    product = koszul_product(phi, e)
    entries = []
    for r in range(len(phi)):
        b = e[r]
        for s in range(len(phi)):
            if v[s] != 0:
                b = b + product[r][s] * v[s]
        entries.append(b)
    return FunctionTuple(tuple(entries))
