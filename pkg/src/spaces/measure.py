"""Atomic measures on the circle and finite tuples of polynomials."""
import itertools
from dataclasses import dataclass, field
from typing import Iterator, Sequence, Tuple, Union

import numpy as np

from src.errors import InputError
from src.polynomials.polynomial import Number, Polynomial, UnitCirclePoint

MIN_ATOM_SEPARATION = 1e-9


@dataclass(frozen=True)
class Atom:
    zeta: UnitCirclePoint
    weight: float = 1.0


@dataclass(frozen=True)
class AtomicMeasure:
    """μ = Σ a_i δ_{ζ_i}, atoms kept in the order given.

    The empty measure is allowed; D(0) is the Hardy space H^2.
    """

    atoms: Tuple[Atom, ...] = ()

    def __post_init__(self):
        atoms = tuple(self.atoms)
        object.__setattr__(self, "atoms", atoms)
        for atom in atoms:
            if not (atom.weight > 0.0) or not np.isfinite(atom.weight):
                raise InputError(f"atom weight must be positive, got {atom.weight}", code="NONPOSITIVE_WEIGHT")
        for a, b in itertools.combinations(atoms, 2):
            if abs(a.zeta.value - b.zeta.value) < MIN_ATOM_SEPARATION:
                raise InputError(f"atoms at {a.zeta.value} and {b.zeta.value} coincide", code="DUPLICATE_ATOM")

    @classmethod
    def from_points(cls, points: Sequence[Tuple[Union[Number, UnitCirclePoint], float]]) -> "AtomicMeasure":
        atoms = []
        for zeta, weight in points:
            point = zeta if isinstance(zeta, UnitCirclePoint) else UnitCirclePoint(zeta)
            atoms.append(Atom(point, float(weight)))
        return cls(tuple(atoms))

    @classmethod
    def dirac(cls, zeta: Union[Number, UnitCirclePoint] = 1.0, weight: float = 1.0) -> "AtomicMeasure":
        return cls.from_points([(zeta, weight)])

    def prefix(self, k: int) -> "AtomicMeasure":
        """μ_k, the measure made of the first k atoms."""
        return AtomicMeasure(self.atoms[:k])

    @property
    def has_unit_weights(self) -> bool:
        return all(atom.weight == 1.0 for atom in self.atoms)

    def __len__(self) -> int:
        return len(self.atoms)

    def __iter__(self) -> Iterator[Atom]:
        return iter(self.atoms)

    def to_dict(self) -> dict:
        return {
            "atoms": [
                {"zeta": [atom.zeta.value.real, atom.zeta.value.imag], "weight": atom.weight} for atom in self.atoms
            ]
        }


@dataclass(frozen=True, eq=False)
class FunctionTuple:
    """The row vector Φ = (φ_1, ..., φ_n)."""

    entries: Tuple[Polynomial, ...] = field(default_factory=tuple)

    def __post_init__(self):
        entries = tuple(p if isinstance(p, Polynomial) else Polynomial(p) for p in self.entries)
        if not entries:
            raise InputError("a function tuple needs at least one entry", code="EMPTY_TUPLE")
        object.__setattr__(self, "entries", entries)

    @classmethod
    def of(cls, *polys) -> "FunctionTuple":
        return cls(tuple(p if isinstance(p, Polynomial) else Polynomial.constant(p) for p in polys))

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[Polynomial]:
        return iter(self.entries)

    def __getitem__(self, j: int) -> Polynomial:
        return self.entries[j]

    @property
    def max_degree(self) -> int:
        return max(p.degree for p in self.entries)

    @property
    def is_zero(self) -> bool:
        return all(p.is_zero for p in self.entries)

    def __call__(self, z) -> np.ndarray:
        """Values φ_j(z); shape (n,) for scalar z, (n, len(z)) for arrays."""
        return np.array([p(z) for p in self.entries], dtype=complex)

    def sum_sq(self, z):
        values = self(z)
        return np.sum(np.abs(values) ** 2, axis=0)

    def dot(self, other: "FunctionTuple") -> Polynomial:
        """Φ·E^T = Σ_j φ_j e_j."""
        if len(other) != len(self):
            raise InputError(f"tuple lengths differ ({len(self)} vs {len(other)})", code="LENGTH_MISMATCH")
        total = Polynomial.zero()
        for p, q in zip(self.entries, other.entries):
            total = total + p * q
        return total

    def bezout_residual(self, other: "FunctionTuple") -> float:
        """Max coefficient of Φ·E^T - 1."""
        return (self.dot(other) - 1.0).max_abs_coeff()

    def __mul__(self, other) -> "FunctionTuple":
        return FunctionTuple(tuple(p * other for p in self.entries))

    __rmul__ = __mul__

    def __truediv__(self, scalar: Number) -> "FunctionTuple":
        return FunctionTuple(tuple(p / scalar for p in self.entries))

    def __add__(self, other: "FunctionTuple") -> "FunctionTuple":
        return FunctionTuple(tuple(p + q for p, q in zip(self.entries, other.entries)))

    def distance(self, other: "FunctionTuple") -> float:
        return max(p.distance(q) for p, q in zip(self.entries, other.entries))

    def to_dict(self) -> dict:
        return {"entries": [{"coeffs": p.to_pairs()} for p in self.entries]}

    def __repr__(self) -> str:
        return f"FunctionTuple({', '.join(repr(p) for p in self.entries)})"
