from enum import Enum
from typing import List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field

# Complex numbers always travel as [re, im].
ComplexPair = Tuple[float, float]


class Command(str, Enum):
    NORM = "norm"
    LDI = "ldi"
    MULTNORM = "multnorm"
    CORONA = "corona"
    KOSZUL_CHECK = "koszul-check"
    REDUCE = "reduce"
    VERIFY_SUITE = "verify-suite"
    GRID_EXPORT = "grid-export"


class StrictModel(BaseModel):
    model_config = ConfigDict(extra="forbid")


class PolynomialModel(StrictModel):
    coeffs: List[ComplexPair]


class AtomModel(StrictModel):
    zeta: ComplexPair
    weight: float = 1.0


class MeasureModel(StrictModel):
    atoms: List[AtomModel] = Field(default_factory=list)


class TupleModel(StrictModel):
    entries: List[PolynomialModel]


class JobInputs(StrictModel):
    polynomial: Optional[PolynomialModel] = None
    f: Optional[PolynomialModel] = None
    h: Optional[PolynomialModel] = None
    tuple: Optional[TupleModel] = None
    solution: Optional[TupleModel] = None
    measure: Optional[MeasureModel] = None
    zeta: Optional[ComplexPair] = None
    vector_a: Optional[List[ComplexPair]] = None
    vector_d: Optional[List[ComplexPair]] = None


class JobParams(StrictModel):
    residual_tol: Optional[float] = Field(default=None, gt=0)
    root_margin: Optional[float] = Field(default=None, gt=0)
    grid_n: Optional[int] = Field(default=None, gt=0)
    seed: Optional[int] = Field(default=None, ge=0)
    quad_tol: Optional[float] = Field(default=None, gt=0)
    trial_degree: Optional[int] = Field(default=None, ge=0)
    max_degree: Optional[int] = Field(default=None, ge=0)
    max_iters: Optional[int] = Field(default=None, ge=0)
    degree_cap: Optional[int] = Field(default=None, ge=0)
    workers: Optional[int] = Field(default=None, ge=1)
    resolution: Optional[int] = Field(default=None, ge=2)
    angles: Optional[int] = Field(default=None, ge=1)
    full: Optional[bool] = None


class JobSpec(StrictModel):
    command: Command
    inputs: JobInputs = Field(default_factory=JobInputs)
    params: JobParams = Field(default_factory=JobParams)
