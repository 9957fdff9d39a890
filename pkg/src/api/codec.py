"""JSON job parsing and canonical serialization."""
import json
import logging
import math
from dataclasses import dataclass
from typing import Any, List, Optional, Union

import numpy as np
from pydantic import ValidationError

from src.api.schemas import (
    AtomModel,
    Command,
    JobInputs,
    JobParams,
    JobSpec,
    MeasureModel,
    PolynomialModel,
    TupleModel,
)
from src.errors import InputError
from src.polynomials.polynomial import Polynomial, UnitCirclePoint
from src.spaces.measure import Atom, AtomicMeasure, FunctionTuple

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Job:
    """A validated job with its inputs converted to domain values."""

    command: Command
    params: JobParams
    polynomial: Optional[Polynomial] = None
    f: Optional[Polynomial] = None
    h: Optional[Polynomial] = None
    phi: Optional[FunctionTuple] = None
    solution: Optional[FunctionTuple] = None
    measure: Optional[AtomicMeasure] = None
    zeta: Optional[UnitCirclePoint] = None
    vector_a: Optional[List[complex]] = None
    vector_d: Optional[List[complex]] = None

    def require(self, *names: str):
        missing = [name for name in names if getattr(self, name) is None]
        if missing:
            raise InputError(f"command '{self.command.value}' needs input(s): {', '.join(missing)}", code="SCHEMA")
        values = tuple(getattr(self, name) for name in names)
        return values[0] if len(values) == 1 else values

    @property
    def measure_or_empty(self) -> AtomicMeasure:
        return self.measure if self.measure is not None else AtomicMeasure()


def polynomial_from_model(model: PolynomialModel) -> Polynomial:
    return Polynomial([complex(re, im) for re, im in model.coeffs])


def tuple_from_model(model: TupleModel) -> FunctionTuple:
    return FunctionTuple(tuple(polynomial_from_model(p) for p in model.entries))


def measure_from_model(model: MeasureModel) -> AtomicMeasure:
    atoms = [Atom(UnitCirclePoint(complex(*atom.zeta)), float(atom.weight)) for atom in model.atoms]
    return AtomicMeasure(tuple(atoms))


def _optional(convert, value):
    return convert(value) if value is not None else None


def _schema_error(error: ValidationError) -> InputError:
    details = error.errors()
    if any(item["type"] == "extra_forbidden" for item in details):
        keys = [".".join(str(part) for part in item["loc"]) for item in details if item["type"] == "extra_forbidden"]
        return InputError(f"unknown key(s): {', '.join(keys)}", code="UNKNOWN_KEY")
    if all(item["loc"] and item["loc"][0] == "params" for item in details):
        return InputError(f"invalid parameter: {details[0]['msg']} at {details[0]['loc']}", code="INVALID_PARAM")
    first = details[0]
    return InputError(f"schema violation at {'.'.join(str(p) for p in first['loc'])}: {first['msg']}", code="SCHEMA")


def parse_input(text: Union[bytes, str]) -> Job:
    """Decode, validate and convert a job document.

    Args:
        text: JSON job document, as bytes or text.

    Returns:
        The Job with domain objects in place of the wire models.

    Raises:
        InputError: With code MALFORMED_JSON, UNKNOWN_KEY, INVALID_PARAM,
            SCHEMA, OFF_CIRCLE or NONPOSITIVE_WEIGHT.
    """
    try:
        raw = json.loads(text.decode("utf-8") if isinstance(text, bytes) else text)
    except (UnicodeDecodeError, json.JSONDecodeError) as e:
        raise InputError(f"malformed JSON: {e}", code="MALFORMED_JSON") from e
    try:
        spec = JobSpec.model_validate(raw)
    except ValidationError as e:
        raise _schema_error(e) from e

    inputs = spec.inputs
    job = Job(
        command=spec.command,
        params=spec.params,
        polynomial=_optional(polynomial_from_model, inputs.polynomial),
        f=_optional(polynomial_from_model, inputs.f),
        h=_optional(polynomial_from_model, inputs.h),
        phi=_optional(tuple_from_model, inputs.tuple),
        solution=_optional(tuple_from_model, inputs.solution),
        measure=_optional(measure_from_model, inputs.measure),
        zeta=_optional(lambda z: UnitCirclePoint(complex(*z)), inputs.zeta),
        vector_a=_optional(lambda v: [complex(*c) for c in v], inputs.vector_a),
        vector_d=_optional(lambda v: [complex(*c) for c in v], inputs.vector_d),
    )
    logger.debug("parsed %s job", job.command.value)
    return job


def _pair(z: complex) -> List[float]:
    return [float(z.real), float(z.imag)]


def _polynomial_model(p: Polynomial) -> PolynomialModel:
    return PolynomialModel(coeffs=[tuple(pair) for pair in p.to_pairs()])


def _tuple_model(phi: FunctionTuple) -> TupleModel:
    return TupleModel(entries=[_polynomial_model(p) for p in phi])


def _measure_model(measure: AtomicMeasure) -> MeasureModel:
    return MeasureModel(atoms=[AtomModel(zeta=tuple(_pair(a.zeta.value)), weight=a.weight) for a in measure])


def to_spec(job: Job) -> JobSpec:
    """Rebuild the wire model from domain values (points renormalized, zeros stripped)."""
    inputs = JobInputs(
        polynomial=_optional(_polynomial_model, job.polynomial),
        f=_optional(_polynomial_model, job.f),
        h=_optional(_polynomial_model, job.h),
        tuple=_optional(_tuple_model, job.phi),
        solution=_optional(_tuple_model, job.solution),
        measure=_optional(_measure_model, job.measure),
        zeta=_optional(lambda z: tuple(_pair(z.value)), job.zeta),
        vector_a=_optional(lambda v: [tuple(_pair(c)) for c in v], job.vector_a),
        vector_d=_optional(lambda v: [tuple(_pair(c)) for c in v], job.vector_d),
    )
    return JobSpec(command=job.command, inputs=inputs, params=job.params)


def clean(value: Any) -> Any:
    """JSON-ready copy: numpy scalars unwrapped, complex as [re, im], non-finite floats as null."""
    if isinstance(value, dict):
        return {str(k): clean(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [clean(v) for v in value]
    if isinstance(value, np.ndarray):
        return [clean(v) for v in value.tolist()]
    if isinstance(value, np.generic):
        value = value.item()
    if isinstance(value, bool) or value is None or isinstance(value, (str, int)):
        return value
    if isinstance(value, complex):
        return [clean(value.real), clean(value.imag)]
    if isinstance(value, float):
        return value if math.isfinite(value) else None
    return value


def serialize(value: Any) -> str:
    """Canonical JSON text: sorted keys, compact separators."""
    return json.dumps(clean(value), sort_keys=True, separators=(",", ":"), allow_nan=False)


def dump_job(job: Job) -> str:
    return serialize(to_spec(job).model_dump(mode="json", exclude_none=True))
