"""Effective run parameters: configuration defaults overridden by a job's params map."""
from dataclasses import dataclass, fields, replace
from typing import Optional

import config
from src.api.schemas import JobParams
from src.stable_rank.search import SearchBudget
from src.visualization.grid_export import DEFAULT_ANGLES, DEFAULT_RESOLUTION


@dataclass(frozen=True)
class RunSettings:
    residual_tol: float = config.RESIDUAL_TOL
    root_margin: float = config.ROOT_MARGIN
    grid_n: int = config.GRID_N
    seed: int = config.SEED
    quad_tol: float = config.QUAD_TOL
    trial_degree: int = config.TRIAL_DEGREE
    max_degree: int = config.MAX_DEGREE
    max_iters: int = config.MAX_ITERS
    degree_cap: Optional[int] = None
    workers: int = config.WORKERS
    resolution: int = DEFAULT_RESOLUTION
    angles: int = DEFAULT_ANGLES
    full: bool = False

    @classmethod
    def from_params(cls, params: Optional[JobParams] = None) -> "RunSettings":
        settings = cls()
        if params is None:
            return settings
        overrides = {f.name: getattr(params, f.name) for f in fields(cls) if getattr(params, f.name, None) is not None}
        return replace(settings, **overrides)

    @property
    def budget(self) -> SearchBudget:
        return SearchBudget(max_degree=self.max_degree, max_iters=self.max_iters, seed=self.seed, margin=self.root_margin)
