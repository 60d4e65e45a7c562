from pathlib import Path
from typing import List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from .problems import McConfig, SolverOptions
from .tolerances import RankTolerance, SetTolerance


class RunConfig(BaseModel):
    """Everything one CLI invocation needs, validated before any work starts."""

    model_config = ConfigDict(frozen=True)

    command: Literal["solve", "df", "validate", "sure-path", "gen-data"]
    x: Optional[Path] = None
    y: Optional[Path] = None
    mu: Optional[Path] = None
    # identity | chain | graph:FILE | trend:K; None means the plain lasso
    penalty: Optional[str] = None
    lam: Optional[float] = Field(default=None, ge=0, allow_inf_nan=False)
    lambda_grid: Optional[List[float]] = None
    lambda2: Optional[float] = Field(default=None, gt=0, allow_inf_nan=False)
    intercept: bool = False
    sigma: float = Field(default=1.0, gt=0, allow_inf_nan=False)
    set_tolerance: SetTolerance = SetTolerance()
    rank_tolerance: RankTolerance = RankTolerance()
    solver: SolverOptions = SolverOptions()
    monte_carlo: McConfig = Field(default_factory=McConfig)
    out: Optional[Path] = None

    # gen-data
    family: str = "gaussian"
    n: Optional[int] = Field(default=None, gt=0)
    p: Optional[int] = Field(default=None, gt=0)
    sparsity: int = Field(default=5, ge=0)
    duplicates: int = Field(default=1, ge=1)
    signal: float = 1.0

    @field_validator("x", "y", "mu")
    @classmethod
    def input_exists(cls, path: Optional[Path]):
        if path is not None and not path.is_file():
            raise ValueError(f"input file not found: {path}")
        return path

    @field_validator("lambda_grid")
    @classmethod
    def grid_positive(cls, grid: Optional[List[float]]):
        if grid is not None and any(not lam > 0 for lam in grid):
            raise ValueError("lambda grid values must be positive")
        return grid

    @model_validator(mode="after")
    def check_combination(self):
        if self.penalty is not None and (self.lambda2 is not None or self.intercept):
            raise ValueError("--d cannot be combined with --lambda2 or --intercept")
        if self.lambda2 is not None and self.intercept:
            raise ValueError("--lambda2 and --intercept are mutually exclusive")
        return self
