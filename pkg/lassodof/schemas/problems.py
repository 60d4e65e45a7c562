from typing import List, Literal, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator

from .. import config
from .arrays import Matrix, Vector


class _Problem(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    @property
    def n(self) -> int:
        return self.X.shape[0]

    @property
    def p(self) -> int:
        return self.X.shape[1]

    def with_response(self, y):
        """Same problem with a new response vector (validated)."""
        values = dict(self)
        values["y"] = y
        return type(self)(**values)

    def _check_design(self):
        if self.X.shape[0] == 0 or self.X.shape[1] == 0:
            raise ValueError(f"design matrix must be non-empty, got shape {self.X.shape}")
        if self.X.shape[0] != self.y.shape[0]:
            raise ValueError(
                f"X has {self.X.shape[0]} rows but y has {self.y.shape[0]} entries"
            )


class LassoProblem(_Problem):
    X: Matrix
    y: Vector
    lam: float = Field(ge=0, allow_inf_nan=False)

    @model_validator(mode="after")
    def check_dimensions(self):
        self._check_design()
        return self

    def with_lambda(self, lam: float) -> "LassoProblem":
        return LassoProblem(X=self.X, y=self.y, lam=lam)


class GenLassoProblem(_Problem):
    X: Matrix
    D: Matrix
    y: Vector
    lam: float = Field(ge=0, allow_inf_nan=False)

    @model_validator(mode="after")
    def check_dimensions(self):
        self._check_design()
        if self.D.shape[1] != self.X.shape[1]:
            raise ValueError(
                f"D has {self.D.shape[1]} columns but X has {self.X.shape[1]}"
            )
        return self

    @property
    def m(self) -> int:
        return self.D.shape[0]

    def with_lambda(self, lam: float) -> "GenLassoProblem":
        return GenLassoProblem(X=self.X, D=self.D, y=self.y, lam=lam)


class ElasticNetProblem(_Problem):
    X: Matrix
    y: Vector
    lam1: float = Field(ge=0, allow_inf_nan=False)
    lam2: float = Field(gt=0, allow_inf_nan=False)

    @model_validator(mode="after")
    def check_dimensions(self):
        self._check_design()
        return self


class GraphEdges(BaseModel):
    model_config = ConfigDict(frozen=True)

    node_count: int = Field(gt=0)
    edges: List[Tuple[int, int]]

    @model_validator(mode="after")
    def check_edges(self):
        for a, b in self.edges:
            if not (0 <= a < self.node_count and 0 <= b < self.node_count):
                raise ValueError(f"edge ({a}, {b}) has a node outside [0, {self.node_count})")
            if a == b:
                raise ValueError(f"self-loop at node {a}")
        return self


class SolverOptions(BaseModel):
    model_config = ConfigDict(frozen=True)

    max_iterations: int = Field(default=100_000, gt=0)
    convergence_tol: float = Field(default=config.SOLVER_TOL, gt=0)
    # operator-splitting step rho
    penalty_parameter: float = Field(default=1.0, gt=0)
    adaptive_penalty: bool = True
    polish: bool = True
    rng_seed: int = 0
    column_order: Literal["natural", "permuted"] = "natural"


class GaussianModel(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    mu: Vector
    sigma: float = Field(gt=0, allow_inf_nan=False)


class McConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    replications: int = Field(default=2000, ge=2)
    seed: int = 0
    parallel_width: int = Field(default_factory=lambda: config.THREADS, ge=1)
