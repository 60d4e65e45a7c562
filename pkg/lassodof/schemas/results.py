from typing import List, Literal, Optional

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict, Field, model_validator

from .arrays import Vector
from .tolerances import RankTolerance, SetTolerance


class Solution(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    beta: Vector
    fit: Vector
    # subgradient: length p for the lasso, m for the generalized lasso
    gamma: Vector
    lam: float
    intercept: Optional[float] = None
    unpenalized: Optional[Vector] = None
    iterations: int = 0
    primal_residual: float = 0.0
    dual_residual: float = 0.0
    solver: Literal[
        "coordinate_descent",
        "operator_splitting",
        "pseudoinverse",
        "closed_form",
        "support_reduction",
    ] = "coordinate_descent"
    polished: bool = False
    singular_normal_matrix: bool = False


class DualSolution(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    v: Vector
    fit: Vector
    gamma: Vector
    iterations: int


class SignedIndexSet(BaseModel):
    """Sorted 0-based indices with a +1/-1 sign per index.

    A degenerate set (lambda = 0) lists every index and carries no signs.
    """

    model_config = ConfigDict(frozen=True)

    indices: List[int]
    signs: List[int]
    degenerate: bool = False

    @model_validator(mode="after")
    def check_signs(self):
        if any(i < 0 for i in self.indices):
            raise ValueError("indices must be nonnegative")
        if any(b <= a for a, b in zip(self.indices, self.indices[1:])):
            raise ValueError("indices must be strictly increasing")
        if self.degenerate:
            if self.signs:
                raise ValueError("a degenerate set carries no signs")
        elif len(self.signs) != len(self.indices):
            raise ValueError("indices and signs differ in length")
        if any(s not in (-1, 1) for s in self.signs):
            raise ValueError("signs must be -1 or +1")
        return self

    @classmethod
    def empty(cls) -> "SignedIndexSet":
        return cls(indices=[], signs=[])

    @classmethod
    def full(cls, size: int) -> "SignedIndexSet":
        return cls(indices=list(range(size)), signs=[], degenerate=True)

    @classmethod
    def from_mask(cls, mask: np.ndarray, values: np.ndarray) -> "SignedIndexSet":
        idx = np.flatnonzero(mask)
        return cls(
            indices=[int(i) for i in idx],
            signs=[1 if values[i] > 0 else -1 for i in idx],
        )

    def __len__(self) -> int:
        return len(self.indices)

    @property
    def index_array(self) -> np.ndarray:
        return np.asarray(self.indices, dtype=int)

    @property
    def sign_array(self) -> np.ndarray:
        return np.asarray(self.signs, dtype=float)

    def complement(self, size: int) -> np.ndarray:
        mask = np.ones(size, dtype=bool)
        mask[self.index_array] = False
        return np.flatnonzero(mask)

    def issubset(self, other: "SignedIndexSet") -> bool:
        return set(self.indices) <= set(other.indices)


class DfReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    df_value: float = Field(ge=0)
    estimator: Literal[
        "lasso_equi",
        "lasso_active",
        "genlasso_boundary",
        "genlasso_active",
        "elastic_net",
        "lasso_intercept",
        "lasso_unpenalized",
    ]
    set_used: SignedIndexSet
    set_tolerance: Optional[SetTolerance] = None
    rank_tolerance: Optional[RankTolerance] = None
    degenerate_lambda_zero: bool = False


class MembershipVerdict(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    inside: bool
    violation: float = Field(ge=0)
    # the w with X'u = D'w, ||w||_inf <= lambda, for the generalized polyhedron
    certificate: Optional[Vector] = None


class ProbeReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    step: float
    directions: int
    passed: int
    pass_fraction: float
    max_affine_error: float
    set_changes: int
    projector_trace: int


class McDfEstimate(BaseModel):
    model_config = ConfigDict(frozen=True)

    df_mean: float
    df_std_error: float = Field(ge=0)
    replications_used: int
    replications_dropped: int = 0
    estimator: Literal["known_mean", "centered"] = "known_mean"


class ValidationSummary(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    monte_carlo: McDfEstimate
    estimator_mean: float
    estimator_std_error: float
    combined_std_error: float
    gap: float
    passed: bool
    # per replication: replication, df_term, df_hat, sure_value
    records: pd.DataFrame = Field(exclude=True, repr=False)


class SurePath(BaseModel):
    model_config = ConfigDict(frozen=True)

    lambdas: List[float]
    risks: List[Optional[float]]
    dfs: List[Optional[float]]
    failed: List[bool]
    best_lambda: float
    best_index: int
