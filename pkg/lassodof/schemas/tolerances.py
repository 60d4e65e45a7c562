from typing import Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field

from .. import config


class RankTolerance(BaseModel):
    """Relative singular-value cutoff shared by every SVD consumer.

    With no explicit cutoff the machine-epsilon heuristic
    max(rows, cols) * 2**-46 is used.
    """

    model_config = ConfigDict(frozen=True)

    relative_cutoff: Optional[float] = Field(default=None, gt=0, lt=1)

    def cutoff(self, shape: Tuple[int, ...]) -> float:
        if self.relative_cutoff is not None:
            return self.relative_cutoff
        return max(max(shape, default=1), 1) * config.RANK_CUTOFF_EPS


class SetTolerance(BaseModel):
    model_config = ConfigDict(frozen=True)

    # absolute gap allowed between |correlation| and lambda (or |gamma_i| and 1)
    membership_tol: float = Field(default=config.MEMBERSHIP_TOL, gt=0)
    # magnitude below which a coefficient counts as zero
    zero_tol: float = Field(default=config.ZERO_TOL, gt=0)

    def membership_for(self, lam: float) -> float:
        return max(self.membership_tol, self.membership_tol * lam)
