"""Equicorrelation, boundary and active sets of lasso-type solutions."""
import logging
from typing import Optional, Union

import numpy as np

from .errors import InputError
from .schemas import GenLassoProblem, LassoProblem, SetTolerance, SignedIndexSet, Solution, SolverOptions

logger = logging.getLogger(__name__)


def check_tolerance_order(set_tol: SetTolerance, opts: SolverOptions) -> None:
    if set_tol.membership_tol < 10 * opts.convergence_tol:
        raise InputError(
            f"membership tolerance {set_tol.membership_tol:g} must be at least ten times "
            f"the solver tolerance {opts.convergence_tol:g}"
        )


def equicorrelation_set(
    prob: LassoProblem, sol: Solution, tol: Optional[SetTolerance] = None
) -> SignedIndexSet:
    """E = {i : |X_i'(y - fit)| >= lambda - tol}, computed from the unique fit.

    At lambda = 0 every index is equicorrelated; the set is returned flagged
    degenerate, without signs.
    """
    tol = tol or SetTolerance()
    if prob.lam == 0:
        return SignedIndexSet.full(prob.p)
    corr = prob.X.T @ (prob.y - sol.fit)
    return SignedIndexSet.from_mask(np.abs(corr) >= prob.lam - tol.membership_for(prob.lam), corr)


def active_set_lasso(sol: Solution, tol: Optional[SetTolerance] = None) -> SignedIndexSet:
    tol = tol or SetTolerance()
    return SignedIndexSet.from_mask(np.abs(sol.beta) > tol.zero_tol, sol.beta)


def boundary_set(sol: Solution, tol: Optional[SetTolerance] = None) -> SignedIndexSet:
    """B = {i : |gamma_i| >= 1 - tol} with signs s = sign(gamma_B)."""
    tol = tol or SetTolerance()
    if sol.lam == 0:
        return SignedIndexSet.full(sol.gamma.size)
    return SignedIndexSet.from_mask(np.abs(sol.gamma) >= 1.0 - tol.membership_tol, sol.gamma)


def active_set_genlasso(
    prob: GenLassoProblem, sol: Solution, tol: Optional[SetTolerance] = None
) -> SignedIndexSet:
    tol = tol or SetTolerance()
    Db = prob.D @ sol.beta
    return SignedIndexSet.from_mask(np.abs(Db) > tol.zero_tol, Db)


def membership_margin(
    prob: Union[LassoProblem, GenLassoProblem],
    sol: Solution,
    tol: Optional[SetTolerance] = None,
) -> float:
    """How close the solve sits to a set-detection tie.

    The smaller of: the gap between lambda and the largest non-member
    correlation (|gamma_i| * lambda for the generalized lasso), and the
    smallest nonzero active magnitude. Infinite when neither exists,
    and at lambda = 0 where the sets are degenerate.
    """
    tol = tol or SetTolerance()
    lam = prob.lam
    if lam == 0:
        return float("inf")
    if isinstance(prob, GenLassoProblem):
        strength = np.abs(sol.gamma) * lam
        members = np.abs(sol.gamma) >= 1.0 - tol.membership_tol
        active = np.abs(prob.D @ sol.beta)
    else:
        strength = np.abs(prob.X.T @ (prob.y - sol.fit))
        members = strength >= lam - tol.membership_for(lam)
        active = np.abs(sol.beta)
    gaps = lam - strength[~members]
    magnitudes = active[active > tol.zero_tol]
    margin = min(gaps.min(initial=np.inf), magnitudes.min(initial=np.inf))
    if margin < 10 * tol.membership_tol:
        logger.warning("near tie: set-detection margin %.3e", margin)
    return float(margin)
