"""Unbiased degrees-of-freedom estimates and the closed-form fits behind them.

Set-based estimates are ranks, so they are reported as integers (stored as
floats in DfReport); the elastic net estimate is a real trace.
"""
import logging
from typing import Literal, Optional, Union

import numpy as np

from . import config
from .errors import InconsistencyError, InputError
from .linalg import numeric_rank, projector_onto_col, projector_onto_null, pseudoinverse, range_basis, svd
from .schemas import (
    DfReport,
    ElasticNetProblem,
    GenLassoProblem,
    LassoProblem,
    RankTolerance,
    SetTolerance,
    SignedIndexSet,
    Solution,
)
from .sets import active_set_genlasso, active_set_lasso, boundary_set, equicorrelation_set

logger = logging.getLogger(__name__)


def _columns(X, S: SignedIndexSet) -> np.ndarray:
    X = np.asarray(X, dtype=float)
    return X[:, S.index_array]


def df_lasso_equi(X, E: SignedIndexSet, rtol: Optional[RankTolerance] = None) -> DfReport:
    rtol = rtol or RankTolerance()
    return DfReport(
        df_value=numeric_rank(_columns(X, E), rtol),
        estimator="lasso_equi",
        set_used=E,
        rank_tolerance=rtol,
        degenerate_lambda_zero=E.degenerate,
    )


def df_lasso_active(X, A: SignedIndexSet, rtol: Optional[RankTolerance] = None) -> DfReport:
    rtol = rtol or RankTolerance()
    return DfReport(
        df_value=numeric_rank(_columns(X, A), rtol),
        estimator="lasso_active",
        set_used=A,
        rank_tolerance=rtol,
        degenerate_lambda_zero=A.degenerate,
    )


def _restricted_null_projector(D, S: SignedIndexSet, rtol: Optional[RankTolerance]) -> np.ndarray:
    D = np.asarray(D, dtype=float)
    return projector_onto_null(D[S.complement(D.shape[0])], rtol)


def df_genlasso(
    X,
    D,
    S: SignedIndexSet,
    rtol: Optional[RankTolerance] = None,
    kind: Literal["boundary", "active"] = "active",
) -> DfReport:
    """dim X(null(D_{-S})) for a boundary set or an active set S."""
    rtol = rtol or RankTolerance()
    P = _restricted_null_projector(D, S, rtol)
    return DfReport(
        df_value=numeric_rank(np.asarray(X, dtype=float) @ P, rtol),
        estimator="genlasso_boundary" if kind == "boundary" else "genlasso_active",
        set_used=S,
        rank_tolerance=rtol,
        degenerate_lambda_zero=S.degenerate,
    )


def df_elastic_net(X, A: SignedIndexSet, lam2: float) -> DfReport:
    """tr(X_A (X_A'X_A + lam2 I)^{-1} X_A') via the singular values of X_A."""
    if lam2 <= 0:
        raise InputError(f"elastic net df needs lambda2 > 0, got {lam2}")
    s = svd(_columns(X, A)).singular_values
    return DfReport(
        df_value=float(np.sum(s**2 / (s**2 + lam2))),
        estimator="elastic_net",
        set_used=A,
    )


def df_lasso_unpenalized(X, U, A: SignedIndexSet, rtol: Optional[RankTolerance] = None) -> DfReport:
    """rank(U) + rank(M X_A), M the projector onto col(U)^perp."""
    rtol = rtol or RankTolerance()
    U = np.asarray(U, dtype=float).reshape(np.shape(X)[0], -1)
    Q = range_basis(U, rtol)
    XA = _columns(X, A)
    return DfReport(
        df_value=Q.shape[1] + numeric_rank(XA - Q @ (Q.T @ XA), rtol),
        estimator="lasso_unpenalized",
        set_used=A,
        rank_tolerance=rtol,
    )


def df_lasso_intercept(X, A: SignedIndexSet, rtol: Optional[RankTolerance] = None) -> DfReport:
    n = np.shape(X)[0]
    report = df_lasso_unpenalized(X, np.ones((n, 1)), A, rtol)
    return report.model_copy(update={"estimator": "lasso_intercept"})


def _check_against(fit: np.ndarray, reference_fit, y, atol: Optional[float], label: str) -> np.ndarray:
    if reference_fit is None:
        return fit
    if atol is None:
        atol = config.RECONSTRUCTION_TOL * (1.0 + float(np.linalg.norm(y)))
    err = float(np.linalg.norm(fit - np.asarray(reference_fit)))
    if err > atol:
        raise InconsistencyError(
            f"{label} reconstruction differs from the solver fit by {err:.3e} (allowed {atol:.3e})"
        )
    return fit


def _projected_fit(XS: np.ndarray, y, shift: np.ndarray) -> np.ndarray:
    """XS XS^+ (y - (XS')^+ shift)."""
    XS_pinv = pseudoinverse(XS)
    return XS @ (XS_pinv @ (y - XS_pinv.T @ shift))


def reconstruct_fit_lasso_equi(
    prob: LassoProblem, E: SignedIndexSet, reference_fit=None, atol: Optional[float] = None
) -> np.ndarray:
    if prob.lam == 0:
        raise InputError("fit reconstruction needs lambda > 0")
    if not len(E):
        fit = np.zeros(prob.n)
    else:
        fit = _projected_fit(_columns(prob.X, E), prob.y, prob.lam * E.sign_array)
    return _check_against(fit, reference_fit, prob.y, atol, "equicorrelation")


def reconstruct_fit_lasso_active(
    prob: LassoProblem, A: SignedIndexSet, reference_fit=None, atol: Optional[float] = None
) -> np.ndarray:
    if prob.lam == 0:
        raise InputError("fit reconstruction needs lambda > 0")
    if not len(A):
        fit = np.zeros(prob.n)
    else:
        fit = _projected_fit(_columns(prob.X, A), prob.y, prob.lam * A.sign_array)
    return _check_against(fit, reference_fit, prob.y, atol, "active set")


def reconstruct_fit_genlasso(
    prob: GenLassoProblem, S: SignedIndexSet, reference_fit=None, atol: Optional[float] = None
) -> np.ndarray:
    """(XP)(XP)^+ (y - (PX')^+ D_S' lambda s) with P the projector onto null(D_{-S})."""
    if prob.lam == 0:
        raise InputError("fit reconstruction needs lambda > 0")
    P = _restricted_null_projector(prob.D, S, None)
    shift = prob.D[S.index_array].T @ (prob.lam * S.sign_array)
    fit = _projected_fit(prob.X @ P, prob.y, shift)
    return _check_against(fit, reference_fit, prob.y, atol, "generalized lasso")


def constrained_least_squares_fit(X, D, S: SignedIndexSet, y, rtol: Optional[RankTolerance] = None) -> np.ndarray:
    """Least squares subject to D_{-S} beta = 0: the projection onto X(null(D_{-S}))."""
    P = _restricted_null_projector(D, S, rtol)
    return projector_onto_col(np.asarray(X, dtype=float) @ P, rtol) @ np.asarray(y, dtype=float)


def estimate_df(
    prob: Union[LassoProblem, GenLassoProblem, ElasticNetProblem],
    sol: Solution,
    set_tol: Optional[SetTolerance] = None,
    rtol: Optional[RankTolerance] = None,
) -> DfReport:
    """Active-set estimate for the problem kind; rank(X) at lambda = 0."""
    set_tol = set_tol or SetTolerance()
    if isinstance(prob, GenLassoProblem):
        if prob.lam == 0:
            report = df_genlasso(prob.X, prob.D, boundary_set(sol, set_tol), rtol, kind="boundary")
        else:
            report = df_genlasso(prob.X, prob.D, active_set_genlasso(prob, sol, set_tol), rtol)
    elif isinstance(prob, ElasticNetProblem):
        report = df_elastic_net(prob.X, active_set_lasso(sol, set_tol), prob.lam2)
    elif prob.lam == 0:
        report = df_lasso_equi(prob.X, equicorrelation_set(prob, sol, set_tol), rtol)
    else:
        report = df_lasso_active(prob.X, active_set_lasso(sol, set_tol), rtol)
    return report.model_copy(update={"set_tolerance": set_tol})
