"""Empirical checks of the projection geometry behind lasso-type fits.

The residual y - fit is the projection of y onto a polyhedron C:

    lasso:             C = {u : ||X'u||_inf <= lambda}
    generalized lasso: C = {u : X'u = D'w for some ||w||_inf <= lambda}
"""
import logging
from typing import Callable, List, Optional, Tuple, Union

import numpy as np

from .linalg import null_basis, projector_onto_col, projector_onto_null, pseudoinverse
from .schemas import (
    GenLassoProblem,
    LassoProblem,
    MembershipVerdict,
    ProbeReport,
    RankTolerance,
    SetTolerance,
    SignedIndexSet,
    Solution,
    SolverOptions,
)
from .sets import active_set_genlasso, active_set_lasso, boundary_set, equicorrelation_set
from .solver import box_least_squares, solve

logger = logging.getLogger(__name__)

FitMap = Callable[[np.ndarray], np.ndarray]


def lasso_poly_membership(X, lam: float, u, tol: float = 1e-8) -> MembershipVerdict:
    violation = max(0.0, float(np.abs(np.asarray(X).T @ u).max(initial=0.0)) - lam)
    return MembershipVerdict(inside=violation <= tol, violation=violation)


def genlasso_poly_membership(X, D, lam: float, u, tol: float = 1e-8) -> MembershipVerdict:
    """Distance from X'u to {D'w : ||w||_inf <= lambda}, with the minimizing w."""
    target = np.asarray(X).T @ u
    w, residual, _ = box_least_squares(np.asarray(D).T, target, lam, tol=1e-12)
    return MembershipVerdict(inside=residual <= tol, violation=residual, certificate=w)


def _membership(X, D, lam: float, u, tol: float) -> bool:
    if D is None:
        return lasso_poly_membership(X, lam, u, tol).inside
    return genlasso_poly_membership(X, D, lam, u, tol).inside


def _boundary_scale(X, D, lam: float, z, tol: float) -> float:
    """Largest t with t * z in C (capped for directions along which C is unbounded)."""
    if D is None:
        top = float(np.abs(X.T @ z).max(initial=0.0))
        return lam / top if top > 0 else 1.0
    hi = 1.0
    while _membership(X, D, lam, hi * z, tol):
        if hi >= 2.0**20:
            return hi
        hi *= 2.0
    lo = hi / 2 if hi > 1 else 0.0
    for _ in range(40):
        mid = 0.5 * (lo + hi)
        if _membership(X, D, lam, mid * z, tol):
            lo = mid
        else:
            hi = mid
    return lo


def make_feasible_sampler(
    X, D, lam: float, rng: np.random.Generator, null_scale: float = 1.0, tol: float = 1e-9
) -> Callable[[], np.ndarray]:
    """Random points of C for the lasso (D=None) or the generalized lasso.

    Draws cycle through three kinds: a random direction scaled into C, a box
    point w mapped through X'u = D'w when that system is consistent, and a
    scaled point plus a component in null(X'), which C always contains.
    """
    X = np.asarray(X, dtype=float)
    n = X.shape[0]
    Xt_pinv = pseudoinverse(X.T)
    N = null_basis(X.T)
    counter = [0]

    def direction_point() -> np.ndarray:
        z = rng.standard_normal(n)
        return rng.uniform() * _boundary_scale(X, D, lam, z, tol) * z

    def box_point() -> Optional[np.ndarray]:
        m = X.shape[1] if D is None else D.shape[0]
        w = lam * (np.sign(rng.uniform(-1, 1, m)) if rng.uniform() < 0.5 else rng.uniform(-1, 1, m))
        target = w if D is None else np.asarray(D).T @ w
        u = Xt_pinv @ target
        if np.linalg.norm(X.T @ u - target) <= 1e-8 * (1.0 + np.linalg.norm(target)):
            return u
        return None

    def sampler() -> np.ndarray:
        kind = counter[0] % 3
        counter[0] += 1
        if kind == 1:
            u = box_point()
            if u is not None:
                return u
        u = direction_point()
        if kind == 2 and N.shape[1]:
            u = u + null_scale * (N @ rng.standard_normal(N.shape[1]))
        return u

    return sampler


def sample_feasible_points(X, D, lam: float, count: int, rng: np.random.Generator) -> List[np.ndarray]:
    sampler = make_feasible_sampler(X, D, lam, rng)
    return [sampler() for _ in range(count)]


def verify_projection_optimality(y, fit, sampler: Callable[[], np.ndarray], samples: int) -> float:
    """max over sampled u in C of -<y - theta, theta - u>, theta = y - fit.

    Nonpositive (up to rounding) when theta is the projection of y onto C.
    """
    y = np.asarray(y, dtype=float)
    fit = np.asarray(fit, dtype=float)
    theta = y - fit
    worst = -np.inf
    for _ in range(samples):
        u = sampler()
        worst = max(worst, -float(fit @ (theta - u)))
    return float(worst)


def check_nonexpansive(fit_map: FitMap, y1, y2, slack: float = 1e-8) -> bool:
    y1 = np.asarray(y1, dtype=float)
    y2 = np.asarray(y2, dtype=float)
    return bool(np.linalg.norm(fit_map(y1) - fit_map(y2)) <= np.linalg.norm(y1 - y2) + slack)


def local_projector(
    prob: Union[LassoProblem, GenLassoProblem],
    sol: Solution,
    set_tol: Optional[SetTolerance] = None,
    rtol: Optional[RankTolerance] = None,
) -> np.ndarray:
    """Projector onto col(X_A) (lasso) or X(null(D_{-A})) (generalized lasso)."""
    if isinstance(prob, GenLassoProblem):
        A = active_set_genlasso(prob, sol, set_tol)
        P = projector_onto_null(prob.D[A.complement(prob.m)], rtol)
        return projector_onto_col(prob.X @ P, rtol)
    A = active_set_lasso(sol, set_tol)
    return projector_onto_col(prob.X[:, A.index_array], rtol)


def _sets(prob, sol: Solution, set_tol: SetTolerance) -> Tuple[SignedIndexSet, SignedIndexSet]:
    if isinstance(prob, GenLassoProblem):
        return boundary_set(sol, set_tol), active_set_genlasso(prob, sol, set_tol)
    return equicorrelation_set(prob, sol, set_tol), active_set_lasso(sol, set_tol)


def local_affine_probe(
    prob: Union[LassoProblem, GenLassoProblem],
    base_y,
    step: Optional[float] = None,
    directions: int = 100,
    opts: Optional[SolverOptions] = None,
    set_tol: Optional[SetTolerance] = None,
    rtol: Optional[RankTolerance] = None,
    seed: int = 0,
    affine_tol: float = 1e-6,
) -> ProbeReport:
    """Check fit(y + h z) - fit(y) = P (h z) and unchanged sets along random unit z."""
    set_tol = set_tol or SetTolerance()
    base = prob.with_response(base_y)
    y = base.y
    if step is None:
        step = 1e-4 * (1.0 + float(np.abs(y).max()))
    sol = solve(base, opts)
    P = local_projector(base, sol, set_tol, rtol)
    base_sets = _sets(base, sol, set_tol)

    rng = np.random.default_rng(seed)
    passed = set_changes = 0
    max_error = 0.0
    for _ in range(directions):
        z = rng.standard_normal(y.size)
        z /= np.linalg.norm(z)
        moved = base.with_response(y + step * z)
        moved_sol = solve(moved, opts)
        error = float(np.linalg.norm(moved_sol.fit - sol.fit - step * (P @ z)))
        same_sets = _sets(moved, moved_sol, set_tol) == base_sets
        max_error = max(max_error, error)
        set_changes += not same_sets
        passed += error <= affine_tol and same_sets
    if passed < directions:
        logger.info("local affine probe: %d of %d directions passed", passed, directions)
    return ProbeReport(
        step=step,
        directions=directions,
        passed=passed,
        pass_fraction=passed / directions if directions else 1.0,
        max_affine_error=max_error,
        set_changes=set_changes,
        projector_trace=int(round(float(np.trace(P)))),
    )
