"""Solvers for the lasso, elastic net, intercept lasso and generalized lasso.

All solvers return a :class:`Solution` carrying the coefficients, the fit
and the optimal subgradient gamma of the KKT conditions.
"""
import logging
from typing import Callable, Optional, Tuple, Union

import numpy as np
import scipy.optimize

from .errors import ConvergenceError, InconsistencyError, InputError
from .linalg import (
    null_basis,
    numeric_rank,
    projector_onto_col,
    projector_onto_null,
    pseudoinverse,
    range_basis,
)
from .schemas import (
    DualSolution,
    ElasticNetProblem,
    GenLassoProblem,
    LassoProblem,
    RankTolerance,
    SetTolerance,
    Solution,
    SolverOptions,
)
from .sets import equicorrelation_set

logger = logging.getLogger(__name__)

AnyProblem = Union[LassoProblem, GenLassoProblem, ElasticNetProblem]

POLISH_EVERY = 20
BALANCE_EVERY = 10
RHO_BOUNDS = (1e-6, 1e6)


def soft_threshold(x, t):
    return np.sign(x) * np.maximum(np.abs(x) - t, 0.0)


def lasso_objective(X, y, lam: float, beta) -> float:
    r = y - X @ beta
    return 0.5 * float(r @ r) + lam * float(np.abs(beta).sum())


def genlasso_objective(X, D, y, lam: float, beta) -> float:
    r = y - X @ beta
    return 0.5 * float(r @ r) + lam * float(np.abs(D @ beta).sum())


def _kkt_from_gradient(grad, beta, lam: float) -> float:
    nz = beta != 0
    viol = np.maximum(np.abs(grad) - lam, 0.0)
    viol[nz] = np.abs(grad[nz] - lam * np.sign(beta[nz]))
    return float(viol.max(initial=0.0))


def kkt_violation(X, y, lam: float, beta) -> float:
    """Largest violation of the lasso KKT conditions at beta."""
    return _kkt_from_gradient(X.T @ (y - X @ beta), np.asarray(beta), lam)


def _replace(sol: Solution, **changes) -> Solution:
    return Solution(**{**dict(sol), **changes})


def _least_squares(X, y, lam: float, gamma_size: int, rtol: Optional[RankTolerance] = None) -> Solution:
    beta = pseudoinverse(X, rtol) @ y
    return Solution(
        beta=beta,
        fit=X @ beta,
        gamma=np.zeros(gamma_size),
        lam=lam,
        solver="pseudoinverse",
    )


def solve_lasso(prob: LassoProblem, opts: Optional[SolverOptions] = None) -> Solution:
    """Cyclic coordinate descent with active-set sweeps.

    Converged when a full sweep moves no correlation by more than the
    tolerance and the KKT conditions hold to the same tolerance, both
    relative to max(1, ||X'y||_inf).
    """
    opts = opts or SolverOptions()
    X, y, lam = prob.X, prob.y, prob.lam
    if lam == 0:
        return _least_squares(X, y, 0.0, prob.p)

    xty = X.T @ y
    max_corr = float(np.abs(xty).max())
    if lam >= max_corr:
        return Solution(
            beta=np.zeros(prob.p), fit=np.zeros(prob.n), gamma=xty / lam, lam=lam
        )

    gram = X.T @ X
    diag = np.diag(gram).copy()
    if opts.column_order == "permuted":
        order = np.random.default_rng(opts.rng_seed).permutation(prob.p)
    else:
        order = np.arange(prob.p)
    order = order[diag[order] > 0]

    tol = opts.convergence_tol * max(1.0, max_corr)
    beta = np.zeros(prob.p)
    grad = xty.copy()
    active_only = False
    violation = np.inf
    max_step = np.inf
    for it in range(1, opts.max_iterations + 1):
        coords = order[beta[order] != 0] if active_only else order
        max_step = 0.0
        for j in coords:
            old = beta[j]
            new = soft_threshold(grad[j] + diag[j] * old, lam) / diag[j]
            if new != old:
                beta[j] = new
                grad -= gram[:, j] * (new - old)
                max_step = max(max_step, abs(new - old) * diag[j])
        if active_only:
            if max_step <= tol:
                active_only = False
            continue
        grad = xty - gram @ beta
        violation = _kkt_from_gradient(grad, beta, lam)
        logger.debug("sweep %d: max step %.3e, kkt %.3e", it, max_step, violation)
        if max_step <= tol and violation <= tol:
            break
        active_only = True
    else:
        raise ConvergenceError(
            "coordinate descent did not converge", opts.max_iterations, violation, max_step
        )

    fit = X @ beta
    return Solution(
        beta=beta,
        fit=fit,
        gamma=X.T @ (y - fit) / lam,
        lam=lam,
        iterations=it,
        primal_residual=violation,
        dual_residual=max_step,
        solver="coordinate_descent",
    )


def solve_elastic_net(prob: ElasticNetProblem, opts: Optional[SolverOptions] = None) -> Solution:
    """Solve the elastic net as a lasso on the augmented design [X; sqrt(lam2) I]."""
    X_aug = np.vstack([prob.X, np.sqrt(prob.lam2) * np.eye(prob.p)])
    y_aug = np.concatenate([prob.y, np.zeros(prob.p)])
    aug = solve_lasso(LassoProblem(X=X_aug, y=y_aug, lam=prob.lam1), opts)
    return _replace(aug, fit=prob.X @ aug.beta)


def solve_lasso_unpenalized(
    prob: LassoProblem, U, opts: Optional[SolverOptions] = None
) -> Solution:
    """Lasso with an unpenalized block of predictors U.

    The penalized coefficients solve the lasso on (MX, My) with M the
    projector onto col(U)^perp; the unpenalized ones are U^+ (y - X beta).
    """
    U = np.asarray(U, dtype=float)
    if U.ndim == 1:
        U = U.reshape(-1, 1)
    if U.shape[0] != prob.n:
        raise InputError(f"unpenalized block has {U.shape[0]} rows, expected {prob.n}")
    Q = range_basis(U)
    M = np.eye(prob.n) - Q @ Q.T
    inner = solve_lasso(LassoProblem(X=M @ prob.X, y=M @ prob.y, lam=prob.lam), opts)
    beta = inner.beta
    theta = pseudoinverse(U) @ (prob.y - prob.X @ beta)
    return _replace(inner, fit=U @ theta + prob.X @ beta, unpenalized=theta)


def solve_lasso_intercept(prob: LassoProblem, opts: Optional[SolverOptions] = None) -> Solution:
    sol = solve_lasso_unpenalized(prob, np.ones((prob.n, 1)), opts)
    return _replace(sol, intercept=float(sol.unpenalized[0]))


def equicorrelation_solution(
    prob: LassoProblem,
    opts: Optional[SolverOptions] = None,
    set_tol: Optional[SetTolerance] = None,
) -> Solution:
    """The lasso solution supported on the equicorrelation set with b = 0.

    beta_E = X_E^+ (y - (X_E')^+ lambda s), zero elsewhere.
    """
    if prob.lam == 0:
        raise InputError("the equicorrelation solution needs lambda > 0")
    set_tol = set_tol or SetTolerance()
    sol = solve_lasso(prob, opts)
    E = equicorrelation_set(prob, sol, set_tol)
    beta = np.zeros(prob.p)
    if len(E):
        idx, s = E.index_array, E.sign_array
        XE_pinv = pseudoinverse(prob.X[:, idx])
        beta_E = XE_pinv @ (prob.y - XE_pinv.T @ (prob.lam * s))
        sign_tol = set_tol.membership_tol * max(1.0, float(np.abs(beta_E).max()))
        worst = float((s * beta_E).min())
        if worst < -sign_tol:
            raise InconsistencyError(
                f"equicorrelation solution violates the sign condition by {-worst:.3e}; "
                "solver tolerance is too loose for the set tolerance"
            )
        beta[idx] = beta_E
    return _replace(
        sol,
        beta=beta,
        fit=prob.X @ beta,
        primal_residual=kkt_violation(prob.X, prob.y, prob.lam, beta),
        solver="closed_form",
    )


def reduce_to_independent_support(
    prob: LassoProblem,
    sol: Solution,
    set_tol: Optional[SetTolerance] = None,
    rtol: Optional[RankTolerance] = None,
) -> Solution:
    """Walk a lasso solution along null(X_A) until X_A has independent columns.

    The fit and the criterion are constant along null(X_A), and no sign
    flips before the first coefficient reaches zero.
    """
    set_tol = set_tol or SetTolerance()
    beta = np.array(sol.beta)
    beta[np.abs(beta) <= set_tol.zero_tol] = 0.0
    for _ in range(prob.p):
        A = np.flatnonzero(beta)
        N = null_basis(prob.X[:, A], rtol)
        if N.shape[1] == 0:
            break
        eta = N[:, 0]
        moving = np.abs(eta) > 1e-12
        steps = np.full(A.size, np.inf)
        steps[moving] = beta[A][moving] / eta[moving]
        i = int(np.argmin(np.abs(steps)))
        beta[A] -= steps[i] * eta
        beta[A[i]] = 0.0
        beta[np.abs(beta) <= set_tol.zero_tol] = 0.0
    return _replace(sol, beta=beta, fit=prob.X @ beta, solver="support_reduction")


def reduce_genlasso_support(
    prob: GenLassoProblem,
    sol: Solution,
    set_tol: Optional[SetTolerance] = None,
    rtol: Optional[RankTolerance] = None,
) -> Solution:
    """Walk a generalized lasso solution along null(X) & null(D_{-A}) until they meet only at 0.

    Along such a direction the fit is fixed and ||D beta||_1 stays linear,
    hence constant at an optimum, until the first active D_i beta reaches zero.
    """
    set_tol = set_tol or SetTolerance()
    D = prob.D
    beta = np.array(sol.beta)
    for _ in range(prob.m):
        Db = D @ beta
        A = np.flatnonzero(np.abs(Db) > set_tol.zero_tol)
        rest = np.setdiff1d(np.arange(prob.m), A)
        N = null_basis(np.vstack([prob.X, D[rest]]), rtol)
        if N.shape[1] == 0:
            break
        moves = D[A] @ N
        j = int(np.argmax(np.linalg.norm(moves, axis=0)))
        d = moves[:, j]
        moving = np.abs(d) > 1e-12
        if not moving.any():
            logger.warning("null(X) and null(D) intersect; the solution is not identifiable")
            break
        steps = np.full(A.size, np.inf)
        steps[moving] = Db[A][moving] / d[moving]
        beta -= steps[int(np.argmin(np.abs(steps)))] * N[:, j]
    return _replace(sol, beta=beta, fit=prob.X @ beta, solver="support_reduction")


def box_least_squares(G, b, bound: float, tol: float = 1e-12) -> Tuple[np.ndarray, float, int]:
    """min ||G w - b||_2 subject to ||w||_inf <= bound (bounded-variable LS)."""
    G = np.asarray(G, dtype=float)
    b = np.asarray(b, dtype=float)
    if G.shape[1] == 0 or bound == 0:
        w = np.zeros(G.shape[1])
        return w, float(np.linalg.norm(b)), 0
    res = scipy.optimize.lsq_linear(
        G,
        b,
        bounds=(-bound, bound),
        method="bvls",
        tol=tol,
        max_iter=max(100, 10 * G.shape[1]),
    )
    if res.status == 0:
        raise ConvergenceError("bounded least squares hit its iteration limit", res.nit, res.cost, 0.0)
    if res.status < 0:
        logger.warning("bounded least squares stopped without progress: %s", res.message)
    w = np.clip(res.x, -bound, bound)
    return w, float(np.linalg.norm(G @ w - b)), int(res.nit)


def _normal_inverse(gram, DtD, rho: float, p: int):
    normal = gram + rho * DtD
    singular = numeric_rank(normal) < p
    return pseudoinverse(normal), singular


def _polish(prob: GenLassoProblem, z, tol: float) -> Optional[Tuple[np.ndarray, np.ndarray, float]]:
    """Closed-form solution for the support and signs of z, if it is optimal.

    Returns (beta, gamma, stationarity residual) or None when the candidate
    fails the KKT conditions.
    """
    X, D, y, lam = prob.X, prob.D, prob.y, prob.lam
    A = np.flatnonzero(z)
    rest = np.setdiff1d(np.arange(prob.m), A)
    r = np.sign(z[A])
    P = projector_onto_null(D[rest])
    XP_pinv = pseudoinverse(X @ P)
    beta = P @ (XP_pinv @ (y - XP_pinv.T @ (D[A].T @ (lam * r))))

    if np.any(r * (D[A] @ beta) < -tol):
        return None
    target = X.T @ (y - X @ beta) - D[A].T @ (lam * r)
    g_rest, residual, _ = box_least_squares(D[rest].T, target / lam, 1.0)
    residual = float(np.abs(D[rest].T @ (lam * g_rest) - target).max(initial=0.0))
    if residual > tol:
        return None
    gamma = np.zeros(prob.m)
    gamma[A] = r
    gamma[rest] = g_rest
    return beta, gamma, residual


def solve_genlasso(prob: GenLassoProblem, opts: Optional[SolverOptions] = None) -> Solution:
    """Operator splitting on z = D beta.

    The beta-update solves (X'X + rho D'D) beta = X'y + rho D'(z - u) through
    a pseudoinverse; gamma is recovered from the scaled dual as rho u / lambda.
    Every POLISH_EVERY iterations the closed-form solution for the current
    support of z is tried and accepted when it passes the KKT conditions.
    """
    opts = opts or SolverOptions()
    X, D, y, lam = prob.X, prob.D, prob.y, prob.lam
    if lam == 0 or prob.m == 0:
        return _least_squares(X, y, lam, prob.m)

    xty = X.T @ y
    gram = X.T @ X
    DtD = D.T @ D
    kkt_tol = opts.convergence_tol * max(1.0, float(np.abs(xty).max()))
    rho = opts.penalty_parameter
    normal_pinv, singular = _normal_inverse(gram, DtD, rho, prob.p)
    if singular:
        logger.warning("X'X + rho D'D is numerically singular; beta-updates use its pseudoinverse")

    beta = np.zeros(prob.p)
    z = np.zeros(prob.m)
    u = np.zeros(prob.m)
    r_norm = s_norm = np.inf
    for it in range(1, opts.max_iterations + 1):
        beta = normal_pinv @ (xty + rho * (D.T @ (z - u)))
        Db = D @ beta
        z_old = z
        z = soft_threshold(Db + u, lam / rho)
        u = u + Db - z

        r_norm = float(np.linalg.norm(Db - z))
        s_norm = rho * float(np.linalg.norm(D.T @ (z - z_old)))
        eps_pri = opts.convergence_tol * max(1.0, float(np.linalg.norm(Db)), float(np.linalg.norm(z)))
        eps_dual = opts.convergence_tol * max(1.0, rho * float(np.linalg.norm(D.T @ u)))
        if r_norm <= eps_pri and s_norm <= eps_dual:
            break

        if opts.polish and it % POLISH_EVERY == 0:
            polished = _polish(prob, z, kkt_tol)
            if polished is not None:
                beta, gamma, residual = polished
                logger.debug("polished after %d iterations (residual %.3e)", it, residual)
                return Solution(
                    beta=beta,
                    fit=X @ beta,
                    gamma=gamma,
                    lam=lam,
                    iterations=it,
                    primal_residual=residual,
                    dual_residual=0.0,
                    solver="operator_splitting",
                    polished=True,
                    singular_normal_matrix=singular,
                )

        if opts.adaptive_penalty and it % BALANCE_EVERY == 0:
            if r_norm > 10 * s_norm and rho < RHO_BOUNDS[1]:
                rho, u = 2 * rho, u / 2
            elif s_norm > 10 * r_norm and rho > RHO_BOUNDS[0]:
                rho, u = rho / 2, 2 * u
            else:
                continue
            normal_pinv, singular = _normal_inverse(gram, DtD, rho, prob.p)
    else:
        detail = "operator splitting did not converge"
        if singular:
            detail += "; X'X + rho D'D is numerically singular"
        raise ConvergenceError(detail, opts.max_iterations, r_norm, s_norm, singular)

    return Solution(
        beta=beta,
        fit=X @ beta,
        gamma=rho * u / lam,
        lam=lam,
        iterations=it,
        primal_residual=r_norm,
        dual_residual=s_norm,
        solver="operator_splitting",
        singular_normal_matrix=singular,
    )


def solve_genlasso_dual(prob: GenLassoProblem, rtol: Optional[RankTolerance] = None) -> DualSolution:
    """Dual of the generalized lasso for full column rank X.

    v minimizes ||P y - (X^+)' D' v|| over ||v||_inf <= lambda, and the
    primal fit is P y - (X^+)' D' v with P the projector onto col(X).
    """
    if numeric_rank(prob.X, rtol) < prob.p:
        raise InputError("the closed-form dual needs X with full column rank")
    Py = projector_onto_col(prob.X, rtol) @ prob.y
    M = pseudoinverse(prob.X, rtol).T @ prob.D.T
    v, _, nit = box_least_squares(M, Py, prob.lam)
    gamma = v / prob.lam if prob.lam > 0 else np.zeros(prob.m)
    return DualSolution(v=v, fit=Py - M @ v, gamma=gamma, iterations=nit)


def solve(prob: AnyProblem, opts: Optional[SolverOptions] = None) -> Solution:
    if isinstance(prob, GenLassoProblem):
        return solve_genlasso(prob, opts)
    if isinstance(prob, ElasticNetProblem):
        return solve_elastic_net(prob, opts)
    return solve_lasso(prob, opts)


def make_fit_map(prob: AnyProblem, opts: Optional[SolverOptions] = None) -> Callable[[np.ndarray], np.ndarray]:
    """y -> fit at the problem's design and tuning parameter.

    Each call validates a fresh problem and runs its own solve, so the map is
    safe to call from several threads at once.
    """

    def fit_map(y) -> np.ndarray:
        return solve(prob.with_response(y), opts).fit

    return fit_map
