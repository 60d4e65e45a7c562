import numpy as np
import pytest
from scipy.optimize import minimize

from lassodof.penalties import diff_1d
from lassodof.schemas import GenLassoProblem, LassoProblem


def random_lasso(seed: int, n: int = 15, p: int = 25, scale: float = 0.5) -> LassoProblem:
    """Gaussian design, sparse signal, lambda a fraction of ||X'y||_inf."""
    rng = np.random.default_rng(seed)
    X = rng.standard_normal((n, p))
    beta = np.zeros(p)
    beta[: min(5, p)] = rng.choice([-1.0, 1.0], size=min(5, p))
    y = X @ beta + rng.standard_normal(n)
    return LassoProblem(X=X, y=y, lam=scale * float(np.abs(X.T @ y).max()))


def random_fused(seed: int, n: int = 20, p: int = 30, identity: bool = False, scale: float = 0.1) -> GenLassoProblem:
    rng = np.random.default_rng(seed)
    X = np.eye(p) if identity else rng.standard_normal((n, p))
    steps = np.repeat(rng.normal(scale=2.0, size=3), -(-p // 3))[:p]
    y = X @ steps + rng.standard_normal(X.shape[0])
    D = diff_1d(p)
    return GenLassoProblem(X=X, D=D, y=y, lam=scale * float(np.abs(X.T @ y).max()))


def lasso_oracle(X, y, lam):
    """L-BFGS-B on the split form beta = b+ - b-, b+, b- >= 0."""
    p = X.shape[1]

    def objective(w):
        beta = w[:p] - w[p:]
        r = y - X @ beta
        g = -X.T @ r
        return 0.5 * r @ r + lam * w.sum(), np.concatenate([g + lam, -g + lam])

    res = minimize(
        objective,
        np.zeros(2 * p),
        jac=True,
        method="L-BFGS-B",
        bounds=[(0, None)] * (2 * p),
        options={"ftol": 1e-16, "gtol": 1e-12, "maxiter": 50_000},
    )
    return res.x[:p] - res.x[p:]


def fused_dual_oracle(D, y, lam):
    """Fit of the identity-design generalized lasso via its box-constrained dual."""
    m = D.shape[0]

    def objective(u):
        r = y - D.T @ u
        return 0.5 * r @ r, -D @ r

    res = minimize(
        objective,
        np.zeros(m),
        jac=True,
        method="L-BFGS-B",
        bounds=[(-lam, lam)] * m,
        options={"ftol": 1e-16, "gtol": 1e-12, "maxiter": 50_000},
    )
    return y - D.T @ res.x


@pytest.fixture
def identity_lasso():
    return LassoProblem(X=np.eye(3), y=[3.0, 0.5, -2.0], lam=1.0)


@pytest.fixture
def fused_fixture():
    return GenLassoProblem(X=np.eye(3), D=diff_1d(3), y=[0.0, 0.0, 10.0], lam=1.0)


@pytest.fixture
def rng():
    return np.random.default_rng(20240501)
