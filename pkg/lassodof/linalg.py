"""Dense linear-algebra kernels built on a single SVD backend.

Every routine shares one tolerance semantics: a singular value counts
when it exceeds ``cutoff * sigma_max``.
"""
import logging
from typing import NamedTuple, Optional

import numpy as np
import scipy.linalg

from .errors import InputError
from .schemas import RankTolerance

logger = logging.getLogger(__name__)

_DEFAULT_TOL = RankTolerance()


class SvdFactors(NamedTuple):
    left_vectors: np.ndarray
    singular_values: np.ndarray
    right_vectors: np.ndarray  # rows are right singular vectors (V transpose)


def _as_array(A) -> np.ndarray:
    A = np.asarray(A, dtype=float)
    if A.ndim != 2:
        raise InputError(f"expected a 2-d matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise InputError("matrix entries must be finite")
    return A


def svd(A, full_matrices: bool = False) -> SvdFactors:
    A = _as_array(A)
    rows, cols = A.shape
    if rows == 0 or cols == 0:
        k = rows if full_matrices else 0
        return SvdFactors(
            np.eye(rows, k),
            np.zeros(0),
            np.eye(cols if full_matrices else 0, cols),
        )
    try:
        U, s, Vt = scipy.linalg.svd(A, full_matrices=full_matrices, lapack_driver="gesdd")
    except np.linalg.LinAlgError:
        logger.debug("gesdd failed on a %dx%d matrix, retrying with gesvd", rows, cols)
        U, s, Vt = scipy.linalg.svd(A, full_matrices=full_matrices, lapack_driver="gesvd")
    return SvdFactors(U, s, Vt)


def _rank_from(s: np.ndarray, shape, tol: RankTolerance) -> int:
    if s.size == 0 or s[0] == 0.0:
        return 0
    return int(np.count_nonzero(s > tol.cutoff(shape) * s[0]))


def numeric_rank(A, tol: Optional[RankTolerance] = None) -> int:
    A = _as_array(A)
    tol = tol or _DEFAULT_TOL
    return _rank_from(svd(A).singular_values, A.shape, tol)


def pseudoinverse(A, tol: Optional[RankTolerance] = None) -> np.ndarray:
    A = _as_array(A)
    tol = tol or _DEFAULT_TOL
    U, s, Vt = svd(A)
    r = _rank_from(s, A.shape, tol)
    return (Vt[:r].T / s[:r]) @ U[:, :r].T


def range_basis(A, tol: Optional[RankTolerance] = None) -> np.ndarray:
    """Orthonormal basis of col(A)."""
    A = _as_array(A)
    tol = tol or _DEFAULT_TOL
    U, s, _ = svd(A)
    return U[:, : _rank_from(s, A.shape, tol)]


def projector_onto_col(A, tol: Optional[RankTolerance] = None) -> np.ndarray:
    Q = range_basis(A, tol)
    return Q @ Q.T


def null_basis(A, tol: Optional[RankTolerance] = None) -> np.ndarray:
    A = _as_array(A)
    tol = tol or _DEFAULT_TOL
    _, s, Vt = svd(A, full_matrices=True)
    r = _rank_from(s, A.shape, tol)
    return Vt[r:].T.copy()


def projector_onto_null(A, tol: Optional[RankTolerance] = None) -> np.ndarray:
    A = _as_array(A)
    tol = tol or _DEFAULT_TOL
    _, s, Vt = svd(A)
    V = Vt[: _rank_from(s, A.shape, tol)].T
    return np.eye(A.shape[1]) - V @ V.T


def nullity(A, tol: Optional[RankTolerance] = None) -> int:
    A = _as_array(A)
    return A.shape[1] - numeric_rank(A, tol)
