"""CSV ingestion and synthetic data generation.

Matrices are headerless, comma-separated, one row per line. Vectors may be
stored as a single row or a single column.
"""
import json
import logging
from pathlib import Path
from typing import List, NamedTuple, Optional, Tuple

import numpy as np
import pandas as pd
import scipy.linalg

from .errors import InputError
from .schemas import GraphEdges

logger = logging.getLogger(__name__)

FLOAT_FORMAT = "%.17g"
DESIGN_FAMILIES = ("gaussian", "orthogonal", "duplicated-columns", "custom")


def _read_frame(path, dtype) -> pd.DataFrame:
    path = Path(path)
    if not path.exists():
        raise InputError(f"input file not found: {path}")
    try:
        return pd.read_csv(path, header=None, dtype=dtype)
    except (ValueError, pd.errors.ParserError, pd.errors.EmptyDataError) as e:
        raise InputError(f"could not parse {path}: {e}")


def read_matrix(path) -> np.ndarray:
    A = _read_frame(path, float).to_numpy()
    if not np.all(np.isfinite(A)):
        raise InputError(f"{path} contains non-finite entries")
    return A


def read_vector(path) -> np.ndarray:
    A = read_matrix(path)
    if 1 not in A.shape:
        raise InputError(f"{path} holds a {A.shape[0]}x{A.shape[1]} matrix, expected a vector")
    return A.ravel()


def write_matrix(path, A) -> None:
    pd.DataFrame(np.atleast_2d(A)).to_csv(
        path, header=False, index=False, float_format=FLOAT_FORMAT
    )


def write_vector(path, v) -> None:
    write_matrix(path, np.asarray(v, dtype=float).reshape(-1, 1))


def load_graph_edges(path, node_count: Optional[int] = None) -> GraphEdges:
    frame = _read_frame(path, int)
    if frame.shape[1] != 2:
        raise InputError(f"{path}: edge lists need exactly two columns, got {frame.shape[1]}")
    edges = [(int(a), int(b)) for a, b in frame.itertuples(index=False)]
    if node_count is None:
        node_count = 1 + max((max(e) for e in edges), default=0)
    try:
        return GraphEdges(node_count=node_count, edges=edges)
    except ValueError as e:
        raise InputError(f"{path}: {e}")


class SyntheticData(NamedTuple):
    X: np.ndarray
    mu: np.ndarray
    y: np.ndarray
    beta_star: np.ndarray
    duplicated_pairs: List[Tuple[int, int]]


def generate_design(
    family: str,
    n: int,
    p: int,
    rng: np.random.Generator,
    duplicates: int = 1,
) -> Tuple[np.ndarray, List[Tuple[int, int]]]:
    if n < 1 or p < 1:
        raise InputError(f"dimensions must be positive, got n={n}, p={p}")
    if family == "gaussian":
        return rng.standard_normal((n, p)), []
    if family == "orthogonal":
        if p > n:
            raise InputError(f"orthogonal designs need p <= n, got n={n}, p={p}")
        Q, _ = scipy.linalg.qr(rng.standard_normal((n, p)), mode="economic")
        return Q, []
    if family == "duplicated-columns":
        if duplicates < 1 or 2 * duplicates > p:
            raise InputError(f"cannot duplicate {duplicates} column pairs with p={p}")
        X = rng.standard_normal((n, p))
        pairs = [(2 * i, 2 * i + 1) for i in range(duplicates)]
        for a, b in pairs:
            X[:, b] = X[:, a]
        return X, pairs
    raise InputError(f"unknown design family {family!r}; use one of {', '.join(DESIGN_FAMILIES)}")


def generate_dataset(
    family: str,
    n: int,
    p: int,
    seed: int,
    sparsity: int = 5,
    signal: float = 1.0,
    sigma: float = 1.0,
    duplicates: int = 1,
    X: Optional[np.ndarray] = None,
) -> SyntheticData:
    """mu = X beta* with a ``sparsity``-sparse beta*, y = mu + sigma * noise."""
    rng = np.random.default_rng(seed)
    if family == "custom":
        if X is None:
            raise InputError("the custom family needs a design matrix")
        X = np.asarray(X, dtype=float)
        n, p = X.shape
        pairs = []
    else:
        X, pairs = generate_design(family, n, p, rng, duplicates=duplicates)
    beta_star = np.zeros(p)
    support = rng.choice(p, size=min(sparsity, p), replace=False)
    beta_star[support] = signal * rng.choice([-1.0, 1.0], size=support.size)
    mu = X @ beta_star
    y = mu + sigma * rng.standard_normal(n)
    return SyntheticData(X, mu, y, beta_star, pairs)


def write_dataset(out_dir, data: SyntheticData, family: str, seed: int) -> None:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    write_matrix(out_dir / "X.csv", data.X)
    write_vector(out_dir / "y.csv", data.y)
    write_vector(out_dir / "mu.csv", data.mu)
    manifest = {
        "family": family,
        "seed": seed,
        "n": int(data.X.shape[0]),
        "p": int(data.X.shape[1]),
        "duplicated_pairs": [list(pair) for pair in data.duplicated_pairs],
        "beta_star": data.beta_star.tolist(),
    }
    (out_dir / "design.json").write_text(json.dumps(manifest, indent=2, sort_keys=True))
    logger.info("wrote %s dataset (n=%d, p=%d) to %s", family, manifest["n"], manifest["p"], out_dir)
