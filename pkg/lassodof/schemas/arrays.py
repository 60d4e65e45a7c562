"""Annotated numpy types for pydantic models.

Arrays are copied on validation and frozen, so a model never shares
mutable state with its caller.
"""
from typing import Annotated

import numpy as np
from pydantic import PlainSerializer, PlainValidator


def _freeze(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


def as_vector(value) -> np.ndarray:
    arr = np.array(value, dtype=float)
    if arr.ndim == 2 and 1 in arr.shape:
        arr = arr.ravel()
    if arr.ndim != 1:
        raise ValueError(f"expected a vector, got an array of shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("vector entries must be finite")
    return _freeze(arr)


def as_matrix(value) -> np.ndarray:
    arr = np.array(value, dtype=float)
    if arr.ndim == 1:
        arr = arr.reshape(-1, 1)
    if arr.ndim != 2:
        raise ValueError(f"expected a matrix, got an array of shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("matrix entries must be finite")
    return _freeze(arr)


def _to_list(arr: np.ndarray) -> list:
    return arr.tolist()


Vector = Annotated[
    np.ndarray,
    PlainValidator(as_vector),
    PlainSerializer(_to_list, return_type=list, when_used="json"),
]

Matrix = Annotated[
    np.ndarray,
    PlainValidator(as_matrix),
    PlainSerializer(_to_list, return_type=list, when_used="json"),
]
