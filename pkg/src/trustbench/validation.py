"""Input validation helpers shared by the estimators and the pipeline."""

from __future__ import annotations

import numpy as np

from .errors import TrainingError

TRUSTWORTHY = "trustworthy"
UNTRUSTWORTHY = "untrustworthy"
LABEL_TO_INT = {UNTRUSTWORTHY: 0, TRUSTWORTHY: 1}
INT_TO_LABEL = {0: UNTRUSTWORTHY, 1: TRUSTWORTHY}


def check_matrix(X, name: str = "X") -> np.ndarray:
    """Coerce to a finite 2-D float64 array."""
    X = np.asarray(X, dtype=np.float64)
    if X.ndim == 1:
        X = X.reshape(1, -1)
    if X.ndim != 2:
        raise ValueError(f"{name} must be 2-dimensional, got shape {X.shape}")
    if X.size and not np.all(np.isfinite(X)):
        raise ValueError(f"{name} contains non-finite values")
    return X


def check_X_y(X, y) -> tuple[np.ndarray, np.ndarray]:
    """Validate a training pair: matching lengths, binary labels, both classes present."""
    X = check_matrix(X)
    y = encode_labels(y)
    if X.shape[0] != y.shape[0]:
        raise ValueError(f"X has {X.shape[0]} rows but y has {y.shape[0]}")
    if X.shape[0] == 0:
        raise TrainingError("training set is empty")
    if np.unique(y).size < 2:
        raise TrainingError("training set contains a single class; need both")
    return X, y


def encode_labels(y) -> np.ndarray:
    """Map label strings (or 0/1 ints) to an int array with 1 = trustworthy."""
    encoded = []
    for value in y:
        if isinstance(value, str):
            if value not in LABEL_TO_INT:
                raise ValueError(f"unknown label {value!r}")
            encoded.append(LABEL_TO_INT[value])
        elif value in (0, 1):
            encoded.append(int(value))
        else:
            raise ValueError(f"unknown label {value!r}")
    return np.asarray(encoded, dtype=np.int64)


def decode_labels(y) -> list[str]:
    return [INT_TO_LABEL[int(v)] for v in y]
