"""Input validation helpers for the estimator API.

scikit-learn's ``check_array`` rejects complex input, which frames need, so
signals are validated here instead.
"""

import numpy as np

from .exceptions import DimensionMismatch, NonFinite


def check_signals(X, n_features=None, name="X"):
    """Validate a ``(n_samples, n_features)`` batch of real or complex signals."""
    X = np.asarray(X)
    if X.ndim != 2:
        raise DimensionMismatch(
            f"Expected 2D array for {name}, got {X.ndim}D. Reshape with "
            "X.reshape(1, -1) for a single sample."
        )
    if X.dtype.kind not in "biufc":
        raise TypeError(f"{name} must be numeric, got dtype {X.dtype}")
    X = X.astype(np.complex128 if X.dtype.kind == "c" else np.float64)
    if not np.all(np.isfinite(X)):
        raise NonFinite(f"{name} contains NaN or Inf")
    if n_features is not None and X.shape[1] != n_features:
        raise DimensionMismatch(
            f"{name} has {X.shape[1]} features, but the frame lives in dimension {n_features}"
        )
    return X


def check_square(K, n, name="K"):
    K = np.asarray(K)
    if K.shape != (n, n):
        raise DimensionMismatch(f"{name} must have shape ({n}, {n}), got {K.shape}")
    return K
