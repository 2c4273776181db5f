"""Input validation helpers shared across the package."""

from __future__ import annotations

import numbers

import numpy as np


def as_point_matrix(points, *, name: str = "points") -> np.ndarray:
    """Coerce ``points`` to a float (n, d) matrix with n >= 1, all finite."""
    arr = np.asarray(points, dtype=float)
    if arr.ndim == 1:
        arr = arr.reshape(-1, 1)
    if arr.ndim != 2 or arr.shape[0] == 0 or arr.shape[1] == 0:
        raise ValueError(f"{name} must be a nonempty n x d matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite values")
    return arr


def as_vector(x, d: int | None = None, *, name: str = "vector") -> np.ndarray:
    """Coerce ``x`` to a finite 1-d float array, optionally of length ``d``."""
    arr = np.asarray(x, dtype=float).reshape(-1)
    if arr.size == 0:
        raise ValueError(f"{name} must be nonempty")
    if d is not None and arr.size != d:
        raise ValueError(f"{name} must have length {d}, got {arr.size}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite values")
    return arr


def as_generator(seed) -> np.random.Generator:
    """Accept a Generator, a non-negative int seed, or None (fresh entropy)."""
    if isinstance(seed, np.random.Generator):
        return seed
    if seed is None:
        return np.random.default_rng()
    if isinstance(seed, numbers.Integral):
        if seed < 0:
            raise ValueError(f"seed must be non-negative, got {seed}")
        return np.random.default_rng(int(seed))
    raise TypeError(f"seed must be an int, numpy Generator, or None, got {type(seed).__name__}")


def check_open_unit(x: float, name: str) -> float:
    x = float(x)
    if not np.isfinite(x) or not 0.0 < x < 1.0:
        raise ValueError(f"{name} must lie strictly between 0 and 1, got {x}")
    return x


def check_closed_unit(x: float, name: str) -> float:
    x = float(x)
    if not np.isfinite(x) or not 0.0 <= x <= 1.0:
        raise ValueError(f"{name} must lie in [0, 1], got {x}")
    return x


def check_positive_int(x, name: str, *, minimum: int = 1, maximum: int | None = None) -> int:
    if not isinstance(x, numbers.Integral):
        raise ValueError(f"{name} must be an integer, got {x!r}")
    x = int(x)
    if x < minimum:
        raise ValueError(f"{name} must be >= {minimum}, got {x}")
    if maximum is not None and x > maximum:
        raise ValueError(f"{name} must be <= {maximum}, got {x}")
    return x
