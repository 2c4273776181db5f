"""Closed-form miscoverage bounds for coordinatewise hulls of B estimates.

For B independent estimates whose sign measure around the target is an MCH
measure (no mass on exact-zero patterns) with orthant-median bias at most
delta, the probability that the axis-aligned hull of the B estimates misses
the target is bracketed by two explicit alternating binomial sums.  At
delta = 0 both sums collapse to 1 - (1 - 2^(1-B))^d.  The bracket drives the
batch-count choice and its randomized rounding, which hits a requested
miscoverage level exactly in expectation when delta = 0.
"""

from __future__ import annotations

import math

import numpy as np

from ._validation import check_closed_unit, check_open_unit, check_positive_int

MAX_BOUND_DIMENSION = 30


def _check_bound_args(b, delta: float, d) -> tuple[int, float, int]:
    b = check_positive_int(b, "b")
    d = check_positive_int(d, "d", maximum=MAX_BOUND_DIMENSION)
    delta = float(delta)
    if not np.isfinite(delta) or not 0.0 <= delta <= 0.5:
        raise ValueError(f"delta must lie in [0, 1/2], got {delta}")
    return b, delta, d


def _uniform_term(j: int, b: int) -> float:
    # 2^j * (2^-j)^b, kept as an exact power of two
    return math.ldexp(1.0, j * (1 - b))


def _spread_term(j: int, b: int, delta: float) -> float:
    # (2^j - 1) low^b + high^b where low/high split 2^-j by 2 delta / 2^j
    n = 1 << j
    low = (1.0 - 2.0 * delta) / n
    high = 1.0 / n + (n - 1) * 2.0 * delta / n
    return (n - 1) * low**b + high**b


def lower_bound(b, delta: float, d) -> float:
    """Lower miscoverage bound L(B, delta; d) for the hull of B estimates.

    Odd-size coordinate subsets contribute their uniform-orthant term, even
    sizes the extremal spread term.  Requires b >= 1, 0 <= delta <= 1/2,
    1 <= d <= 30.
    """
    b, delta, d = _check_bound_args(b, delta, d)
    total = 0.0
    for j in range(1, d + 1):
        coef = math.comb(d, j)
        if j % 2 == 1:
            total += coef * _uniform_term(j, b)
        else:
            total -= coef * _spread_term(j, b, delta)
    return total


def upper_bound(b, delta: float, d) -> float:
    """Upper miscoverage bound U(B, delta; d); the mirror image of lower_bound.

    Nondecreasing in delta, and U(B, 0; d) = L(B, 0; d) = 1 - (1 - 2^(1-B))^d.
    """
    b, delta, d = _check_bound_args(b, delta, d)
    total = 0.0
    for j in range(1, d + 1):
        coef = math.comb(d, j)
        if j % 2 == 1:
            total += coef * _spread_term(j, b, delta)
        else:
            total -= coef * _uniform_term(j, b)
    return total


def batch_count(alpha: float, d) -> int:
    """Smallest B with U(B, 0; d) <= alpha, via ceil(1 - log2(1 - (1-alpha)^(1/d))).

    The result is verified against the sandwich property
    U(B, 0; d) <= alpha < U(B - 1, 0; d); a floating-point boundary case that
    breaks the sandwich raises RuntimeError instead of returning silently.
    """
    alpha = check_open_unit(alpha, "alpha")
    d = check_positive_int(d, "d", maximum=MAX_BOUND_DIMENSION)
    x = 1.0 - (1.0 - alpha) ** (1.0 / d)
    b = math.ceil(1.0 - math.log2(x))
    if b < 2:
        raise RuntimeError(f"batch count formula produced {b} for alpha={alpha}, d={d}")
    if not (upper_bound(b, 0.0, d) <= alpha < upper_bound(b - 1, 0.0, d)):
        raise RuntimeError(
            f"batch count sandwich check failed at alpha={alpha}, d={d}: "
            f"formula gave B={b} with U(B)={upper_bound(b, 0.0, d)!r}, "
            f"U(B-1)={upper_bound(b - 1, 0.0, d)!r}"
        )
    return b


def randomized_batches(alpha: float, d, uniform_draw: float) -> tuple[float, int]:
    """Randomized rounding of the batch count.

    Returns (tau, b_star) where tau is the probability weight on B - 1 and
    b_star is B - 1 when uniform_draw <= tau, else B.  The mixture satisfies
    tau * U(B-1, 0; d) + (1 - tau) * U(B, 0; d) = alpha, so the delta = 0
    miscoverage of the resulting hull equals alpha exactly in expectation.
    """
    alpha = check_open_unit(alpha, "alpha")
    d = check_positive_int(d, "d", maximum=MAX_BOUND_DIMENSION)
    uniform_draw = check_closed_unit(uniform_draw, "uniform_draw")
    b = batch_count(alpha, d)
    u_b = upper_bound(b, 0.0, d)
    u_prev = upper_bound(b - 1, 0.0, d)
    denom = u_prev - u_b
    if denom <= 0.0:
        # Degenerate bracket; keep the deterministic count.
        return 0.0, b
    tau = (alpha - u_b) / denom
    b_star = b - 1 if uniform_draw <= tau else b
    return tau, b_star


def group_spread_bounds(x, beta: float, b) -> tuple[float, float, bool]:
    """Sharp bracket for sum(x_i^B) over probability vectors with x_i >= beta.

    For x on the N-simplex with every entry at least beta, the power sum is
    minimized at the uniform vector and maximized by pushing all slack onto
    one entry:  N (1/N)^B <= sum x_i^B <= (N-1) beta^B + (1-(N-1) beta)^B.
    Returns (lower, upper, holds) where holds reports whether the supplied
    vector's power sum sits inside the bracket (with 1e-12 slack).
    """
    b = check_positive_int(b, "b")
    arr = np.asarray(x, dtype=float).reshape(-1)
    n = arr.size
    if n == 0:
        raise ValueError("x must be nonempty")
    if not np.all(np.isfinite(arr)):
        raise ValueError("x contains non-finite values")
    beta = float(beta)
    if not np.isfinite(beta) or beta < 0 or beta > 1.0 / n:
        raise ValueError(f"beta must lie in [0, 1/N] with N={n}, got {beta}")
    if abs(math.fsum(arr) - 1.0) > 1e-12:
        raise ValueError("x must sum to 1 within 1e-12")
    if np.any(arr < beta - 1e-12):
        raise ValueError(f"every entry of x must be at least beta={beta}")
    lower = n * (1.0 / n) ** b
    upper = (n - 1) * beta**b + (1.0 - (n - 1) * beta) ** b
    s = float(np.sum(arr**b))
    holds = lower - 1e-12 <= s <= upper + 1e-12
    return lower, upper, holds
