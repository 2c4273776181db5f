"""Median-bias functionals of a distribution around a candidate center.

Three nested notions of how far a center is from being a componentwise /
halfspace / orthant median:

* rectilinear bias: worst one-sided coordinate mass short of 1/2,
* halfspace (Tukey) bias: worst halfspace-through-center mass short of 1/2,
* orthant bias: scaled shortfall of the smallest orthant mass below 2^-d.

The orthant bias of a measure with mass on exact-zero sign patterns is
defined through dispersal: the smallest orthant bias among all measures
reachable by moving each zero-pattern atom's mass out to compatible
orthants.  That optimum is computed by a binary search over the achievable
min-orthant mass, with each feasibility question answered by a bipartite
max-flow; for d <= 3 every answer is cross-checked against an independent
Hall-condition enumeration.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Mapping

import networkx as nx
import numpy as np

from ._validation import as_generator, as_point_matrix, as_vector
from .signs import (
    SignMeasure,
    empirical_sign_measure,
    is_mch,
    is_orthant,
    orthant_labels,
)


def _precedes(a, b) -> bool:
    # unvalidated hot-path version of signs.sign_precedes
    return all(ai == 0 or ai == bi for ai, bi in zip(a, b))


def r_med_bias(points, center) -> float:
    """Rectilinear median bias of a sample around a center.

    Computes (1/2 - min over coordinates j and sides of the empirical mass of
    the closed halfline on that side of center_j)_+, where ties at the center
    count for both sides.
    """
    pts = as_point_matrix(points)
    c = as_vector(center, pts.shape[1], name="center")
    diff = pts - c
    ge = (diff >= 0.0).mean(axis=0)
    le = (diff <= 0.0).mean(axis=0)
    return max(0.0, 0.5 - min(ge.min(), le.min()))


def _halfplane_min_fraction(y: np.ndarray) -> float:
    """Minimum over directions u in R^2 of the fraction of rows with u . y >= 0.

    Each nonzero row constrains u to a closed half-circle of directions, so
    the count of satisfied rows is piecewise constant between the 2n arc
    endpoints and upper semicontinuous at them; the minimum is attained on an
    open arc.  The sweep starts just above angle -pi, where the active arcs
    are exactly those whose start angle exceeds their end angle (they wrap
    through +-pi), so the anchor count is pure integer bookkeeping.
    """
    n = y.shape[0]
    nonzero = (y[:, 0] != 0.0) | (y[:, 1] != 0.0)
    n_zero = n - int(nonzero.sum())
    z = y[nonzero]
    if z.shape[0] == 0:
        return 1.0
    # Arc endpoints as exact perpendicular angles, so that opposite points
    # produce bit-identical event angles.  Adding 0.0 turns -0.0 into +0.0,
    # keeping axis directions away from the -pi representation.
    starts = np.arctan2(-z[:, 0] + 0.0, z[:, 1])
    ends = np.arctan2(z[:, 0] + 0.0, -z[:, 1])
    angles = np.concatenate([starts, ends])
    deltas = np.concatenate([np.ones(z.shape[0], dtype=np.int64), -np.ones(z.shape[0], dtype=np.int64)])
    order = np.argsort(angles, kind="stable")
    angles = angles[order]
    deltas = deltas[order]
    run_end = np.append(angles[1:] != angles[:-1], True)
    cum = np.cumsum(deltas)[run_end]
    c0 = int((starts > ends).sum())
    # the final cumulative value is 0, so the wrap arc itself is included
    min_count = c0 + int(cum.min())
    return (min_count + n_zero) / n


def _sampled_min_fraction(y: np.ndarray, n_directions: int, rng: np.random.Generator) -> tuple[float, int]:
    """Minimum halfspace fraction over a finite direction set (any d).

    Candidates are the coordinate axes, random gaussian directions, and all
    pairwise differences when n <= 200, each taken with both orientations.
    Returns (fraction, number of candidate directions); the fraction is an
    upper bound for the true minimum, hence the bias a lower bound.
    """
    n, d = y.shape
    blocks = [np.eye(d)]
    if n_directions > 0:
        blocks.append(rng.standard_normal((int(n_directions), d)))
    if n <= 200:
        diffs = y[:, None, :] - y[None, :, :]
        iu = np.triu_indices(n, k=1)
        blocks.append(diffs[iu])
    cand = np.concatenate(blocks, axis=0)
    cand = cand[np.any(cand != 0.0, axis=1)]
    cand = np.concatenate([cand, -cand], axis=0)
    best = 1.0
    step = max(1, (1 << 23) // max(n, 1))
    for start in range(0, cand.shape[0], step):
        block = cand[start : start + step]
        frac = (y @ block.T >= 0.0).mean(axis=0).min()
        best = min(best, float(frac))
    return best, cand.shape[0]


def t_med_bias(points, center, method: str = "auto", n_directions: int = 10000, *, seed=0) -> float:
    """Halfspace (Tukey) median bias of a sample around a center.

    Computes (1/2 - min over directions u of the empirical mass of the closed
    halfspace u . (x - center) >= 0)_+.

    Parameters
    ----------
    points, center : array-like
        Sample of shape (n, d) and center of length d.
    method : {"auto", "exact", "sampled"}
        "exact" enumerates all directions (d <= 2 only; the d = 2 case is an
        O(n log n) circular sweep).  "sampled" minimizes over a finite
        direction set and therefore returns a lower bound on the bias.
        "auto" picks "exact" for d <= 2 and "sampled" otherwise.
    n_directions : int
        Number of random directions for the sampled method.
    seed : int, numpy Generator, or None
        Source of the random directions; fixed default keeps results
        deterministic.
    """
    pts = as_point_matrix(points)
    c = as_vector(center, pts.shape[1], name="center")
    d = pts.shape[1]
    if method not in ("auto", "exact", "sampled"):
        raise ValueError(f"method must be auto, exact, or sampled, got {method!r}")
    if method == "exact" and d > 2:
        raise ValueError(f"exact method supports d <= 2 only, got d={d}; use method='sampled'")
    if method == "auto":
        method = "exact" if d <= 2 else "sampled"
    y = pts - c
    if method == "exact":
        if d == 1:
            frac = min((y[:, 0] >= 0.0).mean(), (y[:, 0] <= 0.0).mean())
        else:
            frac = _halfplane_min_fraction(y)
    else:
        if n_directions < 1:
            raise ValueError(f"n_directions must be >= 1, got {n_directions}")
        frac, _ = _sampled_min_fraction(y, n_directions, as_generator(seed))
    return max(0.0, 0.5 - float(frac))


def o_med_bias_mch(m: SignMeasure, tol: float = 1e-12) -> float:
    """Orthant median bias 2^(d-1) (2^-d - min orthant mass)_+ of an MCH measure.

    Raises ValueError when the measure carries edge mass above ``tol``; use
    :func:`omb_general` for measures with mass on zero patterns.
    """
    if not isinstance(m, SignMeasure):
        raise ValueError("m must be a SignMeasure")
    if not is_mch(m, tol):
        raise ValueError(
            f"measure has edge mass {m.edge_mass()!r} above tol={tol}; use omb_general for such measures"
        )
    target = math.ldexp(1.0, -m.d)
    return math.ldexp(1.0, m.d - 1) * max(0.0, target - m.orthant_mass_min())


def omb_1d_closed_form(p: float, q: float, r: float) -> float:
    """Dispersal orthant bias in one dimension: (1/2 - min(p + q, r + q))_+.

    p, q, r are the masses of the negative, zero, and positive patterns and
    must be non-negative and sum to 1 within 1e-12.
    """
    vals = [float(p), float(q), float(r)]
    if any(not np.isfinite(v) or v < 0 for v in vals):
        raise ValueError(f"p, q, r must be non-negative, got {vals}")
    if abs(math.fsum(vals) - 1.0) > 1e-12:
        raise ValueError(f"p + q + r must equal 1 within 1e-12, got {math.fsum(vals)!r}")
    p, q, r = vals
    return max(0.0, 0.5 - min(p + q, r + q))


def _maxflow_feasible(supplies, demands, eps: float) -> bool:
    total_demand = math.fsum(need for _, need in demands)
    if total_demand <= eps:
        return True
    total_supply = math.fsum(w for _, w in supplies)
    if total_demand > total_supply + eps:
        return False
    graph = nx.DiGraph()
    for i, (eta, w) in enumerate(supplies):
        graph.add_edge("src", ("e", i), capacity=w)
        for j, (gamma, _) in enumerate(demands):
            if _precedes(eta, gamma):
                graph.add_edge(("e", i), ("o", j))
    for j, (_, need) in enumerate(demands):
        graph.add_edge(("o", j), "snk", capacity=need)
    value = nx.maximum_flow_value(graph, "src", "snk")
    return value >= total_demand - eps


def _hall_feasible(supplies, demands, eps: float) -> bool:
    # Gale feasibility: every demand subset S needs sum(S) <= supply adjacent to S.
    k = len(demands)
    if k == 0:
        return True
    need = [nd for _, nd in demands]
    adj = []
    for eta, w in supplies:
        mask = 0
        for j, (gamma, _) in enumerate(demands):
            if _precedes(eta, gamma):
                mask |= 1 << j
        adj.append((mask, w))
    dsum = [0.0] * (1 << k)
    for mask in range(1, 1 << k):
        low = mask & -mask
        dsum[mask] = dsum[mask ^ low] + need[low.bit_length() - 1]
    for mask in range(1, 1 << k):
        ssum = math.fsum(w for amask, w in adj if amask & mask)
        if dsum[mask] > ssum + eps:
            return False
    return True


def omb_general(m: SignMeasure, tol: float = 1e-10) -> float:
    """Dispersal orthant median bias of an arbitrary sign measure.

    The infimum of the orthant bias over all MCH measures reachable from m by
    dispersing zero-pattern mass equals 2^(d-1) (2^-d - t*)_+ where t* is the
    largest achievable minimum orthant mass.  t* is located by binary search
    on the bracket [min orthant mass, 2^-d]; level t is achievable iff the
    shortfalls (t - orthant mass)_+ can be covered by a flow from zero-pattern
    atoms to the orthants they precede.  The search returns the certified
    feasible end, so the result never understates the bias (overstatement is
    at most 2^(d-1) tol).  For d <= 3 every max-flow feasibility answer is
    cross-checked against an independent Hall-condition enumeration and a
    disagreement raises RuntimeError.

    Cost grows with the number of orthants, 2^d; intended for small d (the
    flow graph has at most 3^d - 2^d supply and 2^d demand nodes).
    """
    if not isinstance(m, SignMeasure):
        raise ValueError("m must be a SignMeasure")
    tol = float(tol)
    if not np.isfinite(tol) or tol <= 0:
        raise ValueError(f"tol must be positive, got {tol}")
    d = m.d
    target = math.ldexp(1.0, -d)
    scale = math.ldexp(1.0, d - 1)
    orth = {gamma: 0.0 for gamma in orthant_labels(d)}
    supplies = []
    for key, val in m.items():
        if is_orthant(key):
            orth[key] = val
        else:
            supplies.append((key, val))
    min_orth = min(orth.values())
    if not supplies:
        return scale * max(0.0, target - min_orth)
    cross_check = d <= 3

    def feasible(t: float) -> bool:
        demands = [(gamma, t - w) for gamma, w in orth.items() if t - w > 0.0]
        ans = _maxflow_feasible(supplies, demands, 1e-12)
        if cross_check:
            hall = _hall_feasible(supplies, demands, 1e-12)
            if hall != ans:
                raise RuntimeError(
                    f"max-flow feasibility ({ans}) disagrees with Hall-condition check ({hall}) at level {t!r}"
                )
        return ans

    lo = min_orth
    hi = target
    if feasible(hi):
        lo = hi
    else:
        while hi - lo > tol:
            mid = 0.5 * (lo + hi)
            if feasible(mid):
                lo = mid
            else:
                hi = mid
    return scale * max(0.0, target - lo)


def orthant_sup_distance(a: SignMeasure, b: SignMeasure) -> float:
    """Largest absolute difference of closed-orthant masses between two measures.

    The closed orthant for label gamma collects every atom whose pattern
    precedes gamma, so zero coordinates count toward both sides.
    """
    if not isinstance(a, SignMeasure) or not isinstance(b, SignMeasure):
        raise ValueError("a and b must be SignMeasures")
    if a.d != b.d:
        raise ValueError(f"dimension mismatch: {a.d} vs {b.d}")

    def closed_masses(m: SignMeasure) -> dict:
        out = {gamma: 0.0 for gamma in orthant_labels(m.d)}
        for key, val in m.items():
            choices = [((-1, 1) if v == 0 else (v,)) for v in key]
            for gamma in itertools.product(*choices):
                out[gamma] += val
        return out

    ca = closed_masses(a)
    cb = closed_masses(b)
    return max(abs(ca[g] - cb[g]) for g in ca)


@dataclass(frozen=True)
class BiasReport:
    """Bundle of the three bias functionals for one sample and center.

    Each value lies in [0, 1/2], and the rectilinear bias never exceeds the
    halfspace bias by more than numerical slack because coordinate directions
    are a subset of all directions.
    """

    r_bias: float
    t_bias: float
    o_bias: float
    method_notes: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self):
        for name, val in (("r_bias", self.r_bias), ("t_bias", self.t_bias), ("o_bias", self.o_bias)):
            if not np.isfinite(val) or not -1e-12 <= val <= 0.5 + 1e-12:
                raise ValueError(f"{name} must lie in [0, 1/2], got {val!r}")
        if self.r_bias > self.t_bias + 1e-9:
            raise ValueError(
                f"r_bias={self.r_bias!r} exceeds t_bias={self.t_bias!r} beyond slack 1e-9"
            )


def bias_report(
    points,
    center,
    tukey_method: str = "auto",
    n_directions: int = 10000,
    *,
    seed=0,
    zero_tol: float = 0.0,
) -> BiasReport:
    """Compute all three biases of a sample around a center.

    The orthant bias always goes through the empirical sign measure and the
    dispersal solver, so observations with exact ties at the center are
    handled by dispersal rather than by the MCH-only formula.  The sampled
    halfspace method always includes the coordinate directions among its
    candidates, which keeps the rectilinear bias below the reported halfspace
    bias.
    """
    pts = as_point_matrix(points)
    c = as_vector(center, pts.shape[1], name="center")
    d = pts.shape[1]
    r = r_med_bias(pts, c)
    t = t_med_bias(pts, c, method=tukey_method, n_directions=n_directions, seed=seed)
    measure = empirical_sign_measure(pts, c, zero_tol=zero_tol)
    o = omb_general(measure)
    used_exact = tukey_method == "exact" or (tukey_method == "auto" and d <= 2)
    notes = {
        "r_bias": "empirical one-sided coordinate masses",
        "t_bias": "exact direction sweep" if used_exact else f"sampled lower bound ({n_directions} random directions)",
        "o_bias": "mass dispersal on the empirical sign measure",
    }
    return BiasReport(r_bias=r, t_bias=t, o_bias=o, method_notes=notes)
