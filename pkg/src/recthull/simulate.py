"""Sampling distributions, exact miscoverage oracles, and Monte Carlo checks.

The oracle computes the probability that the coordinatewise hull of B i.i.d.
draws from a sign measure misses the center, exactly, by inclusion-exclusion
over the events "some coordinate subset keeps constant strict signs".  It is
valid for any sign measure (mass on zero patterns simply never contributes
to a miss).  A brute-force enumeration over support tuples provides an
independent route to the same number, and seeded Monte Carlo ties both to
actual sampling.

Replication r of any Monte Carlo run draws from a generator seeded with
(seed, r), so results are reproducible and independent of scheduling.
"""

from __future__ import annotations

import itertools
import math
import numbers
from dataclasses import dataclass
from typing import Callable, Protocol

import numpy as np

from ._validation import as_generator, as_vector, check_open_unit, check_positive_int
from .hull import EstimatorFailure, hulc_region
from .signs import SignMeasure, is_orthant

ENUMERATION_BUDGET = 10_000_000


class Distribution(Protocol):
    """Anything with a dimension and a seeded sampler."""

    d: int

    def sample(self, n: int, rng: np.random.Generator) -> np.ndarray: ...


def replication_rng(seed: int, rep: int) -> np.random.Generator:
    """Independent generator for replication ``rep`` of a run seeded by ``seed``."""
    if not isinstance(seed, numbers.Integral) or not isinstance(rep, numbers.Integral):
        raise ValueError(f"seed and rep must be integers, got {seed!r}, {rep!r}")
    if seed < 0 or rep < 0:
        raise ValueError(f"seed and rep must be non-negative, got {seed}, {rep}")
    return np.random.default_rng(np.random.SeedSequence(entropy=[int(seed), int(rep)]))


class Gaussian:
    """Multivariate normal with the given mean and PSD covariance."""

    def __init__(self, mean, cov=None):
        self.mean = as_vector(mean, name="mean")
        self.d = self.mean.size
        if cov is None:
            cov = np.eye(self.d)
        cov = np.asarray(cov, dtype=float)
        if cov.shape != (self.d, self.d):
            raise ValueError(f"cov must have shape ({self.d}, {self.d}), got {cov.shape}")
        if not np.allclose(cov, cov.T, atol=1e-10):
            raise ValueError("cov must be symmetric")
        if np.min(np.linalg.eigvalsh(cov)) < -1e-10:
            raise ValueError("cov must be positive semidefinite")
        self.cov = cov
        self.scale_sequence: Callable[[int], float] | None = None

    def sample(self, n: int, rng: np.random.Generator) -> np.ndarray:
        return rng.multivariate_normal(self.mean, self.cov, size=int(n), method="eigh")


class PointMixture:
    """Uniform pick from a fixed point set plus uniform-ball noise.

    The noise radius r for a unit draw u is radius * u^(1/d) (for d = 2 this
    is the square-root inversion that makes disk sampling uniform), and the
    direction is a normalized gaussian vector.
    """

    def __init__(self, points, radius: float):
        self.points = np.asarray(points, dtype=float)
        if self.points.ndim != 2 or self.points.shape[0] == 0:
            raise ValueError("points must be a nonempty k x d matrix")
        if not np.all(np.isfinite(self.points)):
            raise ValueError("points contains non-finite values")
        self.radius = float(radius)
        if not np.isfinite(self.radius) or self.radius < 0:
            raise ValueError(f"radius must be non-negative, got {radius}")
        self.d = self.points.shape[1]
        self.scale_sequence: Callable[[int], float] | None = None

    def sample(self, n: int, rng: np.random.Generator) -> np.ndarray:
        n = int(n)
        idx = rng.integers(0, self.points.shape[0], size=n)
        out = self.points[idx].copy()
        if self.radius > 0:
            direction = rng.standard_normal((n, self.d))
            norms = np.linalg.norm(direction, axis=1, keepdims=True)
            norms[norms == 0.0] = 1.0
            r = self.radius * rng.uniform(size=(n, 1)) ** (1.0 / self.d)
            out += r * direction / norms
        return out


def four_point_disk() -> PointMixture:
    """Uniform mixture over (1,1), (2,-1), (-1,2), (-1,-1) with disk noise of radius 0.1.

    Around the origin this distribution has orthant and rectilinear bias zero
    but halfspace bias 1/4: each support point owns one open quadrant, yet the
    halfplane below the line x + y = 0 carries only the (-1,-1) component.
    """
    return PointMixture([(1.0, 1.0), (2.0, -1.0), (-1.0, 2.0), (-1.0, -1.0)], radius=0.1)


class TiltedGaussian:
    """Standard bivariate normal magnitudes with reweighted quadrant signs.

    Same-sign quadrants carry mass 3/8 each, mixed-sign quadrants 1/8 each.
    Around the origin the halfspace bias is zero (the density is centrally
    symmetric) but the orthant bias is 1/4.
    """

    QUADRANTS = np.array([(1, 1), (1, -1), (-1, 1), (-1, -1)], dtype=float)
    WEIGHTS = np.array([3 / 8, 1 / 8, 1 / 8, 3 / 8])

    def __init__(self):
        self.d = 2
        self.scale_sequence: Callable[[int], float] | None = None

    def sample(self, n: int, rng: np.random.Generator) -> np.ndarray:
        n = int(n)
        magnitudes = np.abs(rng.standard_normal((n, 2)))
        idx = rng.choice(4, size=n, p=self.WEIGHTS)
        return magnitudes * self.QUADRANTS[idx]


class DiscreteSign:
    """Point distribution that realizes a sign measure, using the sign vectors as points."""

    def __init__(self, measure: SignMeasure):
        if not isinstance(measure, SignMeasure):
            raise ValueError("measure must be a SignMeasure")
        self.measure = measure
        self.d = measure.d
        self.atoms = np.array(measure.support, dtype=float)
        self.weights = np.array([m for _, m in measure.items()])
        self.weights = self.weights / self.weights.sum()
        self.scale_sequence: Callable[[int], float] | None = None

    def sample(self, n: int, rng: np.random.Generator) -> np.ndarray:
        idx = rng.choice(self.atoms.shape[0], size=int(n), p=self.weights)
        return self.atoms[idx]


def make_distribution(kind: str, **params) -> Distribution:
    """Factory by name: gaussian, four-point-disk, tilted-gaussian, discrete-sign, mixture."""
    if kind == "gaussian":
        d = params.pop("d", None)
        mean = params.pop("mean", None)
        cov = params.pop("cov", None)
        if mean is None:
            mean = np.zeros(int(d) if d is not None else 2)
        dist = Gaussian(mean, cov)
    elif kind == "four-point-disk":
        dist = four_point_disk()
    elif kind == "tilted-gaussian":
        dist = TiltedGaussian()
    elif kind == "discrete-sign":
        dist = DiscreteSign(params.pop("measure"))
    elif kind == "mixture":
        dist = PointMixture(params.pop("points"), params.pop("radius", 0.0))
    else:
        raise ValueError(
            f"unknown distribution kind {kind!r}; known kinds: gaussian, four-point-disk, "
            "tilted-gaussian, discrete-sign, mixture"
        )
    scale = params.pop("scale_sequence", None)
    if scale is not None:
        dist.scale_sequence = scale
    if params:
        raise ValueError(f"unused parameters for kind {kind!r}: {sorted(params)}")
    return dist


def sample(dist: Distribution, n: int, seed) -> np.ndarray:
    """Draw n points with a generator derived from the seed."""
    n = check_positive_int(n, "n")
    return dist.sample(n, as_generator(seed))


def mch_reference_measure() -> SignMeasure:
    """Axis-free reference measure: open-quadrant masses 0.2, 0.4, 0.2, 0.2.

    Its exact 3-draw hull miscoverage is 0.472 and its orthant bias is 0.1.
    """
    return SignMeasure(2, {(1, 1): 0.2, (1, -1): 0.4, (-1, 1): 0.2, (-1, -1): 0.2})


def edge_reference_measure() -> SignMeasure:
    """Axis-loaded counterpart of :func:`mch_reference_measure`.

    Quadrant masses 0.1, 0.6, 0, 0.1 plus 0.1 on each of the patterns (0, +1)
    and (-1, 0).  Its exact 3-draw hull miscoverage is 0.484 and its dispersal
    orthant bias is 7/30.
    """
    return SignMeasure(
        2, {(1, 1): 0.1, (1, -1): 0.6, (-1, -1): 0.1, (0, 1): 0.1, (-1, 0): 0.1}
    )


def oracle_miscoverage(m: SignMeasure, b) -> float:
    """Exact probability that the hull of b draws from m misses the center.

    The hull misses iff some coordinate keeps one constant strict sign over
    all b draws.  Inclusion-exclusion over nonempty coordinate subsets I and
    strict sign patterns on I gives sum over (I, zeta) of (-1)^(|I|-1) times
    (mass of atoms matching zeta on I)^b.  Valid for any sign measure; zero
    patterns never match a strict sign.  Supported for d <= 8.
    """
    if not isinstance(m, SignMeasure):
        raise ValueError("m must be a SignMeasure")
    b = check_positive_int(b, "b")
    if m.d > 8:
        raise ValueError(f"oracle supports d <= 8, got d={m.d}")
    atoms = np.array(m.support, dtype=np.int64)
    weights = np.array([w for _, w in m.items()])
    total = 0.0
    for ell in range(1, m.d + 1):
        sign_term = 1.0 if ell % 2 == 1 else -1.0
        for subset in itertools.combinations(range(m.d), ell):
            cols = atoms[:, subset]
            for zeta in itertools.product((-1, 1), repeat=ell):
                mass = weights[(cols == np.array(zeta)).all(axis=1)].sum()
                if mass > 0.0:
                    total += sign_term * mass**b
    return float(total)


def enumerate_miscoverage(m: SignMeasure, b) -> float:
    """Brute-force miss probability: sum over all support^b tuples.

    Each tuple contributes its product mass when some coordinate carries the
    same nonzero sign in every component.  Requires |support|^b <= 1e7.
    """
    if not isinstance(m, SignMeasure):
        raise ValueError("m must be a SignMeasure")
    b = check_positive_int(b, "b")
    support = m.support
    k = len(support)
    if k**b > ENUMERATION_BUDGET:
        raise ValueError(f"enumeration needs {k}^{b} tuples, above the {ENUMERATION_BUDGET} budget")
    masses = [m.mass(s) for s in support]
    d = m.d
    total = 0.0
    for combo in itertools.product(range(k), repeat=b):
        prob = 1.0
        for i in combo:
            prob *= masses[i]
        first = support[combo[0]]
        for j in range(d):
            s0 = first[j]
            if s0 != 0 and all(support[i][j] == s0 for i in combo[1:]):
                total += prob
                break
    return total


@dataclass(frozen=True)
class MCEstimate:
    estimate: float
    std_error: float
    reps: int


def mc_miscoverage(dist: Distribution, center, b, reps, seed) -> MCEstimate:
    """Monte Carlo miss frequency of the hull of b fresh draws, over reps replications."""
    b = check_positive_int(b, "b")
    reps = check_positive_int(reps, "reps", minimum=100)
    c = as_vector(center, dist.d, name="center")
    misses = 0
    for r in range(reps):
        pts = dist.sample(b, replication_rng(seed, r))
        if np.any(np.min(pts, axis=0) > c) or np.any(np.max(pts, axis=0) < c):
            misses += 1
    est = misses / reps
    return MCEstimate(estimate=est, std_error=math.sqrt(est * (1.0 - est) / reps), reps=reps)


@dataclass(frozen=True)
class CoverageResult:
    miscoverage: float
    std_error: float
    mean_volume: float
    reps_completed: int
    n_estimator_failures: int


def mc_hulc_coverage(
    dist: Distribution,
    estimator,
    true_theta,
    alpha: float,
    n,
    reps,
    seed,
) -> CoverageResult:
    """End-to-end coverage of the randomized hull region over fresh samples.

    Each replication draws n points, fits the region, and records whether it
    misses true_theta.  Estimator failures are counted separately and do not
    enter the miss frequency.
    """
    alpha = check_open_unit(alpha, "alpha")
    n = check_positive_int(n, "n")
    reps = check_positive_int(reps, "reps", minimum=100)
    theta = as_vector(true_theta, dist.d, name="true_theta")
    misses = 0
    completed = 0
    failures = 0
    volume_total = 0.0
    for r in range(reps):
        rng = replication_rng(seed, r)
        data = dist.sample(n, rng)
        try:
            result = hulc_region(data, estimator, alpha, rng, d=dist.d)
        except EstimatorFailure:
            failures += 1
            continue
        completed += 1
        volume_total += result.box.volume
        if not result.box.contains(theta):
            misses += 1
    if completed == 0:
        raise EstimatorFailure("estimator failed on every replication")
    est = misses / completed
    return CoverageResult(
        miscoverage=est,
        std_error=math.sqrt(est * (1.0 - est) / completed),
        mean_volume=volume_total / completed,
        reps_completed=completed,
        n_estimator_failures=failures,
    )


def random_sign_measure(
    d: int,
    rng: np.random.Generator,
    *,
    mch: bool = False,
    max_atoms: int | None = None,
) -> SignMeasure:
    """Dirichlet-weighted random measure on the sign lattice.

    With mch=True the support is restricted to orthant labels.  With
    probability 0.3 a random proper subset of atoms is zeroed out to exercise
    sparse supports.  max_atoms subsamples the candidate atom pool first.
    """
    if d > 8:
        raise ValueError(f"random measures are generated for d <= 8, got {d}")
    pool = [s for s in itertools.product((-1, 0, 1), repeat=d) if is_orthant(s) or not mch]
    if max_atoms is not None and max_atoms < len(pool):
        if max_atoms < 2:
            raise ValueError(f"max_atoms must be >= 2, got {max_atoms}")
        idx = rng.choice(len(pool), size=max_atoms, replace=False)
        pool = [pool[i] for i in sorted(idx)]
    weights = rng.dirichlet(np.ones(len(pool)))
    if len(pool) > 1 and rng.uniform() < 0.3:
        kill = rng.choice(len(pool), size=rng.integers(1, len(pool)), replace=False)
        weights[kill] = 0.0
        weights = weights / weights.sum()
    return SignMeasure(d, {s: w for s, w in zip(pool, weights) if w > 0.0})


def random_elementary_op(m: SignMeasure, rng: np.random.Generator, *, full_mass_prob: float = 0.5):
    """Random dispersal move from a positive-mass zero pattern of m, or None.

    The target is a strict successor (some zeros replaced by signs); the
    amount is the full atom mass with probability full_mass_prob, else a
    uniform fraction of it.
    """
    from .signs import ElementaryOp

    edges = [(s, w) for s, w in m.items() if not is_orthant(s)]
    if not edges:
        return None
    source, available = edges[rng.integers(0, len(edges))]
    choices = [((-1, 0, 1) if v == 0 else (v,)) for v in source]
    successors = [t for t in itertools.product(*choices) if t != source]
    target = successors[rng.integers(0, len(successors))]
    amount = available if rng.uniform() < full_mass_prob else available * rng.uniform()
    return ElementaryOp(source=source, target=target, amount=amount)


def random_op_chain(m: SignMeasure, rng: np.random.Generator, n_ops: int):
    """Apply up to n_ops random elementary operations; returns (measure, ops)."""
    from .signs import apply_elementary

    ops = []
    current = m
    for _ in range(int(n_ops)):
        op = random_elementary_op(current, rng)
        if op is None:
            break
        current = apply_elementary(current, op)
        ops.append(op)
    return current, ops
