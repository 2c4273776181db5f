"""Sign-vector lattice and sparse probability measures on it.

Whether an axis-aligned hull of estimates covers a target depends on the
estimates only through the coordinate signs of estimate minus target.  This
module provides that sign algebra: the lattice {-1, 0, +1}^d, the partial
order under which mass sitting on an axis pattern may be attributed to a
compatible orthant pattern, sparse probability measures on the lattice, and
the elementary mass-moving operation together with its one-draw coupling.

A sign vector with no zero coordinate is called an orthant label; the
remaining patterns (at least one exact zero) are called edge labels.  A
measure with no mass on edge labels is called an MCH measure (all mass in
closed-hull general position).
"""

from __future__ import annotations

import csv
import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping

import numpy as np

from ._validation import as_vector, check_closed_unit

MAX_DIMENSION = 16
MASS_TOL = 1e-12

SignVector = tuple[int, ...]


class InfeasibleOperationError(ValueError):
    """An elementary operation asked for more mass than its source atom holds."""


def _check_dimension(d) -> int:
    if not isinstance(d, (int, np.integer)):
        raise ValueError(f"dimension must be an integer, got {d!r}")
    d = int(d)
    if not 1 <= d <= MAX_DIMENSION:
        raise ValueError(f"dimension must be in [1, {MAX_DIMENSION}], got {d}")
    return d


def validate_sign_vector(sv, d: int | None = None) -> SignVector:
    """Coerce to a tuple of entries in {-1, 0, +1}, optionally of length d."""
    try:
        out = tuple(int(v) for v in sv)
    except (TypeError, ValueError) as exc:
        raise ValueError(f"sign vector entries must be integers, got {sv!r}") from exc
    if any(v not in (-1, 0, 1) for v in out):
        raise ValueError(f"sign vector entries must be -1, 0, or +1, got {sv!r}")
    if not out:
        raise ValueError("sign vector must be nonempty")
    if d is not None and len(out) != d:
        raise ValueError(f"sign vector must have length {d}, got {len(out)}")
    return out


def is_orthant(sv: SignVector) -> bool:
    """True when the sign vector has no zero coordinate."""
    return all(v != 0 for v in sv)


def orthant_labels(d: int) -> Iterator[SignVector]:
    """All 2^d orthant labels of dimension d in lexicographic order."""
    d = _check_dimension(d)
    return itertools.product((-1, 1), repeat=d)


def sign_lattice(d: int) -> Iterator[SignVector]:
    """All 3^d sign vectors of dimension d in lexicographic order."""
    d = _check_dimension(d)
    return itertools.product((-1, 0, 1), repeat=d)


def sign_of(point, zero_tol: float = 0.0) -> SignVector:
    """Coordinatewise sign of a point, with |x_j| <= zero_tol mapped to 0.

    Parameters
    ----------
    point : array-like of shape (d,)
        Finite coordinates.
    zero_tol : float, default 0.0
        Non-negative threshold below which a coordinate counts as zero.
    """
    x = as_vector(point, name="point")
    zero_tol = float(zero_tol)
    if not np.isfinite(zero_tol) or zero_tol < 0:
        raise ValueError(f"zero_tol must be finite and non-negative, got {zero_tol}")
    out = np.zeros(x.size, dtype=int)
    out[x > zero_tol] = 1
    out[x < -zero_tol] = -1
    return tuple(int(v) for v in out)


def sign_precedes(a: SignVector, b: SignVector) -> bool:
    """Partial order: a precedes b iff b agrees with a on every nonzero coordinate of a.

    Reflexive, antisymmetric, and transitive; mass may be dispersed from a
    pattern only to patterns it precedes.
    """
    a = validate_sign_vector(a)
    b = validate_sign_vector(b, len(a))
    return all(ai == 0 or ai == bi for ai, bi in zip(a, b))


def compatible_orthants(sv: SignVector) -> Iterator[SignVector]:
    """All orthant labels that the sign vector precedes."""
    sv = validate_sign_vector(sv)
    choices = [((-1, 1) if v == 0 else (v,)) for v in sv]
    return itertools.product(*choices)


class SignMeasure:
    """Sparse probability measure on the sign lattice {-1, 0, +1}^d.

    Parameters
    ----------
    d : int
        Dimension, between 1 and 16.
    mass : mapping from sign vector to float
        Atom masses.  Entries must be non-negative (values above -1e-12 are
        clamped to zero) and must sum to 1 within 1e-12.  Zero atoms are
        dropped, so the support contains only strictly positive atoms.
    """

    __slots__ = ("d", "_mass")

    def __init__(self, d: int, mass: Mapping[SignVector, float]):
        self.d = _check_dimension(d)
        cleaned: dict[SignVector, float] = {}
        for raw_key, raw_val in mass.items():
            key = validate_sign_vector(raw_key, self.d)
            val = float(raw_val)
            if not np.isfinite(val):
                raise ValueError(f"mass at {key} is not finite: {raw_val}")
            if val < -MASS_TOL:
                raise ValueError(f"mass at {key} is negative: {raw_val}")
            if key in cleaned:
                raise ValueError(f"duplicate atom {key}")
            if val > 0.0:
                cleaned[key] = val
        total = math.fsum(cleaned.values())
        if abs(total - 1.0) > MASS_TOL:
            raise ValueError(f"masses must sum to 1 within {MASS_TOL}, got {total!r}")
        self._mass = dict(sorted(cleaned.items()))

    def mass(self, sv) -> float:
        """Mass of a single atom (0.0 off the support)."""
        return self._mass.get(validate_sign_vector(sv, self.d), 0.0)

    def items(self) -> Iterator[tuple[SignVector, float]]:
        return iter(self._mass.items())

    @property
    def support(self) -> tuple[SignVector, ...]:
        return tuple(self._mass)

    def edge_mass(self) -> float:
        """Total mass on sign vectors with at least one zero coordinate."""
        return math.fsum(v for k, v in self._mass.items() if not is_orthant(k))

    def orthant_mass_min(self) -> float:
        """Smallest mass over all 2^d orthant labels (zero if any is missing)."""
        orthant_atoms = [v for k, v in self._mass.items() if is_orthant(k)]
        if len(orthant_atoms) < (1 << self.d):
            return 0.0
        return min(orthant_atoms)

    def allclose(self, other: "SignMeasure", tol: float = MASS_TOL) -> bool:
        if not isinstance(other, SignMeasure) or other.d != self.d:
            return False
        keys = set(self._mass) | set(other._mass)
        return all(abs(self._mass.get(k, 0.0) - other._mass.get(k, 0.0)) <= tol for k in keys)

    def __repr__(self) -> str:
        atoms = ", ".join(f"{k}: {v:.6g}" for k, v in self._mass.items())
        return f"SignMeasure(d={self.d}, {{{atoms}}})"

    def to_csv(self, path) -> None:
        """Write atoms as CSV with header sign_1,...,sign_d,mass (sorted rows)."""
        with open(path, "w", newline="\n", encoding="utf-8") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow([f"sign_{j + 1}" for j in range(self.d)] + ["mass"])
            for key, val in self._mass.items():
                writer.writerow([str(v) for v in key] + [repr(val)])

    @classmethod
    def from_csv(cls, path) -> "SignMeasure":
        """Read a measure written by :meth:`to_csv`; validates header and masses."""
        with open(path, "r", newline="", encoding="utf-8") as fh:
            reader = csv.reader(fh)
            try:
                header = next(reader)
            except StopIteration:
                raise ValueError(f"{path}: empty file") from None
            d = len(header) - 1
            expected = [f"sign_{j + 1}" for j in range(d)] + ["mass"]
            if d < 1 or header != expected:
                raise ValueError(f"{path}: header must be sign_1,...,sign_d,mass, got {header}")
            mass: dict[SignVector, float] = {}
            for lineno, row in enumerate(reader, start=2):
                if not row:
                    continue
                if len(row) != d + 1:
                    raise ValueError(f"{path}: line {lineno}: expected {d + 1} fields, got {len(row)}")
                try:
                    key = validate_sign_vector([int(v) for v in row[:d]], d)
                    val = float(row[d])
                except ValueError as exc:
                    raise ValueError(f"{path}: line {lineno}: {exc}") from None
                if key in mass:
                    raise ValueError(f"{path}: line {lineno}: duplicate atom {key}")
                mass[key] = val
        return cls(d, mass)


def empirical_sign_measure(points, center, zero_tol: float = 0.0) -> SignMeasure:
    """Empirical sign measure of points - center.

    Each observation contributes mass 1/n to the sign pattern of its
    coordinatewise difference from ``center``.  Coordinates within
    ``zero_tol`` of the center count as exact zeros; the default 0.0 treats
    only exact ties as zeros.
    """
    pts = np.asarray(points, dtype=float)
    if pts.ndim == 1:
        pts = pts.reshape(-1, 1)
    if pts.ndim != 2 or pts.shape[0] == 0:
        raise ValueError("points must be a nonempty n x d matrix")
    if not np.all(np.isfinite(pts)):
        raise ValueError("points contains non-finite values")
    c = as_vector(center, pts.shape[1], name="center")
    zero_tol = float(zero_tol)
    if not np.isfinite(zero_tol) or zero_tol < 0:
        raise ValueError(f"zero_tol must be finite and non-negative, got {zero_tol}")
    diff = pts - c
    signs = np.zeros(diff.shape, dtype=int)
    signs[diff > zero_tol] = 1
    signs[diff < -zero_tol] = -1
    atoms, counts = np.unique(signs, axis=0, return_counts=True)
    n = pts.shape[0]
    mass = {tuple(int(v) for v in row): cnt / n for row, cnt in zip(atoms, counts)}
    return SignMeasure(pts.shape[1], mass)


def is_mch(m: SignMeasure, tol: float = MASS_TOL) -> bool:
    """True when total mass on edge labels (patterns with a zero) is at most tol."""
    if not isinstance(m, SignMeasure):
        raise ValueError("m must be a SignMeasure")
    tol = float(tol)
    if not np.isfinite(tol) or tol < 0:
        raise ValueError(f"tol must be finite and non-negative, got {tol}")
    return m.edge_mass() <= tol


@dataclass(frozen=True)
class ElementaryOp:
    """Move ``amount`` of mass from an edge label to a pattern it precedes.

    The source must have at least one zero coordinate and must precede the
    target in the dispersal order.  The amount must be finite and >= 0.
    """

    source: SignVector
    target: SignVector
    amount: float

    def __post_init__(self):
        src = validate_sign_vector(self.source)
        tgt = validate_sign_vector(self.target, len(src))
        object.__setattr__(self, "source", src)
        object.__setattr__(self, "target", tgt)
        object.__setattr__(self, "amount", float(self.amount))
        if is_orthant(src):
            raise ValueError(f"source must have a zero coordinate, got {src}")
        if not sign_precedes(src, tgt):
            raise ValueError(f"source {src} does not precede target {tgt}")
        if not np.isfinite(self.amount) or self.amount < 0:
            raise ValueError(f"amount must be finite and non-negative, got {self.amount}")


def apply_elementary(m: SignMeasure, op: ElementaryOp) -> SignMeasure:
    """Apply an elementary operation, returning a new measure.

    Deficits of the source atom below 1e-12 are treated as rounding and the
    atom is emptied; larger deficits raise InfeasibleOperationError.
    """
    if not isinstance(m, SignMeasure):
        raise ValueError("m must be a SignMeasure")
    if len(op.source) != m.d:
        raise ValueError(f"operation dimension {len(op.source)} does not match measure dimension {m.d}")
    available = m.mass(op.source)
    if available < op.amount - MASS_TOL:
        raise InfeasibleOperationError(
            f"source {op.source} holds {available!r} but operation moves {op.amount!r}"
        )
    moved = min(op.amount, available)
    mass = dict(m.items())
    mass[op.source] = available - moved
    mass[op.target] = mass.get(op.target, 0.0) + moved
    return SignMeasure(m.d, mass)


def couple_sample(m: SignMeasure, s, op: ElementaryOp, uniform_draw: float) -> SignVector:
    """One-draw coupling of a sample from m with a sample from apply_elementary(m, op).

    Given s distributed per m and an independent uniform draw, the returned
    vector is distributed per the post-operation measure, and differs from s
    only when s equals the operation's source.  In that case the draw is
    compared against (mass(source) - amount) / mass(source): strictly below
    keeps the source, at or above moves to the target.
    """
    if not isinstance(m, SignMeasure):
        raise ValueError("m must be a SignMeasure")
    s = validate_sign_vector(s, m.d)
    if len(op.source) != m.d:
        raise ValueError(f"operation dimension {len(op.source)} does not match measure dimension {m.d}")
    u = check_closed_unit(uniform_draw, "uniform_draw")
    if s != op.source:
        return s
    available = m.mass(op.source)
    if available < op.amount - MASS_TOL:
        raise InfeasibleOperationError(
            f"source {op.source} holds {available!r} but operation moves {op.amount!r}"
        )
    if available <= 0.0:
        # s = source is then a probability-zero event; keep the coupling total.
        return op.target
    threshold = max(0.0, available - op.amount) / available
    return op.source if u < threshold else op.target


def mch_order_conjectured(mu: SignMeasure, nu: SignMeasure, tol: float = MASS_TOL) -> bool:
    """Conjectured pairwise test for reachability by chains of elementary operations.

    Checks mu(eta) <= nu(gamma) + tol for every support atom eta of mu and
    every orthant label gamma that eta precedes (including gamma = eta when
    eta is itself an orthant label).  This is a necessary-looking pairwise
    condition only: the operational ground truth is an explicit chain of
    elementary operations, and the two are not known to coincide.  Property
    tests log chain-reachable pairs that this predicate rejects rather than
    treating them as failures.
    """
    if not isinstance(mu, SignMeasure) or not isinstance(nu, SignMeasure):
        raise ValueError("mu and nu must be SignMeasures")
    if mu.d != nu.d:
        raise ValueError(f"dimension mismatch: {mu.d} vs {nu.d}")
    tol = float(tol)
    if not np.isfinite(tol) or tol < 0:
        raise ValueError(f"tol must be finite and non-negative, got {tol}")
    for eta, m_eta in mu.items():
        for gamma in compatible_orthants(eta):
            if m_eta > nu.mass(gamma) + tol:
                return False
    return True
