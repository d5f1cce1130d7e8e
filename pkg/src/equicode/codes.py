"""Spherical code model: angle-set validation, switching, projections.

A code is an ordered set of unit vectors.  Everything here is pure and
immutable; operations return new values.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Tuple

import numpy as np

from .errors import (
    DimensionMismatch,
    InvalidIndex,
    InvalidParams,
    NotAClique,
    SingularGram,
    ZeroProjection,
)
from .matcore import DEFAULT_TOL, SymMatrix, Tolerance


class Code:
    """Ordered set of unit vectors in R^dim."""

    __slots__ = ("dim", "vectors")

    def __init__(self, vectors, tol: Tolerance = DEFAULT_TOL):
        arr = np.asarray(vectors, dtype=float)
        if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
            raise InvalidParams("a code is a non-empty list of non-empty vectors")
        if not np.all(np.isfinite(arr)):
            raise InvalidParams("code vectors must be finite")
        norms = np.linalg.norm(arr, axis=1)
        worst = float(np.abs(norms - 1.0).max())
        if worst > tol.angle_tol:
            raise InvalidParams(f"vectors must be unit length (worst deviation {worst:g})")
        arr = arr.copy()
        arr.flags.writeable = False
        self.vectors = arr
        self.dim = arr.shape[1]

    def __len__(self):
        return self.vectors.shape[0]

    def subset(self, indices) -> "Code":
        idx = _checked_indices(indices, len(self))
        return Code(self.vectors[idx])

    def __repr__(self):
        return f"Code(size={len(self)}, dim={self.dim})"


def _checked_indices(indices, size):
    idx = [int(i) for i in indices]
    for i in idx:
        if i < 0 or i >= size:
            raise InvalidIndex(f"index {i} out of range for code of size {size}")
    return idx


@dataclass(frozen=True)
class AngleSet:
    """Allowed inner products: closed intervals plus finite points.

    A value matches a point within ``tol`` and matches an interval inflated
    by ``tol`` at both ends.  Class ids enumerate intervals first (declared
    order), then points in ascending order.
    """

    intervals: Tuple[Tuple[float, float], ...] = ()
    points: Tuple[float, ...] = ()
    tol: float = DEFAULT_TOL.angle_tol

    def __post_init__(self):
        ivs = tuple((float(lo), float(hi)) for lo, hi in self.intervals)
        pts = tuple(sorted(float(p) for p in self.points))
        object.__setattr__(self, "intervals", ivs)
        object.__setattr__(self, "points", pts)
        for lo, hi in ivs:
            if not (-1.0 <= lo <= hi < 1.0):
                raise InvalidParams(f"interval [{lo}, {hi}] must lie within [-1, 1)")
        for p in pts:
            if not (-1.0 <= p < 1.0):
                raise InvalidParams(f"point {p} must lie within [-1, 1)")
        if not ivs and not pts:
            raise InvalidParams("angle set must declare at least one element")

    @property
    def class_labels(self) -> Tuple[str, ...]:
        return tuple(f"interval:{lo:g},{hi:g}" for lo, hi in self.intervals) + \
            tuple(f"point:{p:g}" for p in self.points)

    def class_count(self) -> int:
        return len(self.intervals) + len(self.points)

    def class_is_negative(self, class_id: int) -> bool:
        """True when every value of the class is negative."""
        k = len(self.intervals)
        if class_id < k:
            return self.intervals[class_id][1] < 0
        return self.points[class_id - k] < 0

    def classify(self, value: float) -> Optional[int]:
        """Class id of the first matching element, or None."""
        for cid, (lo, hi) in enumerate(self.intervals):
            if lo - self.tol <= value <= hi + self.tol:
                return cid
        k = len(self.intervals)
        for j, p in enumerate(self.points):
            if abs(value - p) <= self.tol:
                return k + j
        return None

    def classify_all(self, values: np.ndarray) -> np.ndarray:
        """Vectorized classify; -1 marks unmatched values."""
        out = np.full(values.shape, -1, dtype=int)
        k = len(self.intervals)
        for j in range(len(self.points) - 1, -1, -1):
            p = self.points[j]
            out[np.abs(values - p) <= self.tol] = k + j
        for cid in range(len(self.intervals) - 1, -1, -1):
            lo, hi = self.intervals[cid]
            out[(values >= lo - self.tol) & (values <= hi + self.tol)] = cid
        return out

    def contains(self, value: float) -> bool:
        return self.classify(value) is not None

    def distance(self, value: float) -> float:
        """Distance to the nearest declared element (0 when matched)."""
        best = np.inf
        for lo, hi in self.intervals:
            best = min(best, max(lo - value, value - hi, 0.0))
        for p in self.points:
            best = min(best, abs(value - p))
        return float(best)


@dataclass(frozen=True)
class AngleParams:
    """Projection parameters (alpha, t) with the derived epsilon and sigma.

    epsilon = 1/(t + 1/alpha) is the projected positive angle and
    sigma = 2 alpha/(1 - alpha) drives the projected negative angle.
    Stored values must reproduce exactly from alpha and t.
    """

    alpha: object
    t: int
    epsilon: object
    sigma: object

    def __post_init__(self):
        if not (0 < self.alpha < 1):
            raise InvalidParams("alpha must lie in (0, 1)")
        if int(self.t) != self.t or self.t < 1:
            raise InvalidParams("t must be a positive integer")
        eps = 1 / (self.t + 1 / self.alpha)
        sig = 2 * self.alpha / (1 - self.alpha)
        if eps != self.epsilon or sig != self.sigma:
            raise InvalidParams("epsilon/sigma do not match their defining formulas")

    @classmethod
    def from_alpha_t(cls, alpha, t: int) -> "AngleParams":
        """Derive epsilon and sigma; exact when alpha is a Fraction."""
        if not (0 < alpha < 1):
            raise InvalidParams("alpha must lie in (0, 1)")
        if int(t) != t or t < 1:
            raise InvalidParams("t must be a positive integer")
        t = int(t)
        return cls(alpha=alpha, t=t, epsilon=1 / (t + 1 / alpha),
                   sigma=2 * alpha / (1 - alpha))

    @property
    def negative_value(self):
        """The projected negative angle -sigma(1 - epsilon) + epsilon."""
        return -self.sigma * (1 - self.epsilon) + self.epsilon


@dataclass(frozen=True)
class ValidationReport:
    """Outcome of checking every pair of a code against an angle set."""

    passed: bool
    violations: Tuple[Tuple[int, int, float, float], ...]
    histogram: dict

    def __post_init__(self):
        if self.passed != (len(self.violations) == 0):
            raise InvalidParams("report passes iff there are no violations")


def gram_of(C: Code) -> SymMatrix:
    """Gram matrix of the code on the float backend."""
    return SymMatrix.from_array_symmetrized(C.vectors @ C.vectors.T)


def validate_code(C: Code, L: AngleSet) -> ValidationReport:
    """Classify every unordered pair of distinct vectors against L."""
    g = gram_of(C).as_array()
    m = len(C)
    iu = np.triu_indices(m, k=1)
    values = g[iu]
    classes = L.classify_all(values)
    labels = L.class_labels
    histogram = {}
    for cid in range(L.class_count()):
        count = int(np.count_nonzero(classes == cid))
        if count:
            histogram[labels[cid]] = count
    bad = np.nonzero(classes < 0)[0]
    violations = tuple(
        (int(iu[0][k]), int(iu[1][k]), float(values[k]), L.distance(float(values[k])))
        for k in bad)
    return ValidationReport(passed=len(violations) == 0,
                            violations=violations, histogram=histogram)


def detect_equiangular(C: Code, tol: Tolerance = DEFAULT_TOL) -> Optional[float]:
    """Common angle magnitude alpha when all pairs are +/- alpha, else None."""
    if len(C) < 2:
        raise InvalidParams("equiangularity needs at least two vectors")
    g = gram_of(C).as_array()
    mags = np.abs(g[np.triu_indices(len(C), k=1)])
    lo, hi = float(mags.min()), float(mags.max())
    if hi - lo > 2 * tol.angle_tol:
        return None
    return (hi + lo) / 2.0


def switch_vertices(C: Code, S) -> Code:
    """Negate the vectors at the given indices (line set is unchanged)."""
    idx = _checked_indices(S, len(C))
    v = C.vectors.copy()
    if idx:
        v[idx] *= -1.0
    return Code(v)


def predicted_projection_angle(gamma, t, p):
    """Inner product of two unit vectors after projecting off a gamma-clique.

    Both vectors meet every clique vector at angle gamma; t is the clique
    size and p their inner product before projection.  Exact for Fraction
    inputs.
    """
    if not (-1 < gamma < 1):
        raise InvalidParams("gamma must lie in (-1, 1)")
    if int(t) != t or t < 1:
        raise InvalidParams("t must be a positive integer")
    if gamma < 0 and t != 1:
        raise InvalidParams("a negative-angle clique must have size 1")
    if not (-1 <= p <= 1):
        raise InvalidParams("p must lie in [-1, 1]")
    return (p - gamma) / (1 - gamma) + \
        gamma * (1 - p) / ((1 + gamma * t) * (1 - gamma))


def angle_set_after_projection(params: AngleParams,
                               tol: float = DEFAULT_TOL.angle_tol) -> AngleSet:
    """The two-point angle set left after projecting off a positive t-clique.

    When the negative value falls below -1 (sigma > 1 with t large) no pair
    of unit vectors can attain it, so only the positive point remains.
    """
    negative = float(params.negative_value)
    points = (negative, float(params.epsilon)) if negative >= -1.0 \
        else (float(params.epsilon),)
    return AngleSet(points=points, tol=tol)


def clique_angle(Y: Code, tol: Tolerance = DEFAULT_TOL) -> float:
    """Common pairwise inner product of Y; NotAClique when values spread.

    Uses the mean of the observed values, so exact cliques become float
    cliques within angle_tol here.  A singleton Y has no pairs and returns
    the sentinel 1.0, meaning no constraint.
    """
    if len(Y) == 1:
        return 1.0
    g = gram_of(Y).as_array()
    vals = g[np.triu_indices(len(Y), k=1)]
    gamma = float(vals.mean())
    if float(np.abs(vals - gamma).max()) >= tol.angle_tol:
        raise NotAClique("pairwise inner products are not a single value")
    return gamma


def project_onto_complement(X: Code, Y: Code,
                            tol: Tolerance = DEFAULT_TOL) -> Code:
    """Normalized projection of X onto the orthogonal complement of span(Y)."""
    if X.dim != Y.dim:
        raise DimensionMismatch("X and Y must share an ambient dimension")
    gamma = clique_angle(Y, tol)
    if len(Y) > 1:
        if gamma >= 1 - tol.angle_tol:
            raise NotAClique("clique contains duplicate vectors")
        if gamma < 0:
            raise NotAClique("a negative-angle clique must have size 1")
        if gamma <= -1:
            raise NotAClique("clique angle must exceed -1")
    u, s, _ = np.linalg.svd(Y.vectors.T, full_matrices=False)
    basis = u[:, s > s.max() * 1e-12]
    proj = X.vectors - (X.vectors @ basis) @ basis.T
    norms = np.linalg.norm(proj, axis=1)
    if np.any(norms < 1e-10):
        raise ZeroProjection("a vector lies in the span of the clique")
    return Code(proj / norms[:, np.newaxis])


def span_inner_product(s1: Sequence, s2: Sequence, gamma, t: int):
    """Inner product of two vectors of span(Y) from their profiles against Y.

    Y is a gamma-clique of size t and s_i lists the inner products of v_i
    with the clique vectors.  Exact for rational inputs.
    """
    s1 = list(s1)
    s2 = list(s2)
    if len(s1) != t or len(s2) != t:
        raise DimensionMismatch("profiles must have length t")
    if not (-1 <= gamma < 1):
        raise InvalidParams("gamma must lie in [-1, 1)")
    denom = 1 + gamma * (t - 1)
    if denom == 0:
        raise SingularGram("clique Gram matrix is singular at t = 1 - 1/gamma")
    dot = sum(a * b for a, b in zip(s1, s2))
    return (dot - (gamma / denom) * (sum(s1) * sum(s2))) / (1 - gamma)


def detect_projection_params(C: Code, tol: Tolerance = DEFAULT_TOL) -> AngleParams:
    """Recover (alpha, t) from a code whose angles are the projected pair.

    The positive observed value is epsilon and the negative one is
    -sigma(1-epsilon)+epsilon; both determine alpha and t uniquely.  Raises
    NotAnLCode when the observed angles do not have that shape.
    """
    from .errors import NotAnLCode

    aset = angle_set_of(C, tol)
    if len(aset.points) != 2:
        raise NotAnLCode("expected exactly two distinct inner-product values")
    nu, eps = aset.points
    if eps <= 0 or nu >= 0:
        raise NotAnLCode("expected one positive and one negative value")
    sigma = (eps - nu) / (1 - eps)
    alpha = sigma / (2 + sigma)
    t = round(1 / eps - 1 / alpha)
    if t < 1 or not (0 < alpha < 1):
        raise NotAnLCode("observed values are not a projected angle pair")
    params = AngleParams.from_alpha_t(alpha, int(t))
    if abs(params.epsilon - eps) > tol.angle_tol or \
            abs(params.negative_value - nu) > tol.angle_tol:
        raise NotAnLCode("observed values are not a projected angle pair")
    return params


def angle_set_of(C: Code, tol: Tolerance = DEFAULT_TOL) -> AngleSet:
    """Point angle set observed in the code's Gram matrix.

    Off-diagonal values are clustered to within angle_tol; each cluster
    contributes its midpoint as a point.
    """
    g = gram_of(C).as_array()
    m = len(C)
    if m < 2:
        raise InvalidParams("need at least two vectors to observe angles")
    vals = np.sort(g[np.triu_indices(m, k=1)])
    points = []
    start = 0
    for k in range(1, len(vals) + 1):
        if k == len(vals) or vals[k] - vals[k - 1] > 2 * tol.angle_tol:
            points.append(float((vals[start] + vals[k - 1]) / 2.0))
            start = k
    points = [min(p, 1.0 - 2 * tol.angle_tol) for p in points]
    return AngleSet(points=tuple(points), tol=tol.angle_tol)
