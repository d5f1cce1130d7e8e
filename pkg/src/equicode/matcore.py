"""Symmetric-matrix numerics on a float64 or exact-rational backend.

Float work (eigendecomposition, thresholded rank, PSD tests) runs on numpy.
Exact work (rank, PSD pivots) runs fraction-free on arbitrary-precision
integers after clearing denominators, so verdicts on rational matrices are
bit-exact rather than threshold-dependent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Optional, Sequence

import numpy as np

from .certificate import Certificate
from .errors import (
    DegenerateInput,
    DimensionMismatch,
    InvalidMatrix,
    NotRealizable,
    NotUnitDiagonal,
)

RATIONAL = "rational"
FLOAT64 = "float64"


@dataclass(frozen=True)
class Tolerance:
    """Numeric thresholds used by every float-backend verdict.

    eig_zero   relative threshold below which an eigenvalue counts as zero
    psd_slack  allowed negative dip for a PSD verdict
    angle_tol  inner-product matching tolerance
    """

    eig_zero: float = 1e-8
    psd_slack: float = 1e-9
    angle_tol: float = 1e-9

    def __post_init__(self):
        if not (self.eig_zero > 0 and self.psd_slack > 0 and self.angle_tol > 0):
            raise InvalidMatrix("all tolerances must be strictly positive")


DEFAULT_TOL = Tolerance()


class SymMatrix:
    """Dense symmetric matrix tagged with its numeric backend.

    The float64 backend stores a numpy array; the rational backend stores
    exact ``Fraction`` entries.  Entries are symmetric by construction and
    instances are immutable.
    """

    __slots__ = ("order", "backend", "_array", "_rows")

    def __init__(self, data, backend=None):
        if isinstance(data, SymMatrix):
            raise InvalidMatrix("wrap raw entries, not another SymMatrix")
        if isinstance(data, np.ndarray) and data.dtype != object:
            backend = backend or FLOAT64
        if backend is None:
            backend = RATIONAL if _all_rational(data) else FLOAT64
        if backend == FLOAT64:
            arr = np.asarray(data, dtype=float)
            if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] < 1:
                raise InvalidMatrix("expected a square matrix of order >= 1")
            if not np.all(np.isfinite(arr)):
                raise InvalidMatrix("matrix entries must be finite")
            if not np.array_equal(arr, arr.T):
                raise InvalidMatrix("matrix entries must be exactly symmetric")
            arr = arr.copy()
            arr.flags.writeable = False
            self._array = arr
            self._rows = None
            self.order = arr.shape[0]
        elif backend == RATIONAL:
            rows = tuple(tuple(Fraction(x) for x in row) for row in data)
            n = len(rows)
            if n < 1 or any(len(r) != n for r in rows):
                raise InvalidMatrix("expected a square matrix of order >= 1")
            for i in range(n):
                for j in range(i):
                    if rows[i][j] != rows[j][i]:
                        raise InvalidMatrix("matrix entries must be exactly symmetric")
            self._rows = rows
            self._array = None
            self.order = n
        else:
            raise InvalidMatrix(f"unknown backend {backend!r}")
        self.backend = backend

    # construction helpers -------------------------------------------------

    @classmethod
    def identity(cls, n, backend=FLOAT64):
        if backend == RATIONAL:
            one, zero = Fraction(1), Fraction(0)
            return cls([[one if i == j else zero for j in range(n)] for i in range(n)],
                       backend=RATIONAL)
        return cls(np.eye(n), backend=FLOAT64)

    @classmethod
    def ones(cls, n, backend=FLOAT64):
        if backend == RATIONAL:
            one = Fraction(1)
            return cls([[one] * n for _ in range(n)], backend=RATIONAL)
        return cls(np.ones((n, n)), backend=FLOAT64)

    @classmethod
    def from_array_symmetrized(cls, arr):
        """Float matrix from a nearly symmetric array, symmetrized exactly."""
        arr = np.asarray(arr, dtype=float)
        return cls((arr + arr.T) / 2.0, backend=FLOAT64)

    # accessors -------------------------------------------------------------

    def entry(self, i, j):
        if self.backend == FLOAT64:
            return float(self._array[i, j])
        return self._rows[i][j]

    def rows(self):
        """Rational rows (rational backend only)."""
        if self.backend != RATIONAL:
            raise InvalidMatrix("rows() requires the rational backend")
        return self._rows

    def as_array(self) -> np.ndarray:
        if self.backend == FLOAT64:
            return self._array
        return np.array([[float(x) for x in row] for row in self._rows])

    def to_float(self) -> "SymMatrix":
        if self.backend == FLOAT64:
            return self
        return SymMatrix(self.as_array(), backend=FLOAT64)

    def trace(self):
        if self.backend == FLOAT64:
            return float(np.trace(self._array))
        return sum((self._rows[i][i] for i in range(self.order)), Fraction(0))

    def trace_square(self):
        """trace(M^2), computed as the sum of squared entries."""
        if self.backend == FLOAT64:
            return float(np.sum(self._array * self._array))
        return sum((x * x for row in self._rows for x in row), Fraction(0))

    def __repr__(self):
        return f"SymMatrix(order={self.order}, backend={self.backend})"


def _all_rational(data) -> bool:
    for row in data:
        for x in row:
            if not isinstance(x, Rational):
                return False
    return True


@dataclass(frozen=True)
class Spectrum:
    """Full eigendecomposition, eigenvalues sorted descending."""

    eigenvalues: np.ndarray
    eigenvectors: Optional[np.ndarray]
    residual: float

    def __post_init__(self):
        d = np.diff(self.eigenvalues)
        if d.size and d.max() > 0:
            raise InvalidMatrix("eigenvalues must be sorted descending")


def sym_eigen(M: SymMatrix) -> Spectrum:
    """Eigendecomposition of a float64 symmetric matrix.

    Returns eigenvalues in descending order with matching orthonormal
    eigenvector columns and the worst per-pair residual max |Mv - lambda v|.
    """
    if M.backend != FLOAT64:
        raise InvalidMatrix("sym_eigen requires the float64 backend")
    a = M.as_array()
    vals, vecs = np.linalg.eigh(a)
    vals = vals[::-1].copy()
    vecs = vecs[:, ::-1].copy()
    residual = float(np.abs(a @ vecs - vecs * vals[np.newaxis, :]).max())
    return Spectrum(eigenvalues=vals, eigenvectors=vecs, residual=residual)


def rank_of(M: SymMatrix, tol: Tolerance = DEFAULT_TOL) -> int:
    """Rank of a symmetric matrix.

    Float backend: eigenvalues above ``eig_zero`` relative to the largest
    magnitude.  Rational backend: exact rank by fraction-free elimination.
    """
    if M.backend == RATIONAL:
        return _exact_rank(M.rows())
    vals = np.abs(sym_eigen(M).eigenvalues)
    cutoff = tol.eig_zero * max(1.0, float(vals.max(initial=0.0)))
    return int(np.count_nonzero(vals > cutoff))


def is_psd(M: SymMatrix, tol: Tolerance = DEFAULT_TOL) -> Certificate:
    """Positive-semidefiniteness certificate.

    Float backend passes iff the smallest eigenvalue clears
    ``-psd_slack * max(1, |lambda|_max)``; the rational backend runs exact
    symmetric elimination and reports the first failing pivot, if any.
    """
    if M.backend == RATIONAL:
        ok, rank, witness = _exact_psd(M.rows())
        if ok:
            return Certificate.check(
                "psd", "all leading pivots of the symmetric elimination are >= 0",
                lhs=0, rhs=0, tol=0.0, witness={"rank": rank})
        return Certificate(
            name="psd",
            statement="all leading pivots of the symmetric elimination are >= 0",
            passed=False, lhs=0, rhs=witness.get("pivot", 0),
            margin=witness.get("pivot", 0), tol=0.0, witness=witness)
    vals = sym_eigen(M).eigenvalues
    lam_min = float(vals[-1])
    lam_scale = max(1.0, float(np.abs(vals).max()))
    slack = tol.psd_slack * lam_scale
    return Certificate.check(
        "psd", "smallest eigenvalue >= -psd_slack * max(1, |lambda|_max)",
        lhs=0.0, rhs=lam_min, tol=slack, witness={"lambda_min": lam_min})


def trace_rank_lower_bound(M: SymMatrix):
    """Lower bound trace(M)^2 / trace(M^2) on the rank of a symmetric M.

    Exact ``Fraction`` on the rational backend, float otherwise.
    """
    t2 = M.trace_square()
    if t2 <= 0:
        raise DegenerateInput("trace(M^2) must be positive")
    t = M.trace()
    if M.backend == RATIONAL:
        return Fraction(t * t, t2)
    return float(t * t / t2)


def quadratic_form(M: SymMatrix, v: Sequence):
    """v^T M v, exact on the rational backend when v is rational."""
    v = list(v)
    if len(v) != M.order:
        raise DimensionMismatch(
            f"vector length {len(v)} != matrix order {M.order}")
    if M.backend == RATIONAL and _all_rational([v]):
        v = [Fraction(x) for x in v]
        rows = M.rows()
        return sum((v[i] * sum((rows[i][j] * v[j] for j in range(M.order)),
                               Fraction(0)) for i in range(M.order)), Fraction(0))
    x = np.asarray(v, dtype=float)
    return float(x @ M.as_array() @ x)


def embed_from_gram(M: SymMatrix, tol: Tolerance = DEFAULT_TOL):
    """Unit vectors in R^rank(M) whose Gram matrix reproduces M.

    Requires M to be PSD with a unit diagonal.  The embedding scales the
    eigenvectors of the nonzero spectrum by sqrt(lambda); rows are then
    renormalized so every output vector is unit length.  The result is only
    canonical up to orthogonal transformation, so callers should compare
    Gram matrices, never raw vectors.
    """
    from .codes import Code

    n = M.order
    for i in range(n):
        if abs(M.entry(i, i) - 1) > tol.angle_tol:
            raise NotUnitDiagonal(f"diagonal entry {i} is {M.entry(i, i)}, not 1")
    cert = is_psd(M, tol)
    if not cert.passed:
        raise NotRealizable(f"matrix is not PSD: {cert.witness}")
    r = rank_of(M, tol)
    spec = sym_eigen(M.to_float())
    vals = np.clip(spec.eigenvalues[:r], 0.0, None)
    vecs = spec.eigenvectors[:, :r]
    X = vecs * np.sqrt(vals)[np.newaxis, :]
    norms = np.linalg.norm(X, axis=1)
    if np.any(norms < 1e-12):
        raise NotRealizable("degenerate embedding row")
    X = X / norms[:, np.newaxis]
    return Code(X)


# exact fraction-free elimination ------------------------------------------


class _Int64Overflow(Exception):
    pass


_GUARD = 2 ** 62


def _denominator_lcm(values) -> int:
    out = 1
    for x in values:
        d = x.denominator
        out = out * d // math.gcd(out, d)
    return out


def _int_rows_rowwise(rows):
    """Clear denominators independently per row (rank is row-scaling invariant)."""
    out = []
    for row in rows:
        scale = _denominator_lcm(row)
        out.append([x.numerator * (scale // x.denominator) for x in row])
    return out


def _int_rows_global(rows):
    """Clear denominators with one global factor (preserves symmetry and PSD)."""
    scale = _denominator_lcm(x for row in rows for x in row)
    return [[x.numerator * (scale // x.denominator) for x in row]
            for row in rows], scale


def _as_work_array(int_rows, exact):
    if exact:
        a = np.empty((len(int_rows), len(int_rows[0])), dtype=object)
        for i, row in enumerate(int_rows):
            a[i, :] = row
        return a
    return np.array(int_rows, dtype=np.int64)


def _guard(A):
    mx = int(np.abs(A).max(initial=0))
    if 2 * mx * mx >= _GUARD:
        raise _Int64Overflow


def _bareiss_rank(int_rows, exact=False) -> int:
    """Rank by fraction-free Gaussian elimination with row pivoting.

    int64 fast path with an overflow guard; retried with arbitrary-precision
    integers when intermediate minors grow too large.
    """
    try:
        A = _as_work_array(int_rows, exact)
        m, ncols = A.shape
        rank, row = 0, 0
        prev = 1
        for col in range(ncols):
            if row >= m:
                break
            nz = np.nonzero(A[row:, col])[0]
            if nz.size == 0:
                continue
            piv = row + int(nz[0])
            if piv != row:
                A[[row, piv], :] = A[[piv, row], :]
            pivval = int(A[row, col])
            if row + 1 < m:
                if not exact:
                    _guard(A[row:, col:])
                block = A[row + 1:, col:]
                A[row + 1:, col:] = (pivval * block
                                     - np.outer(A[row + 1:, col], A[row, col:])) // prev
            prev = pivval
            rank += 1
            row += 1
        return rank
    except (_Int64Overflow, OverflowError):
        if exact:
            raise
        return _bareiss_rank(int_rows, exact=True)


def _exact_rank(rational_rows) -> int:
    return _bareiss_rank(_int_rows_rowwise(rational_rows))


def _psd_sweep(int_rows, scale, exact=False):
    """Symmetric fraction-free elimination; pivot signs decide PSD.

    A zero diagonal pivot is admissible only when its whole remaining row is
    zero (true for every PSD matrix); otherwise a negative 2x2 principal
    minor witnesses indefiniteness.
    """
    try:
        A = _as_work_array(int_rows, exact)
        m = A.shape[0]
        prev = 1
        rank = 0
        for k in range(m):
            d = int(A[k, k])
            if d == 0:
                nz = np.nonzero(A[k, k:])[0]
                if nz.size:
                    j = k + int(nz[0])
                    return False, rank, {
                        "pivot_index": k,
                        "pivot": Fraction(0),
                        "indefinite_pair": (k, j),
                    }
                continue
            pivot = Fraction(d, prev * scale)
            if pivot < 0:
                return False, rank, {"pivot_index": k, "pivot": pivot}
            if k + 1 < m:
                if not exact:
                    _guard(A[k:, k:])
                block = A[k + 1:, k:]
                A[k + 1:, k:] = (d * block
                                 - np.outer(A[k + 1:, k], A[k, k:])) // prev
            prev = d
            rank += 1
        return True, rank, {}
    except (_Int64Overflow, OverflowError):
        if exact:
            raise
        return _psd_sweep(int_rows, scale, exact=True)


def _exact_psd(rational_rows):
    int_rows, scale = _int_rows_global(rational_rows)
    return _psd_sweep(int_rows, scale)
