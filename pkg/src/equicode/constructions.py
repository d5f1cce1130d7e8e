"""Explicit code constructions, deterministic and randomized.

Deterministic constructions are built Gram-first in exact rational
arithmetic, certified PSD with the expected rank, and only then embedded
into floats, so rank claims never rest on float thresholds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Optional, Tuple

import numpy as np

from .codes import Code
from .errors import InternalError, InvalidParams, RandomizedFailure, TooLarge
from .matcore import DEFAULT_TOL, SymMatrix, embed_from_gram, is_psd

SIZE_CAP = 10 ** 5


class RngStream:
    """Seedable random stream with a portable, documented construction.

    Uniform doubles come from numpy's PCG64 keyed by ``SeedSequence(seed,
    spawn_key)``; Gaussians are produced from them by an explicit
    Box-Muller transform.  Identical seeds therefore reproduce identical
    scalar sequences on every platform.
    """

    algorithm = "pcg64+box-muller"

    def __init__(self, seed: int, spawn_key: Tuple[int, ...] = ()):
        self.seed = int(seed)
        self.spawn_key = tuple(int(i) for i in spawn_key)
        ss = np.random.SeedSequence(entropy=self.seed, spawn_key=self.spawn_key)
        self._gen = np.random.Generator(np.random.PCG64(ss))

    def derive(self, index: int) -> "RngStream":
        """Independent child stream; used to give each code copy its own RNG."""
        return RngStream(self.seed, self.spawn_key + (int(index),))

    def uniforms(self, count: int) -> np.ndarray:
        return self._gen.random(int(count))

    def gaussians(self, count: int) -> np.ndarray:
        count = int(count)
        half = (count + 1) // 2
        u1 = self.uniforms(half)
        u2 = self.uniforms(half)
        radius = np.sqrt(-2.0 * np.log1p(-u1))
        angle = 2.0 * np.pi * u2
        z = np.concatenate([radius * np.cos(angle), radius * np.sin(angle)])
        return z[:count]

    def rotation(self, dim: int) -> np.ndarray:
        """Haar-ish random orthogonal matrix via QR of a Gaussian square."""
        a = self.gaussians(dim * dim).reshape(dim, dim)
        q, r = np.linalg.qr(a)
        return q * np.where(np.diag(r) < 0, -1.0, 1.0)


def random_unit_vectors(count: int, dim: int, rng: RngStream) -> Code:
    """i.i.d. uniform points on the unit sphere of R^dim."""
    if count < 1 or dim < 1:
        raise InvalidParams("count and dim must be positive")
    g = rng.gaussians(count * dim).reshape(count, dim)
    norms = np.linalg.norm(g, axis=1)
    if np.any(norms < 1e-12):
        raise InternalError("degenerate Gaussian sample")
    return Code(g / norms[:, np.newaxis])


# rational Gram builders ------------------------------------------------


def lemmens_seidel_gram(n: int) -> SymMatrix:
    """Order 2n-2 Gram: n-1 diagonal blocks [[1,-1/3],[-1/3,1]], 1/3 elsewhere."""
    if n < 3:
        raise InvalidParams("need n >= 3")
    one = Fraction(1)
    pos = Fraction(1, 3)
    neg = Fraction(-1, 3)
    m = 2 * n - 2
    rows = [[pos] * m for _ in range(m)]
    for i in range(m):
        rows[i][i] = one
    for b in range(n - 1):
        rows[2 * b][2 * b + 1] = neg
        rows[2 * b + 1][2 * b] = neg
    return SymMatrix(rows, backend="rational")


def odd_reciprocal_gram(n: int, r: int) -> SymMatrix:
    """Blocks of size r with -1/(2r-1) inside, +1/(2r-1) across blocks."""
    if r < 2:
        raise InvalidParams("need r >= 2")
    if n < r:
        raise InvalidParams("need n >= r")
    alpha = Fraction(1, 2 * r - 1)
    blocks = (n - 1) // (r - 1)
    m = r * blocks
    one = Fraction(1)
    neg = -alpha
    rows = [[alpha] * m for _ in range(m)]
    for i in range(m):
        rows[i][i] = one
    for b in range(blocks):
        for i in range(b * r, (b + 1) * r):
            for j in range(b * r, (b + 1) * r):
                if i != j:
                    rows[i][j] = neg
    return SymMatrix(rows, backend="rational")


def simplex_gram(r: int) -> SymMatrix:
    """Order r+1 Gram of the regular r-simplex: -1/r off the diagonal."""
    if r < 1:
        raise InvalidParams("need r >= 1")
    off = Fraction(-1, r)
    one = Fraction(1)
    rows = [[one if i == j else off for j in range(r + 1)] for i in range(r + 1)]
    return SymMatrix(rows, backend="rational")


def _certified_embed(gram: SymMatrix, expected_rank: Optional[int] = None,
                     max_rank: Optional[int] = None) -> Code:
    """Exact PSD/rank certification of a rational Gram, then float embedding."""
    cert = is_psd(gram)
    if not cert.passed:
        raise InternalError(f"construction Gram is not PSD: {cert.witness}")
    rank = cert.witness["rank"]
    if expected_rank is not None and rank != expected_rank:
        raise InternalError(f"construction Gram rank {rank} != expected {expected_rank}")
    if max_rank is not None and rank > max_rank:
        raise InternalError(f"construction Gram rank {rank} exceeds {max_rank}")
    code = embed_from_gram(gram.to_float())
    if code.dim != rank:
        raise InternalError("float embedding dimension disagrees with exact rank")
    return code


def _pad_to_dim(code: Code, dim: int) -> Code:
    if code.dim > dim:
        raise InternalError(f"embedding needs {code.dim} > {dim} dimensions")
    if code.dim == dim:
        return code
    pad = np.zeros((len(code), dim - code.dim))
    return Code(np.hstack([code.vectors, pad]))


# deterministic constructions -------------------------------------------


def lemmens_seidel_code(n: int) -> Code:
    """2n-2 unit vectors in R^n with all pairwise inner products +/- 1/3."""
    return _certified_embed(lemmens_seidel_gram(n), expected_rank=n)


def odd_reciprocal_code(n: int, r: int) -> Code:
    """r * floor((n-1)/(r-1)) unit vectors in R^n at angle 1/(2r-1).

    The Gram rank is 1 + blocks*(r-1) <= n, certified exactly per instance.
    """
    gram = odd_reciprocal_gram(n, r)
    blocks = (n - 1) // (r - 1)
    code = _certified_embed(gram, expected_rank=1 + blocks * (r - 1), max_rank=n)
    return _pad_to_dim(code, n)


def regular_simplex(r: int) -> Code:
    """r+1 unit vectors in R^r with all pairwise inner products -1/r."""
    return _certified_embed(simplex_gram(r), expected_rank=r)


def seven_dim_28_lines() -> Code:
    """All 28 placements of the two -3 entries in (1,...,1,-3,-3)/sqrt(24).

    The coordinates of every vector sum to zero, so the 28 vectors span a
    7-dimensional subspace of R^8.  Enumeration is lexicographic over the
    two -3 positions.
    """
    rows = []
    for i, j in combinations(range(8), 2):
        v = np.ones(8)
        v[i] = -3.0
        v[j] = -3.0
        rows.append(v / math.sqrt(24.0))
    return Code(np.array(rows))


def lines28_gram() -> SymMatrix:
    """Exact rational Gram of the 28-line code (entries +/- 1/3)."""
    supports = list(combinations(range(8), 2))
    vecs = []
    for i, j in supports:
        v = [1] * 8
        v[i] = -3
        v[j] = -3
        vecs.append(v)
    rows = [[Fraction(sum(a * b for a, b in zip(u, w)), 24) for w in vecs]
            for u in vecs]
    return SymMatrix(rows, backend="rational")


def binary_kcode(n: int, k: int) -> Code:
    """All k-subset indicator vectors of R^n scaled by 1/sqrt(k).

    Inner products land on {0, 1/k, ..., (k-1)/k}.  Capped at C(n,k) <= 1e5.
    """
    if k < 1 or n < k:
        raise InvalidParams("need 1 <= k <= n")
    size = math.comb(n, k)
    if size > SIZE_CAP:
        raise TooLarge(f"C({n},{k}) = {size} exceeds the cap {SIZE_CAP}")
    rows = np.zeros((size, n))
    for idx, support in enumerate(combinations(range(n), k)):
        rows[idx, support] = 1.0
    return Code(rows / math.sqrt(k))


# randomized concatenated construction ----------------------------------


@dataclass(frozen=True)
class ConcatParams:
    """Parameters of the simplex-of-rotated-copies construction.

    lam = sqrt(1/alpha1 - 1) sets the concatenation scaling; alphas lists
    the within-copy inner products (alpha1 is reproduced at i = 1);
    beta_target is the cross-copy separation the randomized rotations must
    achieve.  lam_sq is carried explicitly so every formula uses the exact
    same float.
    """

    n: int
    k: int
    r: int
    alpha1: float
    lam: float
    lam_sq: float
    t_threshold: float
    beta_target: float
    alphas: Tuple[float, ...]
    seed: int

    def __post_init__(self):
        if not (0 < self.alpha1 < 1):
            raise InvalidParams("alpha1 must lie in (0, 1)")
        if self.k < 1 or self.n < self.k or self.r < 1:
            raise InvalidParams("need 1 <= k <= n and r >= 1")
        if self.r * self.r > self.n:
            raise InvalidParams("need r <= sqrt(n)")
        lam_sq = 1.0 / self.alpha1 - 1.0
        if self.lam_sq != lam_sq or self.lam != math.sqrt(lam_sq):
            raise InvalidParams("lam does not match sqrt(1/alpha1 - 1)")
        if self.t_threshold != _log_threshold(self.n, self.k):
            raise InvalidParams("t_threshold does not match its formula")
        if self.beta_target != (1.0 / self.r - lam_sq * self.t_threshold) / (lam_sq + 1.0):
            raise InvalidParams("beta_target does not match its formula")
        if self.alphas != _alpha_ladder(lam_sq, self.k):
            raise InvalidParams("alphas do not match their formula")
        if any(b <= a for a, b in zip(self.alphas, self.alphas[1:])):
            raise InvalidParams("alphas must be strictly increasing")
        if abs(self.alphas[0] - self.alpha1) > 1e-12:
            raise InvalidParams("alpha ladder does not reproduce alpha1")

    @classmethod
    def from_inputs(cls, n: int, k: int, r: int, alpha1: float,
                    seed: int) -> "ConcatParams":
        if not (0 < alpha1 < 1):
            raise InvalidParams("alpha1 must lie in (0, 1)")
        lam_sq = 1.0 / alpha1 - 1.0
        return cls(n=n, k=k, r=r, alpha1=float(alpha1),
                   lam=math.sqrt(lam_sq), lam_sq=lam_sq,
                   t_threshold=_log_threshold(n, k),
                   beta_target=(1.0 / r - lam_sq * _log_threshold(n, k)) / (lam_sq + 1.0),
                   alphas=_alpha_ladder(lam_sq, k), seed=int(seed))


def _log_threshold(n: int, k: int) -> float:
    return math.sqrt((4.0 * math.log(math.comb(n, k)) + 2.0 * math.log(n)) / n)


def _alpha_ladder(lam_sq: float, k: int) -> Tuple[float, ...]:
    return tuple((lam_sq * (i - 1) / k + 1.0) / (lam_sq + 1.0)
                 for i in range(1, k + 1))


@dataclass(frozen=True)
class ConcatReport:
    """What the randomized construction actually achieved."""

    success: bool
    attempts: int
    master_seed: int
    attempt_seed: int
    copy_seeds: Tuple[Tuple[int, ...], ...]
    achieved_beta: float
    beta_target: float
    max_cross_inner: float
    max_within_deviation: float


def concatenated_code(params: ConcatParams,
                      max_attempts: int = 32) -> Tuple[Code, float, ConcatReport]:
    """Simplex-anchored concatenation of randomly rotated k-subset codes.

    Each simplex vector v carries a rotated copy C_v of the k-subset code;
    the output vectors are (lam*u, v)/sqrt(lam^2+1).  Within one copy the
    inner products land on the alpha ladder exactly; cross-copy products
    must all stay below -beta_target, which the rotations achieve with high
    probability.  On failure the construction retries seeds seed+1, seed+2,
    ... up to max_attempts before raising RandomizedFailure.
    """
    size = math.comb(params.n, params.k)
    if size > SIZE_CAP:
        raise TooLarge(f"C({params.n},{params.k}) = {size} exceeds the cap {SIZE_CAP}")
    base = binary_kcode(params.n, params.k).vectors
    simplex = regular_simplex(params.r).vectors
    scale = 1.0 / math.sqrt(params.lam_sq + 1.0)
    worst_cross = None
    for attempt in range(max_attempts):
        attempt_seed = params.seed + attempt
        master = RngStream(attempt_seed)
        copies = []
        copy_seeds = []
        for c in range(params.r + 1):
            stream = master.derive(c)
            copy_seeds.append((stream.seed,) + stream.spawn_key)
            copies.append(base @ stream.rotation(params.n).T)
        blocks = [np.hstack([params.lam * u,
                             np.repeat(v[np.newaxis, :], len(u), axis=0)]) * scale
                  for u, v in zip(copies, simplex)]
        vectors = np.vstack(blocks)
        max_cross = -1.0
        for a in range(len(blocks)):
            for b in range(a + 1, len(blocks)):
                max_cross = max(max_cross, _blockwise_max(blocks[a], blocks[b]))
        achieved_beta = -max_cross
        worst_cross = max_cross if worst_cross is None else max(worst_cross, max_cross)
        if achieved_beta >= params.beta_target:
            deviation = max(_within_deviation(blk, params.alphas) for blk in blocks)
            if deviation > DEFAULT_TOL.angle_tol:
                raise InternalError(
                    f"within-copy inner products deviate by {deviation:g}")
            report = ConcatReport(
                success=True, attempts=attempt + 1, master_seed=params.seed,
                attempt_seed=attempt_seed, copy_seeds=tuple(copy_seeds),
                achieved_beta=achieved_beta, beta_target=params.beta_target,
                max_cross_inner=max_cross, max_within_deviation=deviation)
            return Code(vectors), achieved_beta, report
    observed = "none observed" if worst_cross is None else format(worst_cross, "g")
    raise RandomizedFailure(
        f"no seed in [{params.seed}, {params.seed + max_attempts}) reached "
        f"beta_target {params.beta_target:g}; worst cross inner product "
        f"{observed}", worst_cross=worst_cross)


def _blockwise_max(a: np.ndarray, b: np.ndarray, chunk: int = 2048) -> float:
    out = -np.inf
    for start in range(0, a.shape[0], chunk):
        out = max(out, float((a[start:start + chunk] @ b.T).max()))
    return out


def _within_deviation(block: np.ndarray, alphas: Tuple[float, ...],
                      chunk: int = 2048) -> float:
    worst = 0.0
    for start in range(0, block.shape[0], chunk):
        g = block[start:start + chunk] @ block.T
        stop = min(start + chunk, block.shape[0])
        g[np.arange(stop - start), np.arange(start, stop)] = alphas[0]
        dev = np.full(g.shape, np.inf)
        for a in alphas:
            np.minimum(dev, np.abs(g - a), out=dev)
        worst = max(worst, float(dev.max()))
    return worst
