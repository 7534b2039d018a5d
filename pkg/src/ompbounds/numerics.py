"""Seeded random generation and the dense linear-algebra kernels used everywhere else.

Randomness contract: every stream is a numpy ``Generator`` driven by the
Philox 4x64 counter-based bit generator, keyed through ``SeedSequence``.
Normal variates come from numpy's ziggurat implementation of
``standard_normal``.  Identical (seed, dimensions) inputs therefore produce
identical output arrays within one build of this package.  Independent
substreams (e.g. the matrix and the signal of one Monte Carlo trial) are
derived with :func:`split_seed`, so trials can be replayed or distributed
without sharing generator state.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

_MASK64 = (1 << 64) - 1


class RankDeficiencyError(ValueError):
    """Selected columns are numerically rank deficient."""


def split_seed(seed: int, *path: int) -> int:
    """Derive a 64-bit subseed from a base seed and an integer path.

    The rule is ``SeedSequence([seed, *path])`` (entries masked to 64 bits)
    and taking one word of generated state.  Distinct paths give streams
    that are independent for all practical purposes, and the derivation is
    order-sensitive, so (experiment seed, trial index, stream index) paths
    are reproducible in isolation.
    """
    entropy = [seed & _MASK64] + [p & _MASK64 for p in path]
    return int(np.random.SeedSequence(entropy).generate_state(1, dtype=np.uint64)[0])


def rng_from_seed(seed: int) -> np.random.Generator:
    """Philox generator keyed by a 64-bit seed."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed & _MASK64)))


@dataclass(frozen=True)
class SensingMatrix:
    """Dense m-by-n measurement operator with N(0, 1/m) entries."""

    m: int
    n: int
    entries: np.ndarray = field(repr=False)
    seed: int = 0


def gaussian_matrix(m: int, n: int, seed: int) -> SensingMatrix:
    """Draw an m-by-n matrix with i.i.d. normal entries of variance 1/m."""
    if m < 1 or n < 1:
        raise ValueError(f"matrix dimensions must be positive, got {m}x{n}")
    entries = rng_from_seed(seed).standard_normal((m, n))
    entries *= 1.0 / np.sqrt(m)
    return SensingMatrix(m=m, n=n, entries=entries, seed=seed)


def as_matrix(A) -> np.ndarray:
    """Accept a SensingMatrix or a plain 2-D array and return the array."""
    arr = A.entries if isinstance(A, SensingMatrix) else np.asarray(A, dtype=float)
    if arr.ndim != 2:
        raise ValueError(f"expected a 2-D matrix, got ndim={arr.ndim}")
    return arr


@dataclass
class LeastSquaresSolution:
    """Coefficients on a column subset plus the projection residual."""

    support: list[int]
    coefficients: np.ndarray
    residual: np.ndarray
    residual_norm: float


class IncrementalQR:
    """Thin QR factorization of a growing column subset of a fixed matrix.

    Columns are appended one at a time (modified Gram-Schmidt with one
    reorthogonalization pass), so extending a factored subset costs O(m*k)
    instead of refactoring from scratch.  An appended column whose
    orthogonalized norm falls below ``rank_tol`` times the largest appended
    column norm raises :class:`RankDeficiencyError`.
    """

    def __init__(self, A, y: np.ndarray, rank_tol: float = 1e-10):
        self.A = as_matrix(A)
        self.y = np.asarray(y, dtype=float)
        m, _ = self.A.shape
        if self.y.shape != (m,):
            raise ValueError(f"y has shape {self.y.shape}, expected ({m},)")
        self.rank_tol = rank_tol
        self.support: list[int] = []
        self._Q = np.empty((m, 0))
        self._R = np.zeros((0, 0))
        self._qty = np.empty(0)
        self._r = self.y.copy()
        self._max_colnorm = 0.0

    @property
    def k(self) -> int:
        return len(self.support)

    def append(self, j: int) -> None:
        m, n = self.A.shape
        if not 0 <= j < n:
            raise ValueError(f"column index {j} out of range [0, {n})")
        if j in self.support:
            raise ValueError(f"column {j} already in the factored set")
        if self.k >= m:
            raise RankDeficiencyError("cannot factor more columns than rows")
        col = self.A[:, j]
        self._max_colnorm = max(self._max_colnorm, float(np.linalg.norm(col)))
        w = col.copy()
        h = self._Q.T @ w
        w -= self._Q @ h
        # one reorthogonalization pass keeps Q'Q orthonormal to machine precision
        h2 = self._Q.T @ w
        w -= self._Q @ h2
        h += h2
        norm_w = float(np.linalg.norm(w))
        if norm_w <= self.rank_tol * self._max_colnorm:
            raise RankDeficiencyError(
                f"column {j} is numerically dependent on the current set "
                f"(orthogonal component {norm_w:.3e})"
            )
        k = self.k
        R = np.zeros((k + 1, k + 1))
        R[:k, :k] = self._R
        R[:k, k] = h
        R[k, k] = norm_w
        self._R = R
        q = w / norm_w
        self._Q = np.column_stack([self._Q, q])
        self._qty = np.append(self._qty, q @ self.y)
        self._r -= q * (q @ self._r)
        self.support.append(j)

    def residual(self) -> np.ndarray:
        return self._r.copy()

    def residual_norm(self) -> float:
        return float(np.linalg.norm(self._r))

    def coefficients(self) -> np.ndarray:
        if self.k == 0:
            return np.empty(0)
        from scipy.linalg import solve_triangular

        return solve_triangular(self._R, self._qty, lower=False)

    def solution(self) -> LeastSquaresSolution:
        return LeastSquaresSolution(
            support=list(self.support),
            coefficients=self.coefficients(),
            residual=self.residual(),
            residual_norm=self.residual_norm(),
        )


def least_squares(A, y: np.ndarray, S) -> LeastSquaresSolution:
    """Minimize ||y - A_S c||_2 over coefficients c on the column subset S.

    The empty subset returns empty coefficients and residual equal to y.
    Raises :class:`RankDeficiencyError` when the selected columns are
    numerically dependent.
    """
    arr = as_matrix(A)
    m, _ = arr.shape
    S = list(S)
    if len(set(S)) != len(S):
        raise ValueError("support contains duplicate indices")
    if len(S) > m:
        raise ValueError(f"support size {len(S)} exceeds row count {m}")
    qr = IncrementalQR(arr, y)
    for j in S:
        qr.append(j)
    return qr.solution()


def min_singular_value(B) -> float:
    """Smallest singular value of a dense matrix with rows >= cols."""
    arr = as_matrix(B)
    m, n = arr.shape
    if m == 0 or n == 0:
        raise ValueError("matrix is empty")
    if m < n:
        raise ValueError(f"need rows >= cols, got {m}x{n}")
    return float(np.linalg.svd(arr, compute_uv=False)[-1])
