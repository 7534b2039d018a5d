"""Greedy recovery (orthogonal matching pursuit) and its per-iteration diagnostics.

``omp_run`` is the textbook loop: pick the column most correlated with the
current residual, append it to the active set, refit by least squares on
the active set, update the residual.  The refit reuses the incremental QR
factorization from :mod:`ompbounds.numerics`, so one iteration costs one
matrix-vector product plus an O(m*k) column append.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .numerics import IncrementalQR, as_matrix, min_singular_value
from .phi import PhiFunction, phi_eval
from .signals import SparseSignal

#: an estimate within this l2 distance of the truth counts as exact recovery
EXACT_RECOVERY_TOL = 1e-10


@dataclass
class RecoveryResult:
    """Output of one OMP run: estimate, selection order, residual trace."""

    estimate: np.ndarray
    selected: list[int]
    residual_norms: list[float]
    exact: bool | None = None


def omp_run(A, y: np.ndarray, iterations: int) -> RecoveryResult:
    """Run exactly ``iterations`` greedy steps on y = A x.

    Ties in the correlation argmax break toward the smallest index, and
    already-selected columns are masked out of the argmax entirely, so the
    selection sequence is deterministic and duplicate-free.  A zero
    observation returns the zero estimate immediately.
    """
    arr = as_matrix(A)
    m, n = arr.shape
    y = np.asarray(y, dtype=float)
    if y.shape != (m,):
        raise ValueError(f"y has shape {y.shape}, expected ({m},)")
    if not 1 <= iterations <= m:
        raise ValueError(f"iterations must be in [1, m={m}], got {iterations}")
    if not np.linalg.norm(y) > 0.0:
        return RecoveryResult(estimate=np.zeros(n), selected=[], residual_norms=[])

    qr = IncrementalQR(arr, y)
    mask = np.zeros(n, dtype=bool)
    selected: list[int] = []
    residual_norms: list[float] = []
    r = y
    for _ in range(iterations):
        corr = np.abs(arr.T @ r)
        corr[mask] = -np.inf
        s = int(np.argmax(corr))
        selected.append(s)
        mask[s] = True
        qr.append(s)
        r = qr.residual()
        residual_norms.append(float(np.linalg.norm(r)))

    estimate = np.zeros(n)
    estimate[selected] = qr.coefficients()
    return RecoveryResult(estimate=estimate, selected=selected, residual_norms=residual_norms)


def adjudicate(result: RecoveryResult, x_true: SparseSignal | np.ndarray) -> bool:
    """Exact-recovery verdict: ||estimate - x_true||_2 <= 1e-10.

    Stores the verdict on ``result.exact`` and returns it.
    """
    truth = x_true.values if isinstance(x_true, SparseSignal) else np.asarray(x_true, dtype=float)
    if truth.shape != result.estimate.shape:
        raise ValueError(f"shape mismatch: estimate {result.estimate.shape}, truth {truth.shape}")
    result.exact = bool(np.linalg.norm(result.estimate - truth) <= EXACT_RECOVERY_TOL)
    return result.exact


@dataclass
class DiagnosticTrace:
    """Per-iteration record of the sufficient condition for correct selection.

    At step k (with k true indices already selected) the greedy step is
    guaranteed to pick inside the support whenever

        max_{j off support} |<A_j, u_k>|  <  sigma_min(A_support) / sqrt(phi(K - k))

    where u_k is the unit-norm residual direction after projecting out the
    selected columns.  ``condition_held[k] and not correct_selection[k]``
    never occurs when phi is a valid envelope for the signal.
    """

    sigma_min: list[float] = field(default_factory=list)
    offsupport_correlation: list[float] = field(default_factory=list)
    threshold: list[float] = field(default_factory=list)
    condition_held: list[bool] = field(default_factory=list)
    correct_selection: list[bool] = field(default_factory=list)

    def iterations(self) -> int:
        return len(self.condition_held)

    def violations(self) -> int:
        return sum(h and not c for h, c in zip(self.condition_held, self.correct_selection))


def selection_diagnostic(A, x: SparseSignal, phi: PhiFunction) -> DiagnosticTrace:
    """Trace the correct-selection condition along a forced-correct OMP run.

    The run observes y = A x and, after recording each step's actual argmax,
    continues from the best in-support column, so every step k has exactly k
    correct selections behind it (the regime in which the condition applies).
    """
    arr = as_matrix(A)
    m, n = arr.shape
    support = [int(i) for i in x.support]
    K = len(support)
    if K == 0:
        raise ValueError("signal is identically zero")
    if K > m:
        raise ValueError(f"support size {K} exceeds row count {m}")

    support_set = set(support)
    off = np.setdiff1d(np.arange(n), support)
    sigma = min_singular_value(arr[:, support])
    y = arr @ x.values

    qr = IncrementalQR(arr, y)
    mask = np.zeros(n, dtype=bool)
    trace = DiagnosticTrace()
    for k in range(K):
        r = qr.residual()
        u = r / np.linalg.norm(r)
        lhs = float(np.max(np.abs(arr[:, off].T @ u))) if off.size else 0.0
        threshold = sigma / math.sqrt(phi_eval(phi, K - k))

        corr = np.abs(arr.T @ r)
        corr[mask] = -np.inf
        s = int(np.argmax(corr))
        correct = s in support_set

        trace.sigma_min.append(sigma)
        trace.offsupport_correlation.append(lhs)
        trace.threshold.append(threshold)
        trace.condition_held.append(lhs < threshold)
        trace.correct_selection.append(correct)

        if not correct:
            remaining = [j for j in support if not mask[j]]
            s = remaining[int(np.argmax(corr[remaining]))]
        mask[s] = True
        qr.append(s)
    return trace
