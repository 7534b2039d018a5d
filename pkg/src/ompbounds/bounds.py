"""Closed-form recovery-probability and measurement-count bounds.

Probability bounds are suprema of smooth objectives over an interval of a
slack parameter eps; they are evaluated on a uniform grid (default 4096
points) with all products taken in log space, then clamped to [0, 1].  The
grid maximum is reported; the objectives are extremely flat near their
maxima, so the discretization error is far below the 1e-6 accuracy the
tests pin against a high-resolution extended-precision oracle.

Measurement bounds are direct formula evaluations and return reals; integer
ceiling is left to presentation.  ``ln`` is the natural logarithm
throughout, and failure budgets ``zeta`` live in (0, 1/sqrt(pi)].
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .phi import PhiFunction, phi_eval, phi_partial_sum

ZETA_MAX = 1.0 / math.sqrt(math.pi)


@dataclass(frozen=True)
class RecoveryBoundQuery:
    m: int
    n: int
    K: int
    phi: PhiFunction
    eps_grid_size: int = 4096

    def __post_init__(self):
        if self.K < 1:
            raise ValueError(f"need K >= 1, got {self.K}")
        if self.m < self.K:
            raise ValueError(f"need m >= K, got m={self.m}, K={self.K}")
        if self.n <= self.K:
            raise ValueError(f"need n > K, got n={self.n}, K={self.K}")
        if self.eps_grid_size < 2:
            raise ValueError("eps_grid_size must be at least 2")


@dataclass(frozen=True)
class MeasurementBoundQuery:
    n: int
    K: int
    zeta: float
    phi: PhiFunction

    def __post_init__(self):
        if self.n < 2:
            raise ValueError(f"need n >= 2, got {self.n}")
        if not 1 <= self.K < self.n:
            raise ValueError(f"need 1 <= K < n, got K={self.K}, n={self.n}")
        if not 0.0 < self.zeta <= ZETA_MAX:
            raise ValueError(f"zeta must be in (0, 1/sqrt(pi)] = (0, {ZETA_MAX:.6f}], got {self.zeta}")


def recovery_probability_log_bound(q: RecoveryBoundQuery) -> float:
    """Log of the grid maximum of the signal-dependent probability bound.

    The eps interval is (0, 1 - sqrt(K/m) - sqrt(2 phi(K) / (m pi))]; when
    it is empty the bound is vacuous and -inf is returned.  For each grid
    eps the objective is

        (1 - e^(-eps^2 m / 2)) * prod_{k=1..K} (1 - q_k)^(n - K),
        q_k = e^(-eta^2 m / (2 phi(k))) / (sqrt(pi m / (2 phi(k))) * eta),
        eta = 1 - sqrt(K/m) - eps.

    Every q_k is strictly below 1 on the interval, so the log is finite
    except at the eps -> 0 end where the first factor vanishes.
    """
    m, n, K = q.m, q.n, q.K
    right = 1.0 - math.sqrt(K / m) - math.sqrt(2.0 * phi_eval(q.phi, K) / (m * math.pi))
    if right <= 0.0:
        return -math.inf
    G = q.eps_grid_size
    eps = right * np.arange(1, G + 1) / G  # includes the right endpoint
    eta = (1.0 - math.sqrt(K / m)) - eps
    log_obj = np.log1p(-np.exp(-0.5 * eps**2 * m))
    for k in range(1, K + 1):
        pk = phi_eval(q.phi, k)
        qk = np.exp(-0.5 * eta**2 * m / pk) / (np.sqrt(0.5 * math.pi * m / pk) * eta)
        log_obj += (n - K) * np.log1p(-qk)
    return float(np.max(log_obj))


def recovery_probability_bound(q: RecoveryBoundQuery) -> float:
    """Signal-dependent lower bound on the probability that K greedy
    iterations exactly recover a K-sparse signal obeying the phi envelope,
    clamped to [0, 1]."""
    return min(1.0, math.exp(recovery_probability_log_bound(q)))


def baseline_probability_log_bound(m: int, n: int, K: int, eps_grid_size: int = 4096) -> float:
    """Log of the grid maximum of the sparsity-only baseline bound

        sup_{eps in (0, sqrt(m/K) - 1)} (1 - e^(-eps^2 K / 2))
            * (1 - e^(-(sqrt(m/K) - 1 - eps)^2 / 2))^(K (n - K)).

    Returns -inf when m <= K (empty interval).
    """
    if K < 1 or n <= K:
        raise ValueError(f"need n > K >= 1, got n={n}, K={K}")
    if m <= K:
        return -math.inf
    R = math.sqrt(m / K) - 1.0
    G = eps_grid_size
    eps = R * np.arange(1, G) / G  # open interval: both endpoints excluded
    log_obj = np.log1p(-np.exp(-0.5 * eps**2 * K))
    log_obj += (K * (n - K)) * np.log1p(-np.exp(-0.5 * (R - eps) ** 2))
    return float(np.max(log_obj))


def baseline_probability_bound(m: int, n: int, K: int, eps_grid_size: int = 4096) -> float:
    """Sparsity-only baseline lower bound on the exact-recovery probability,
    clamped to [0, 1]."""
    return min(1.0, math.exp(baseline_probability_log_bound(m, n, K, eps_grid_size)))


def beta_exponent(n: int, K: int, delta: float, phi: PhiFunction) -> float:
    """Exponent beta = max(1, log_n((n-K) sum_k phi(k) / (phi(K) sqrt(ln(n/delta)))))."""
    if n < 2 or not 1 <= K < n:
        raise ValueError(f"need n >= 2 and 1 <= K < n, got n={n}, K={K}")
    if not 0.0 < delta < 1.0:
        raise ValueError(f"delta must be in (0, 1), got {delta}")
    arg = (n - K) * phi_partial_sum(phi, K) / (phi_eval(phi, K) * math.sqrt(math.log(n / delta)))
    return max(1.0, math.log(arg) / math.log(n))


def _delta_from_zeta(n: int, zeta: float) -> float:
    return n * math.sqrt(math.pi) * zeta / (n + math.sqrt(math.pi))


def measurement_bound(q: MeasurementBoundQuery) -> float:
    """Measurements sufficient for exact recovery with probability >= 1 - zeta:

        (sqrt(2 beta phi(K) / K) + sqrt(1 / ln(n/delta)) + sqrt(2 / K))^2 * K ln(n/delta)

    with delta = n sqrt(pi) zeta / (n + sqrt(pi)).
    """
    delta = _delta_from_zeta(q.n, q.zeta)
    beta = beta_exponent(q.n, q.K, delta, q.phi)
    L = math.log(q.n / delta)
    root = (
        math.sqrt(2.0 * beta * phi_eval(q.phi, q.K) / q.K)
        + math.sqrt(1.0 / L)
        + math.sqrt(2.0 / q.K)
    )
    return root * root * q.K * L


def decaying_measurement_bound(n: int, K: int, zeta: float, alpha: float) -> float:
    """Closed-form sufficient measurement count for decaying signals:
    (sqrt(K) + 4 sqrt((alpha+1)/(alpha-1) * ln(n/zeta)))^2.

    Upper-bounds the full pipeline of :func:`measurement_bound` with the
    strongly-decaying envelope (it relaxes beta to 2 and phi(K) to its
    supremum (alpha+1)/(alpha-1)).
    """
    if alpha <= 1.0:
        raise ValueError(f"need alpha > 1, got {alpha}")
    if n < 2 or K < 1:
        raise ValueError(f"need n >= 2 and K >= 1, got n={n}, K={K}")
    if not 0.0 < zeta <= ZETA_MAX:
        raise ValueError(f"zeta must be in (0, {ZETA_MAX:.6f}], got {zeta}")
    root = math.sqrt(K) + 4.0 * math.sqrt((alpha + 1.0) / (alpha - 1.0) * math.log(n / zeta))
    return root * root


def asymptotic_measurement_bound(kind: str, n: int, K: int, zeta: float) -> float:
    """Large-(n, K) sufficient measurement counts: 2 K ln(n/zeta) for general
    sparse signals (``kind="general"``), 1.9 K ln(n/zeta) for i.i.d. Gaussian
    nonzeros (``kind="gaussian"``)."""
    factors = {"general": 2.0, "gaussian": 1.9}
    if kind not in factors:
        raise ValueError(f"kind must be one of {sorted(factors)}, got {kind!r}")
    if n < 2 or K < 1:
        raise ValueError(f"need n >= 2 and K >= 1, got n={n}, K={K}")
    if not 0.0 < zeta <= ZETA_MAX:
        raise ValueError(f"zeta must be in (0, {ZETA_MAX:.6f}], got {zeta}")
    return factors[kind] * K * math.log(n / zeta)


@dataclass(frozen=True)
class BaselineMeasurement:
    """Baseline measurement count plus the internal failure budget delta.

    The baseline guarantee is stated for delta < 0.36; larger converted
    deltas still evaluate but are flagged out of range.
    """

    value: float
    delta: float
    delta_out_of_range: bool


def baseline_measurement_bound(n: int, K: int, zeta: float) -> BaselineMeasurement:
    """Sparsity-only baseline measurement count at failure budget zeta:

        (2 + sqrt(1 / ln(n/delta)) + sqrt(2 / K))^2 * K ln(n/delta),
        delta = 2 (sqrt(1 + n^2 zeta) - 1) / n.
    """
    if n < 2 or K < 1:
        raise ValueError(f"need n >= 2 and K >= 1, got n={n}, K={K}")
    if not 0.0 < zeta <= ZETA_MAX:
        raise ValueError(f"zeta must be in (0, {ZETA_MAX:.6f}], got {zeta}")
    delta = 2.0 * (math.sqrt(1.0 + n * n * zeta) - 1.0) / n
    L = math.log(n / delta)
    root = 2.0 + math.sqrt(1.0 / L) + math.sqrt(2.0 / K)
    return BaselineMeasurement(value=root * root * K * L, delta=delta, delta_out_of_range=delta >= 0.36)


def baseline_measurement_bound_alt(n: int, K: int, zeta: float) -> float:
    """Algebraically equivalent closed form of the baseline measurement count:

        ((2 sqrt(K) + sqrt(2)) sqrt(ln((sqrt(1 + n^2 zeta) + 1) / (2 zeta))) + sqrt(K))^2
    """
    if n < 2 or K < 1:
        raise ValueError(f"need n >= 2 and K >= 1, got n={n}, K={K}")
    if not 0.0 < zeta <= ZETA_MAX:
        raise ValueError(f"zeta must be in (0, {ZETA_MAX:.6f}], got {zeta}")
    L = math.log((math.sqrt(1.0 + n * n * zeta) + 1.0) / (2.0 * zeta))
    root = (2.0 * math.sqrt(K) + math.sqrt(2.0)) * math.sqrt(L) + math.sqrt(K)
    return root * root
