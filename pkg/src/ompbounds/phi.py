"""Disparity envelopes phi(t) bounding ||x_S||_1^2 / ||x_S||_2^2 over support subsets.

Three families are supported:

* ``cauchy_schwarz``: phi(t) = t, valid for every sparse signal.
* ``strongly_decaying(alpha)``: phi(t) = (alpha^t - 1)(alpha + 1) /
  ((alpha^t + 1)(alpha - 1)) for alpha > 1, valid for signals whose sorted
  nonzero magnitudes decay by at least a factor alpha per step.  The
  alpha -> 1 limit of the closed form is t, recovering the generic envelope.
* ``gaussian_piecewise(K)``: phi(t) = t below ceil(0.95 K) and 0.95 K on
  [ceil(0.95 K), K], valid for i.i.d. Gaussian nonzeros with probability at
  least :func:`gaussian_phi_probability`.

Smaller phi means more disparity between the magnitudes of the nonzero
entries, which is what makes greedy recovery easier.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

FAMILIES = ("cauchy_schwarz", "strongly_decaying", "gaussian_piecewise")


def piecewise_knee(K: int) -> int:
    """First size at which the piecewise Gaussian envelope flattens:
    ceil(0.95 K), computed in integer arithmetic to avoid float rounding."""
    return -((-19 * K) // 20)


@dataclass(frozen=True)
class PhiFunction:
    """One evaluable phi family; build via the factory functions below."""

    family: str
    alpha: float | None = None
    K: int | None = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown phi family {self.family!r}")
        if self.family == "strongly_decaying":
            if self.alpha is None or self.alpha <= 1.0:
                raise ValueError("strongly_decaying requires alpha > 1")
        if self.family == "gaussian_piecewise":
            if self.K is None or self.K < 1:
                raise ValueError("gaussian_piecewise requires positive K")

    def eval(self, t: float) -> float:
        return phi_eval(self, t)

    def partial_sum(self, K: int) -> float:
        return phi_partial_sum(self, K)

    def describe(self) -> str:
        if self.family == "strongly_decaying":
            return f"strongly_decaying({self.alpha:g})"
        if self.family == "gaussian_piecewise":
            return f"gaussian_piecewise({self.K})"
        return "cauchy_schwarz"


def cauchy_schwarz() -> PhiFunction:
    return PhiFunction("cauchy_schwarz")


def strongly_decaying(alpha: float) -> PhiFunction:
    return PhiFunction("strongly_decaying", alpha=float(alpha))


def gaussian_piecewise(K: int) -> PhiFunction:
    return PhiFunction("gaussian_piecewise", K=int(K))


def phi_eval(phi: PhiFunction, t: float) -> float:
    """Evaluate the envelope at t > 0 (t <= K for the piecewise family)."""
    if t <= 0:
        raise ValueError(f"phi is defined for t > 0, got {t}")
    if phi.family == "cauchy_schwarz":
        return float(t)
    if phi.family == "strongly_decaying":
        a = phi.alpha
        # (a^t - 1)/(a^t + 1) == tanh(t*ln(a)/2); stable for large t*ln(a)
        return (a + 1.0) / (a - 1.0) * math.tanh(0.5 * t * math.log(a))
    if t > phi.K:
        raise ValueError(f"piecewise envelope is defined up to K={phi.K}, got t={t}")
    if t < piecewise_knee(phi.K):
        return float(t)
    return 0.95 * phi.K


def phi_partial_sum(phi: PhiFunction, K: int) -> float:
    """Sum of phi(k) for k = 1..K."""
    if K < 1:
        raise ValueError(f"need K >= 1, got {K}")
    return float(sum(phi_eval(phi, k) for k in range(1, K + 1)))


def ratio_probability_bound(mu: float, gamma: float, p: int) -> float:
    """Lower bound on P(||u||_1^2 <= mu * p * ||u||_2^2) for u ~ N(0, I_p).

    Returns 1 - sqrt(1+gamma) * e^(1/6) * c(mu, gamma)^p with
    c = 2.775 * gamma^gamma * e^(-gamma/2) * (1+gamma)^(-(1+gamma)/2) / mu^(gamma/2).
    The value can be negative for small p; callers clamp for display.
    """
    if not 0.0 < mu <= 1.0:
        raise ValueError(f"mu must be in (0, 1], got {mu}")
    if gamma <= 0.0:
        raise ValueError(f"gamma must be positive, got {gamma}")
    if p < 1:
        raise ValueError(f"p must be a positive integer, got {p}")
    log_c = (
        math.log(2.775)
        + gamma * math.log(gamma)
        - 0.5 * gamma
        - 0.5 * (1.0 + gamma) * math.log1p(gamma)
        - 0.5 * gamma * math.log(mu)
    )
    return 1.0 - math.sqrt(1.0 + gamma) * math.exp(1.0 / 6.0 + p * log_c)


def gaussian_phi_probability_raw(K: int) -> float:
    """Unclamped probability that the piecewise Gaussian envelope holds:
    1 - (3.614 / sqrt(K)) * 0.981^ceil(0.95 K).  Negative for small K."""
    if K < 1:
        raise ValueError(f"need K >= 1, got {K}")
    return 1.0 - 3.614 / math.sqrt(K) * 0.981 ** piecewise_knee(K)


def gaussian_phi_probability(K: int) -> float:
    """Probability that a K-sparse i.i.d. Gaussian signal satisfies the
    piecewise envelope, clamped to [0, 1]."""
    return max(0.0, gaussian_phi_probability_raw(K))
