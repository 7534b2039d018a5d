"""Test-signal families and their l1^2/l2^2 disparity statistics.

Cases (nonzero values placed on a uniformly random K-subset of {0..n-1}):

* ``flat``: every nonzero is 1 (the hardest case for greedy recovery).
* ``decaying``: the i-th smallest support index carries alpha^(K-i) for
  i = 1..K, a deterministic geometric profile with decay factor alpha > 1.
* ``gaussian``: i.i.d. N(0, sigma^2), sigma defaulting to 1.
* ``uniform``: i.i.d. uniform on [-sqrt(3), sqrt(3)] (unit variance).
* ``exponential``: i.i.d. exponential with rate lam (kept nonnegative).
* ``poisson``: i.i.d. Poisson(lam) counts, used as drawn.  Zero draws are
  kept, so the realized support can be smaller than K; that lower effective
  sparsity is exactly what makes this the easiest recovery case.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .numerics import rng_from_seed, split_seed
from .phi import PhiFunction, piecewise_knee, phi_eval

CASES = ("flat", "decaying", "gaussian", "uniform", "exponential", "poisson")

#: default distribution parameter per case (None where the case has none)
DEFAULT_PARAMS = {
    "flat": None,
    "decaying": 1.2,
    "gaussian": 1.0,
    "uniform": None,
    "exponential": 1.0,
    "poisson": 1.0,
}


@dataclass(frozen=True)
class SparseSignal:
    """Length-n vector whose nonzeros sit on ``support`` (sorted indices)."""

    n: int
    values: np.ndarray
    support: np.ndarray
    case: str
    seed: int
    param: float | None = None

    def nonzeros(self) -> np.ndarray:
        return self.values[self.support]


def case_label(case: str, param: float | None) -> str:
    return case if param is None else f"{case}({param:g})"


def generate_signal(case: str, K: int, n: int, seed: int, param: float | None = None) -> SparseSignal:
    """Draw a K-sparse signal of the requested case.

    The placement set is a uniform K-subset; ``support`` records the indices
    that actually carry nonzero values (== placement except for Poisson
    zero draws).
    """
    if case not in CASES:
        raise ValueError(f"unknown signal case {case!r}")
    if not 1 <= K <= n:
        raise ValueError(f"need 1 <= K <= n, got K={K}, n={n}")
    if param is None:
        param = DEFAULT_PARAMS[case]
    if case == "decaying" and (param is None or param <= 1.0):
        raise ValueError(f"decaying case requires alpha > 1, got {param}")
    if case in ("exponential", "poisson") and param <= 0.0:
        raise ValueError(f"{case} case requires lam > 0, got {param}")
    if case == "gaussian" and param <= 0.0:
        raise ValueError(f"gaussian case requires sigma > 0, got {param}")

    rng = rng_from_seed(seed)
    placement = np.sort(rng.choice(n, size=K, replace=False))
    if case == "flat":
        nz = np.ones(K)
    elif case == "decaying":
        # i-th smallest placement index gets alpha^(K-i), i = 1..K
        nz = float(param) ** (K - 1.0 - np.arange(K))
    elif case == "gaussian":
        nz = param * rng.standard_normal(K)
    elif case == "uniform":
        nz = rng.uniform(-math.sqrt(3.0), math.sqrt(3.0), K)
    elif case == "exponential":
        nz = rng.exponential(1.0 / param, K)
    else:
        nz = rng.poisson(param, K).astype(float)

    values = np.zeros(n)
    values[placement] = nz
    support = placement[nz != 0.0]
    return SparseSignal(n=n, values=values, support=support, case=case, seed=seed, param=param)


def l1l2_ratio(x: SparseSignal | np.ndarray, S=None) -> float:
    """||x_S||_1^2 / ||x_S||_2^2 for a nonempty subset S of the support.

    With S omitted the full support is used.  The value always lies in
    [1, |S|] (equality on the right for equal magnitudes).
    """
    values = x.values if isinstance(x, SparseSignal) else np.asarray(x, dtype=float)
    if S is None:
        if isinstance(x, SparseSignal):
            S = x.support
        else:
            S = np.flatnonzero(values)
    S = np.asarray(list(S), dtype=int)
    if S.size == 0:
        raise ValueError("subset is empty")
    sub = values[S]
    l2sq = float(sub @ sub)
    if l2sq == 0.0:
        raise ValueError("subvector is identically zero")
    l1 = float(np.abs(sub).sum())
    return l1 * l1 / l2sq


@dataclass
class PhiCheckResult:
    holds: bool
    worst_subset: tuple[int, ...]
    worst_margin: float
    sampled: bool


def check_phi_inequality(
    x: SparseSignal,
    phi: PhiFunction,
    max_enumeration: int = 10**6,
    sample_seed: int = 0,
) -> PhiCheckResult:
    """Verify ||x_S||_1^2 <= phi(|S|) ||x_S||_2^2 over subsets S of the support.

    For the gaussian_piecewise family only sizes >= ceil(0.95 K) are
    examined (smaller sizes hold unconditionally since phi(t) = t there).
    When the number of subsets exceeds ``max_enumeration`` the check falls
    back to sampling that many subsets uniformly from the examined family
    and flags the result as sampled.  ``worst_margin`` is the largest value
    of ||x_S||_1^2 - phi(|S|) ||x_S||_2^2 encountered (<= 0 when the
    inequality holds everywhere).
    """
    support = np.asarray(x.support, dtype=int)
    K = support.size
    if K == 0:
        raise ValueError("signal is identically zero")
    mags = np.abs(x.values[support])

    if phi.family == "gaussian_piecewise":
        smin = min(piecewise_knee(phi.K), K)
    else:
        smin = 1
    sizes = list(range(smin, K + 1))
    counts = [math.comb(K, s) for s in sizes]
    total = sum(counts)

    tol = 1e-9 * float(mags @ mags)
    worst_margin = -math.inf
    worst_subset: tuple[int, ...] = ()

    def scan(size: int, combos: np.ndarray):
        nonlocal worst_margin, worst_subset
        sub = mags[combos]  # (batch, size)
        margins = sub.sum(axis=1) ** 2 - phi_eval(phi, size) * (sub**2).sum(axis=1)
        i = int(np.argmax(margins))
        if margins[i] > worst_margin:
            worst_margin = float(margins[i])
            worst_subset = tuple(int(j) for j in support[combos[i]])

    sampled = total > max_enumeration
    if not sampled:
        for s in sizes:
            combos = np.array(list(combinations(range(K), s)), dtype=int)
            scan(s, combos)
    else:
        rng = rng_from_seed(split_seed(sample_seed, K))
        weights = np.array(counts, dtype=float)
        draw = rng.choice(len(sizes), size=max_enumeration, p=weights / weights.sum())
        chunk = 10**5
        for si, s in enumerate(sizes):
            remaining = int(np.count_nonzero(draw == si))
            while remaining > 0:
                b = min(remaining, chunk)
                keys = rng.random((b, K))
                combos = np.argpartition(keys, s - 1, axis=1)[:, :s]
                scan(s, combos)
                remaining -= b

    return PhiCheckResult(
        holds=worst_margin <= tol,
        worst_subset=worst_subset,
        worst_margin=worst_margin,
        sampled=sampled,
    )
