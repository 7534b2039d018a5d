"""Monte Carlo experiments and formula sweeps behind the preset CSV outputs.

Seeding: a trial with global index g in the cell (K, m) uses the matrix
stream ``split_seed(base_seed, K, m, g, 0)`` and, for the c-th configured
signal case, the signal stream ``split_seed(base_seed, K, m, g, 1 + c)``.
All cases of one trial therefore share one sensing matrix (each with its
own support), trials are independent of execution order, and a run split
into chunks via ``trial_offset`` pools to the identical aggregate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import bounds as bnd
from .numerics import gaussian_matrix, split_seed, rng_from_seed
from .phi import (
    PhiFunction,
    cauchy_schwarz,
    gaussian_phi_probability,
    gaussian_piecewise,
    phi_eval,
    ratio_probability_bound,
    strongly_decaying,
)
from .recovery import adjudicate, omp_run
from .signals import SparseSignal, case_label, generate_signal, l1l2_ratio

Z95 = 1.959963984540054

#: the six signal cases of the ratio-vs-recovery tables, in table order
TABLE_CASES = (
    ("flat", None),
    ("uniform", None),
    ("gaussian", 1.0),
    ("decaying", 1.2),
    ("exponential", 1.0),
    ("poisson", 1.0),
)

_M_GRID_PROB = tuple(range(100, 1001, 50))
_ZETA_GRID = tuple(round(0.1 - 0.01 * i, 2) for i in range(10))
_PHI_CURVE_T = tuple(range(1, 31))
_PHI_CURVE_ALPHAS = (1.0, 1.5, 2.0, 2.5)
_PHI_ALPHA_GRID = tuple(round(1.05 + 0.05 * i, 2) for i in range(40))
_PHI_ALPHA_T = (5, 10, 15, 20)
_RATIO_P = tuple(range(3, 51))
_ENVELOPE_K = tuple(range(10, 201, 10))


def wilson_halfwidth(successes: int, trials: int, z: float = Z95) -> float:
    """Half-width of the Wilson score interval for a binomial proportion."""
    if trials < 1:
        raise ValueError("trials must be positive")
    if not 0 <= successes <= trials:
        raise ValueError(f"successes {successes} outside [0, {trials}]")
    p = successes / trials
    denom = 1.0 + z * z / trials
    return z * math.sqrt(p * (1.0 - p) / trials + z * z / (4.0 * trials * trials)) / denom


def phi_for_case(case: str, param: float | None, K: int) -> PhiFunction:
    """Envelope attached to a signal case: geometric profiles get the
    strongly-decaying form, Gaussian nonzeros the piecewise form, and
    everything else the generic phi(t) = t."""
    if case == "decaying":
        return strongly_decaying(param)
    if case == "gaussian":
        return gaussian_piecewise(K)
    return cauchy_schwarz()


@dataclass(frozen=True)
class ExperimentConfig:
    preset: str
    kind: str  # "mc" | "measurement" | "curve" | "ratio"
    n: int = 1024
    K_values: tuple[int, ...] = ()
    m_values: tuple[int, ...] = ()
    cases: tuple[tuple[str, float | None], ...] = ()
    zeta_values: tuple[float, ...] = ()
    trials: int = 1
    default_trials: int = 1
    base_seed: int = 0
    eps_grid_size: int = 4096
    trial_offset: int = 0
    with_bounds: bool = True


_MC_PRESETS = {
    "fig4": dict(cases=(("flat", None),), K_values=(15, 30), m_values=_M_GRID_PROB, trials=1000),
    "fig5": dict(cases=(("decaying", 1.1),), K_values=(15, 30), m_values=_M_GRID_PROB, trials=1000),
    "fig6": dict(cases=(("decaying", 1.2),), K_values=(15, 30), m_values=_M_GRID_PROB, trials=1000),
    "fig7": dict(cases=(("gaussian", 1.0),), K_values=(15, 30), m_values=_M_GRID_PROB, trials=1000),
    "table1": dict(cases=TABLE_CASES, K_values=(15,), m_values=(60, 80, 100), trials=10000),
    "table2": dict(cases=TABLE_CASES, K_values=(30,), m_values=(120, 140, 160), trials=10000),
}

_MEASUREMENT_PRESETS = {
    "fig8": ("flat", None),
    "fig9": ("decaying", 1.1),
    "fig10": ("decaying", 1.2),
    "fig11": ("gaussian", 1.0),
}

PRESETS = (
    "fig1",
    "fig2",
    "fig3",
    "fig_phi_lbd",
    *_MC_PRESETS,
    *_MEASUREMENT_PRESETS,
    "custom",
)


def preset_config(
    name: str,
    *,
    n: int = 1024,
    seed: int = 0,
    trials: int | None = None,
    eps_grid_size: int = 4096,
    m_values=None,
    K_values=None,
    cases=None,
    trial_offset: int = 0,
) -> ExperimentConfig:
    """Build the configuration of a named preset, with optional overrides.

    ``trials``, ``m_values``, ``K_values`` and ``cases`` override the preset
    defaults (recorded in the summary metadata); ``custom`` requires
    ``cases``, ``K_values`` and ``m_values`` explicitly.
    """
    if name not in PRESETS:
        raise ValueError(f"unknown preset {name!r}; choose from {', '.join(PRESETS)}")
    if name in _MC_PRESETS or name == "custom":
        base = _MC_PRESETS.get(name, dict(cases=(), K_values=(), m_values=(), trials=1000))
        cfg = ExperimentConfig(
            preset=name,
            kind="mc",
            n=n,
            K_values=tuple(K_values) if K_values is not None else base["K_values"],
            m_values=tuple(m_values) if m_values is not None else base["m_values"],
            cases=tuple(cases) if cases is not None else base["cases"],
            trials=trials if trials is not None else base["trials"],
            default_trials=base["trials"],
            base_seed=seed,
            eps_grid_size=eps_grid_size,
            trial_offset=trial_offset,
        )
        if not (cfg.cases and cfg.K_values and cfg.m_values):
            raise ValueError(f"preset {name!r} needs cases, K_values and m_values")
        return cfg
    if name in _MEASUREMENT_PRESETS:
        return ExperimentConfig(
            preset=name,
            kind="measurement",
            n=n,
            K_values=tuple(K_values) if K_values is not None else (15, 30),
            zeta_values=_ZETA_GRID,
            cases=(_MEASUREMENT_PRESETS[name],),
            base_seed=seed,
        )
    if name == "fig3":
        t = trials if trials is not None else 50000
        return ExperimentConfig(
            preset=name, kind="ratio", trials=t, default_trials=50000, base_seed=seed
        )
    return ExperimentConfig(preset=name, kind="curve", base_seed=seed)


@dataclass
class TrialResult:
    exact: bool
    ratio: float


def _run_one(A: np.ndarray, x: SparseSignal, iterations: int) -> TrialResult:
    y = A @ x.values
    result = omp_run(A, y, iterations)
    exact = adjudicate(result, x)
    ratio = l1l2_ratio(x) if x.support.size else math.nan
    return TrialResult(exact=exact, ratio=ratio)


def run_trial(m: int, n: int, K: int, case: str, param: float | None, seed: int) -> TrialResult:
    """One full trial: draw A and x from subseeds of ``seed``, observe
    y = A x, run K greedy iterations, adjudicate at the exact-recovery
    tolerance, and report the signal's l1^2/l2^2 ratio."""
    if not 1 <= K <= m <= n:
        raise ValueError(f"need 1 <= K <= m <= n, got K={K}, m={m}, n={n}")
    A = gaussian_matrix(m, n, split_seed(seed, 0))
    x = generate_signal(case, K, n, split_seed(seed, 1), param)
    return _run_one(A.entries, x, K)


@dataclass
class CellStats:
    """Aggregate of one (case, K, m) grid cell of a Monte Carlo preset."""

    case: str
    param: float | None
    K: int
    m: int
    n: int
    trials: int
    successes: int
    empirical: float
    wilson_halfwidth: float
    ratio_mean: float
    probability_bound: float | None = None
    baseline_bound: float | None = None

    def label(self) -> str:
        return case_label(self.case, self.param)


@dataclass
class ExperimentSummary:
    preset: str
    metadata: dict
    columns: list[str]
    rows: list[tuple]
    cells: list[CellStats] = field(default_factory=list)


def _metadata(config: ExperimentConfig) -> dict:
    md = {
        "preset": config.preset,
        "seed": config.base_seed,
    }
    if config.kind in ("mc", "ratio"):
        md["trials"] = config.trials
        if config.trials != config.default_trials:
            md["trials_override"] = f"default {config.default_trials}"
        if config.trial_offset:
            md["trial_offset"] = config.trial_offset
    if config.kind == "mc":
        md.update(
            n=config.n,
            K_values=",".join(str(k) for k in config.K_values),
            m_values=",".join(str(m) for m in config.m_values),
            cases=";".join(case_label(c, p) for c, p in config.cases),
            eps_grid_size=config.eps_grid_size,
        )
    if config.kind == "measurement":
        md.update(
            n=config.n,
            K_values=",".join(str(k) for k in config.K_values),
            zeta_values=",".join(f"{z:g}" for z in config.zeta_values),
            cases=";".join(case_label(c, p) for c, p in config.cases),
        )
    return md


def run_experiment(config: ExperimentConfig) -> ExperimentSummary:
    """Execute a configured preset and aggregate its output rows.

    Monte Carlo presets run ``trials`` independent trials per grid cell and
    attach the matching probability bounds; measurement presets are pure
    formula sweeps; curve presets tabulate the envelope functions.
    """
    if config.kind == "mc":
        return _run_mc(config)
    if config.kind == "measurement":
        return _run_measurement(config)
    if config.kind == "ratio":
        points = ratio_experiment(_RATIO_P, config.trials, 0.95, config.base_seed)
        rows = [(p, emp, max(0.0, raw)) for p, emp, raw in points]
        return ExperimentSummary(
            preset=config.preset,
            metadata=_metadata(config) | {"mu": 0.95},
            columns=["p", "empirical", "lower_bound"],
            rows=rows,
        )
    return _run_curve(config)


def _run_mc(config: ExperimentConfig) -> ExperimentSummary:
    n = config.n
    cells: list[CellStats] = []
    for K in config.K_values:
        for m in config.m_values:
            if not 1 <= K <= m <= n:
                raise ValueError(f"invalid grid cell K={K}, m={m}, n={n}")
            succ = np.zeros(len(config.cases), dtype=int)
            ratio_sum = np.zeros(len(config.cases))
            ratio_cnt = np.zeros(len(config.cases), dtype=int)
            for t in range(config.trials):
                g = config.trial_offset + t
                A = gaussian_matrix(m, n, split_seed(config.base_seed, K, m, g, 0))
                for ci, (case, param) in enumerate(config.cases):
                    sseed = split_seed(config.base_seed, K, m, g, 1 + ci)
                    try:
                        x = generate_signal(case, K, n, sseed, param)
                        out = _run_one(A.entries, x, K)
                    except Exception as exc:
                        # fail fast, naming the grid point and trial
                        raise RuntimeError(
                            f"trial {g} failed at grid point K={K}, m={m}, "
                            f"case={case_label(case, param)}: {exc}"
                        ) from exc
                    succ[ci] += out.exact
                    if not math.isnan(out.ratio):
                        ratio_sum[ci] += out.ratio
                        ratio_cnt[ci] += 1
            for ci, (case, param) in enumerate(config.cases):
                pb = bb = None
                if config.with_bounds:
                    q = bnd.RecoveryBoundQuery(
                        m=m, n=n, K=K, phi=phi_for_case(case, param, K),
                        eps_grid_size=config.eps_grid_size,
                    )
                    pb = bnd.recovery_probability_bound(q)
                    bb = bnd.baseline_probability_bound(m, n, K, config.eps_grid_size)
                s = int(succ[ci])
                cells.append(
                    CellStats(
                        case=case,
                        param=param,
                        K=K,
                        m=m,
                        n=n,
                        trials=config.trials,
                        successes=s,
                        empirical=s / config.trials,
                        wilson_halfwidth=wilson_halfwidth(s, config.trials),
                        ratio_mean=float(ratio_sum[ci] / ratio_cnt[ci]) if ratio_cnt[ci] else math.nan,
                        probability_bound=pb,
                        baseline_bound=bb,
                    )
                )
    columns = [
        "case", "K", "m", "trials", "successes", "empirical",
        "wilson_halfwidth", "ratio_mean", "probability_bound", "baseline_bound",
    ]
    rows = [
        (
            c.label(), c.K, c.m, c.trials, c.successes, c.empirical,
            c.wilson_halfwidth, c.ratio_mean,
            math.nan if c.probability_bound is None else c.probability_bound,
            math.nan if c.baseline_bound is None else c.baseline_bound,
        )
        for c in cells
    ]
    return ExperimentSummary(
        preset=config.preset, metadata=_metadata(config), columns=columns, rows=rows, cells=cells
    )


def _run_measurement(config: ExperimentConfig) -> ExperimentSummary:
    (case, param), n = config.cases[0], config.n
    columns = ["zeta"]
    for K in config.K_values:
        columns += [f"new_nn_K{K}", f"existing_nn_K{K}"]
    rows = []
    for zeta in config.zeta_values:
        row = [zeta]
        for K in config.K_values:
            phi = phi_for_case(case, param, K)
            q = bnd.MeasurementBoundQuery(n=n, K=K, zeta=zeta, phi=phi)
            row.append(bnd.measurement_bound(q))
            row.append(bnd.baseline_measurement_bound(n, K, zeta).value)
        rows.append(tuple(row))
    return ExperimentSummary(
        preset=config.preset, metadata=_metadata(config), columns=columns, rows=rows
    )


def _run_curve(config: ExperimentConfig) -> ExperimentSummary:
    if config.preset == "fig1":
        columns = ["t"] + [f"phi_alpha_{a:.1f}" for a in _PHI_CURVE_ALPHAS]
        rows = []
        for t in _PHI_CURVE_T:
            row = [t]
            for a in _PHI_CURVE_ALPHAS:
                # alpha = 1 is the pointwise limit of the closed form: phi(t) = t
                row.append(float(t) if a == 1.0 else phi_eval(strongly_decaying(a), t))
            rows.append(tuple(row))
        return ExperimentSummary(config.preset, _metadata(config), columns, rows)
    if config.preset == "fig2":
        columns = ["alpha"] + [f"phi_t_{t}" for t in _PHI_ALPHA_T]
        rows = [
            tuple([a] + [phi_eval(strongly_decaying(a), t) for t in _PHI_ALPHA_T])
            for a in _PHI_ALPHA_GRID
        ]
        return ExperimentSummary(config.preset, _metadata(config), columns, rows)
    if config.preset == "fig_phi_lbd":
        rows = gaussian_phi_probability_curve(_ENVELOPE_K)
        return ExperimentSummary(
            config.preset, _metadata(config), ["K", "envelope_probability"], rows
        )
    raise ValueError(f"preset {config.preset!r} is not a curve preset")


def ratio_experiment(p_values, trials: int, mu: float, seed: int) -> list[tuple[int, float, float]]:
    """Empirical P(||u||_1^2 <= mu p ||u||_2^2) for u ~ N(0, I_p), paired with
    the analytic lower bound at gamma = 1.505.  Returns (p, empirical,
    raw_bound) tuples; the raw bound can be negative for small p."""
    if trials < 1:
        raise ValueError("trials must be positive")
    if not 0.0 < mu <= 1.0:
        raise ValueError(f"mu must be in (0, 1], got {mu}")
    out = []
    for p in p_values:
        rng = rng_from_seed(split_seed(seed, p))
        u = rng.standard_normal((trials, p))
        l1sq = np.abs(u).sum(axis=1) ** 2
        l2sq = np.einsum("ij,ij->i", u, u)
        empirical = float(np.mean(l1sq <= mu * p * l2sq))
        out.append((int(p), empirical, ratio_probability_bound(mu, 1.505, int(p))))
    return out


def gaussian_phi_probability_curve(K_values) -> list[tuple[int, float]]:
    """Tabulate the Gaussian envelope probability over a K grid (clamped)."""
    return [(int(K), gaussian_phi_probability(int(K))) for K in K_values]
