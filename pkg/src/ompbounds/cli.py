"""Command-line front end: preset reproduction, bound queries, OMP on files.

Output CSVs carry '#'-prefixed metadata lines (key=value) before the header
row; numeric cells use 17 significant digits so replay is lossless.  Files
are written atomically (temp file + rename).  The default output directory
is taken from the OMPBOUNDS_OUTDIR environment variable, falling back to
the current directory.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
import tempfile
from datetime import datetime, timezone

import numpy as np

from . import __version__
from . import bounds as bnd
from .experiments import PRESETS, preset_config, ratio_experiment, run_experiment
from .phi import (
    PhiFunction,
    cauchy_schwarz,
    gaussian_piecewise,
    phi_eval,
    phi_partial_sum,
    strongly_decaying,
)
from .recovery import omp_run


class CliError(Exception):
    """User-facing error: message printed to stderr, exit status 2."""


def _fmt(value, machine: bool = True) -> str:
    if isinstance(value, bool):
        return str(value)
    if isinstance(value, (int, np.integer)):
        return str(value)
    if isinstance(value, (float, np.floating)):
        if math.isnan(value):
            return "nan"
        return f"{value:.17g}" if machine else f"{value:.6g}"
    return str(value)


def write_csv(path: str, columns, rows, metadata: dict) -> None:
    """Atomically write a CSV with metadata comment lines and a header."""
    directory = os.path.dirname(path) or "."
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            for key, value in metadata.items():
                fh.write(f"# {key}={value}\n")
            fh.write(",".join(columns) + "\n")
            for row in rows:
                if len(row) != len(columns):
                    raise ValueError(
                        f"row arity {len(row)} does not match schema arity {len(columns)}"
                    )
                fh.write(",".join(_fmt(v) for v in row) + "\n")
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def read_vector(path: str) -> np.ndarray:
    """One value per line."""
    values = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            text = line.strip()
            if not text:
                continue
            try:
                values.append(float(text))
            except ValueError:
                raise CliError(f"{path}: line {lineno}: cannot parse {text!r} as a number")
    if not values:
        raise CliError(f"{path}: no values found")
    return np.array(values)


def read_matrix(path: str) -> np.ndarray:
    """Dense CSV, row-major, no header."""
    rows = []
    width = None
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            text = line.strip()
            if not text:
                continue
            cells = text.split(",")
            if width is None:
                width = len(cells)
            elif len(cells) != width:
                raise CliError(
                    f"{path}: row {lineno}: expected {width} columns, found {len(cells)}"
                )
            parsed = []
            for col, cell in enumerate(cells, 1):
                try:
                    parsed.append(float(cell))
                except ValueError:
                    raise CliError(
                        f"{path}: row {lineno}, column {col}: cannot parse {cell.strip()!r} as a number"
                    )
            rows.append(parsed)
    if not rows:
        raise CliError(f"{path}: no rows found")
    return np.array(rows)


def parse_phi(spec: str, K: int | None) -> PhiFunction:
    """Parse a phi family spec: 'cs', 'decay:<alpha>' or 'gauss' (needs --K)."""
    if spec in ("cs", "cauchy_schwarz", "t"):
        return cauchy_schwarz()
    if spec.startswith(("decay:", "decaying:")):
        try:
            alpha = float(spec.split(":", 1)[1])
        except ValueError:
            raise CliError(f"cannot parse decay factor in phi spec {spec!r}")
        return strongly_decaying(alpha)
    if spec in ("gauss", "gaussian", "gaussian_piecewise"):
        if K is None:
            raise CliError("phi spec 'gauss' needs --K")
        return gaussian_piecewise(K)
    raise CliError(f"unknown phi spec {spec!r}; use cs, decay:<alpha> or gauss")


def _outdir(args) -> str:
    return args.outdir or os.environ.get("OMPBOUNDS_OUTDIR", ".")


def _base_metadata() -> dict:
    return {
        "artifact": f"ompbounds {__version__}",
        "generated_at": datetime.now(timezone.utc).isoformat(timespec="seconds"),
    }


def _load_config_file(path: str | None) -> dict:
    if not path:
        return {}
    import json

    try:
        with open(path) as fh:
            data = json.load(fh)
    except OSError as exc:
        raise CliError(f"cannot read config file {path}: {exc}")
    except ValueError as exc:
        raise CliError(f"config file {path} is not valid JSON: {exc}")
    if not isinstance(data, dict):
        raise CliError(f"config file {path} must hold a JSON object")
    allowed = {"trials", "seed", "grid", "outdir"}
    unknown = set(data) - allowed
    if unknown:
        raise CliError(f"config file {path}: unknown keys {sorted(unknown)}")
    return data


def cmd_reproduce(args) -> int:
    # precedence: CLI flags > config file > preset defaults
    file_cfg = _load_config_file(args.config)
    trials = args.trials if args.trials is not None else file_cfg.get("trials")
    seed = args.seed if args.seed is not None else file_cfg.get("seed", 0)
    grid = args.grid if args.grid is not None else file_cfg.get("grid")
    if args.outdir is None and "outdir" in file_cfg:
        args.outdir = file_cfg["outdir"]

    overrides = {}
    if trials is not None:
        overrides["trials"] = int(trials)
    if grid is not None:
        overrides["eps_grid_size"] = int(grid)
    config = preset_config(args.preset, seed=int(seed), **overrides)
    summary = run_experiment(config)
    metadata = _base_metadata() | summary.metadata
    if args.config:
        metadata["config_file"] = args.config
    path = os.path.join(_outdir(args), f"{args.preset}.csv")
    write_csv(path, summary.columns, summary.rows, metadata)
    print(path)
    print(f"{args.preset}: {len(summary.rows)} rows, columns: {', '.join(summary.columns)}")
    return 0


def cmd_bound(args) -> int:
    kind = args.kind
    rows: list[tuple] = []
    if kind == "probability":
        _require(args, "m", "n", "K", "phi")
        phi = parse_phi(args.phi, args.K)
        q = bnd.RecoveryBoundQuery(
            m=args.m, n=args.n, K=args.K, phi=phi, eps_grid_size=args.grid or 4096
        )
        value = bnd.recovery_probability_bound(q)
        rows.append(("probability", args.m, args.n, args.K, phi.describe(), value))
    elif kind == "probability-baseline":
        _require(args, "m", "n", "K")
        value = bnd.baseline_probability_bound(args.m, args.n, args.K, args.grid or 4096)
        rows.append(("probability-baseline", args.m, args.n, args.K, "-", value))
    elif kind == "measurements":
        _require(args, "n", "K", "zeta", "phi")
        phi = parse_phi(args.phi, args.K)
        q = bnd.MeasurementBoundQuery(n=args.n, K=args.K, zeta=args.zeta, phi=phi)
        value = bnd.measurement_bound(q)
        rows.append(("measurements", args.zeta, args.n, args.K, phi.describe(), value))
    elif kind == "measurements-baseline":
        _require(args, "n", "K", "zeta")
        result = bnd.baseline_measurement_bound(args.n, args.K, args.zeta)
        value = result.value
        if result.delta_out_of_range:
            print(
                f"warning: internal failure budget delta={result.delta:.6g} >= 0.36, "
                "outside the stated range of the baseline guarantee",
                file=sys.stderr,
            )
        rows.append(("measurements-baseline", args.zeta, args.n, args.K, "-", value))
    elif kind == "measurements-decaying":
        _require(args, "n", "K", "zeta", "alpha")
        value = bnd.decaying_measurement_bound(args.n, args.K, args.zeta, args.alpha)
        rows.append(("measurements-decaying", args.zeta, args.n, args.K, f"alpha={args.alpha:g}", value))
    elif kind == "measurements-asymptotic":
        _require(args, "n", "K", "zeta")
        value = bnd.asymptotic_measurement_bound(args.regime, args.n, args.K, args.zeta)
        rows.append(("measurements-asymptotic", args.zeta, args.n, args.K, args.regime, value))
    else:  # pragma: no cover - argparse restricts choices
        raise CliError(f"unknown bound kind {kind!r}")

    if args.csv:
        print("kind,zeta_or_m,n,K,phi,value")
        for row in rows:
            print(",".join(_fmt(v) for v in row))
    else:
        for row in rows:
            print(_fmt(row[-1], machine=False))
    return 0


def _require(args, *names) -> None:
    for name in names:
        if getattr(args, name, None) is None:
            raise CliError(f"--{name} is required for this bound kind")


def cmd_phi(args) -> int:
    phi = parse_phi(args.family, args.K)
    if args.partial_sum is not None:
        value = phi_partial_sum(phi, args.partial_sum)
    else:
        if args.t is None:
            raise CliError("provide --t or --partial-sum")
        value = phi_eval(phi, args.t)
    print(_fmt(value, machine=args.machine))
    return 0


def cmd_ratio(args) -> int:
    p_values = range(args.p_min, args.p_max + 1)
    points = ratio_experiment(p_values, args.trials, args.mu, args.seed)
    if args.output:
        metadata = _base_metadata() | {
            "mu": args.mu,
            "trials": args.trials,
            "seed": args.seed,
        }
        rows = [(p, emp, max(0.0, raw)) for p, emp, raw in points]
        write_csv(args.output, ["p", "empirical", "lower_bound"], rows, metadata)
        print(args.output)
    else:
        print("p,empirical,lower_bound")
        for p, emp, raw in points:
            print(f"{p},{_fmt(emp, machine=False)},{_fmt(max(0.0, raw), machine=False)}")
    return 0


def cmd_omp(args) -> int:
    A = read_matrix(args.matrix)
    y = read_vector(args.y)
    if y.shape[0] != A.shape[0]:
        raise CliError(
            f"dimension mismatch: matrix has {A.shape[0]} rows, observation has {y.shape[0]} entries"
        )
    iterations = args.iterations
    if not 1 <= iterations <= A.shape[0]:
        raise CliError(f"--iterations must be in [1, {A.shape[0]}]")
    result = omp_run(A, y, iterations)
    print("selected:", " ".join(str(i) for i in result.selected))
    print("residual_norms:", " ".join(_fmt(v, machine=False) for v in result.residual_norms))
    nz = np.flatnonzero(result.estimate)
    print("estimate_nonzeros:", " ".join(f"{i}:{_fmt(result.estimate[i], machine=False)}" for i in nz))
    if args.save_estimate:
        directory = os.path.dirname(args.save_estimate) or "."
        os.makedirs(directory, exist_ok=True)
        with open(args.save_estimate, "w") as fh:
            for v in result.estimate:
                fh.write(f"{v:.17g}\n")
        print(args.save_estimate)
    return 0


def cmd_simulate(args) -> int:
    cases = [(args.case, args.param)]
    config = preset_config(
        "custom",
        n=args.n,
        seed=args.seed,
        trials=args.trials,
        m_values=args.m,
        K_values=args.K,
        cases=cases,
        eps_grid_size=args.grid or 4096,
    )
    summary = run_experiment(config)
    path = os.path.join(_outdir(args), "custom.csv")
    write_csv(path, summary.columns, summary.rows, _base_metadata() | summary.metadata)
    print(path)
    for cell in summary.cells:
        print(
            f"{cell.label()} K={cell.K} m={cell.m}: empirical={cell.empirical:.4f} "
            f"ratio_mean={cell.ratio_mean:.4f}"
        )
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ompbounds",
        description="Greedy sparse recovery experiments and recovery/measurement bounds",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("reproduce", help="run a named preset and write its CSV")
    p.add_argument("preset", choices=[name for name in PRESETS if name != "custom"])
    p.add_argument("--trials", type=int, help="override the preset trial count")
    p.add_argument("--seed", type=int, help="base seed (default 0)")
    p.add_argument("--grid", type=int, help="eps grid size for probability bounds")
    p.add_argument("--config", help="JSON file with trials/seed/grid/outdir defaults")
    p.add_argument("--outdir", help="output directory (default $OMPBOUNDS_OUTDIR or .)")
    p.set_defaults(func=cmd_reproduce)

    p = sub.add_parser("bound", help="evaluate one bound")
    p.add_argument(
        "kind",
        choices=[
            "probability",
            "probability-baseline",
            "measurements",
            "measurements-baseline",
            "measurements-decaying",
            "measurements-asymptotic",
        ],
    )
    p.add_argument("--m", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--K", type=int)
    p.add_argument("--zeta", type=float)
    p.add_argument("--alpha", type=float)
    p.add_argument("--phi", help="cs | decay:<alpha> | gauss")
    p.add_argument("--regime", choices=["general", "gaussian"], default="general")
    p.add_argument("--grid", type=int)
    p.add_argument("--csv", action="store_true", help="emit a machine-readable CSV row")
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("phi", help="evaluate a disparity envelope")
    p.add_argument("--family", required=True, help="cs | decay:<alpha> | gauss")
    p.add_argument("--K", type=int)
    p.add_argument("--t", type=float)
    p.add_argument("--partial-sum", type=int, help="sum phi(k) for k=1..N instead")
    p.add_argument("--machine", action="store_true")
    p.set_defaults(func=cmd_phi)

    p = sub.add_parser("ratio", help="empirical vs analytic l1^2/l2^2 ratio probability")
    p.add_argument("--p-min", type=int, default=3)
    p.add_argument("--p-max", type=int, default=50)
    p.add_argument("--trials", type=int, default=50000)
    p.add_argument("--mu", type=float, default=0.95)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output", help="write CSV here instead of printing")
    p.set_defaults(func=cmd_ratio)

    p = sub.add_parser("omp", help="run OMP on a matrix/observation read from files")
    p.add_argument("--matrix", required=True, help="dense CSV, row-major, no header")
    p.add_argument("--y", required=True, help="observation vector, one value per line")
    p.add_argument("--iterations", type=int, required=True)
    p.add_argument("--save-estimate", help="write the estimate vector here")
    p.set_defaults(func=cmd_omp)

    p = sub.add_parser("simulate", help="custom Monte Carlo sweep")
    p.add_argument("--case", required=True)
    p.add_argument("--param", type=float)
    p.add_argument("--m", type=int, nargs="+", required=True)
    p.add_argument("--K", type=int, nargs="+", required=True)
    p.add_argument("--n", type=int, default=1024)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--grid", type=int)
    p.add_argument("--outdir")
    p.set_defaults(func=cmd_simulate)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
