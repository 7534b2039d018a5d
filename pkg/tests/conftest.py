"""Shared fixtures.  The session-scoped ones run the expensive Monte Carlo
sweeps once; acceptance criteria and property tests both read from them."""

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from ompbounds.experiments import preset_config, run_experiment

ACCEPTANCE_SEED = 20240915


@pytest.fixture(scope="session")
def table1_m100():
    """table1 protocol restricted to m=100 with the flat and Poisson cases.

    Returns (summary, elapsed_seconds); the runtime feeds the acceptance
    runtime target.
    """
    import time

    config = preset_config(
        "table1",
        seed=ACCEPTANCE_SEED,
        m_values=(100,),
        cases=(("flat", None), ("poisson", 1.0)),
    )
    start = time.perf_counter()
    summary = run_experiment(config)
    return summary, time.perf_counter() - start


@pytest.fixture(scope="session")
def table1_m60():
    """Full six-case table1 column at m=60."""
    config = preset_config("table1", seed=ACCEPTANCE_SEED, m_values=(60,))
    return run_experiment(config)


@pytest.fixture(scope="session")
def table2_m140_decaying():
    """table2 protocol restricted to the decaying case at m=140."""
    config = preset_config(
        "table2",
        seed=ACCEPTANCE_SEED,
        m_values=(140,),
        cases=(("decaying", 1.2),),
    )
    return run_experiment(config)


@pytest.fixture(scope="session")
def fig4_summary():
    """Full fig4 sweep (flat signals, m = 100:50:1000, K in {15, 30})."""
    return run_experiment(preset_config("fig4", seed=ACCEPTANCE_SEED))
