import numpy as np
import pytest

from ompbounds.numerics import gaussian_matrix, split_seed
from ompbounds.phi import cauchy_schwarz, strongly_decaying
from ompbounds.recovery import adjudicate, omp_run, selection_diagnostic
from ompbounds.signals import generate_signal
from reference import reference_omp


def test_single_atom_recovery():
    A = gaussian_matrix(50, 100, seed=1)
    j = 37
    y = A.entries[:, j].copy()
    result = omp_run(A, y, iterations=1)
    assert result.selected == [j]
    assert result.residual_norms[0] <= 1e-10 * np.linalg.norm(y)
    truth = np.zeros(100)
    truth[j] = 1.0
    assert adjudicate(result, truth)
    assert result.exact is True


def test_orthonormal_matrix_recovers_any_sparse_signal():
    rng = np.random.default_rng(2)
    Q, _ = np.linalg.qr(rng.standard_normal((64, 64)))
    x = generate_signal("gaussian", 7, 64, seed=3)
    y = Q @ x.values
    result = omp_run(Q, y, iterations=7)
    assert adjudicate(result, x)
    assert sorted(result.selected) == sorted(int(i) for i in x.support)


def test_orthonormal_matrix_flat_signal_ties():
    # equal correlations tie-break to the smallest index but stay in support
    rng = np.random.default_rng(4)
    Q, _ = np.linalg.qr(rng.standard_normal((32, 32)))
    x = generate_signal("flat", 5, 32, seed=5)
    result = omp_run(Q, Q @ x.values, iterations=5)
    assert adjudicate(result, x)


def test_matches_reference_implementation():
    A = gaussian_matrix(50, 100, seed=6)
    x = generate_signal("flat", 5, 100, seed=7)
    y = A.entries @ x.values
    result = omp_run(A, y, iterations=5)
    ref_estimate, ref_selected = reference_omp(A.entries, y, 5)
    assert result.selected == ref_selected
    assert np.allclose(result.estimate, ref_estimate, atol=1e-8)


def test_residual_monotone_and_orthogonal():
    A = gaussian_matrix(60, 120, seed=8)
    x = generate_signal("gaussian", 6, 120, seed=9)
    y = A.entries @ x.values
    result = omp_run(A, y, iterations=10)
    norms = result.residual_norms
    assert all(b <= a + 1e-12 * np.linalg.norm(y) for a, b in zip(norms, norms[1:]))
    assert len(set(result.selected)) == len(result.selected)


def test_no_reselection_even_after_exact_fit():
    # after the residual hits zero, further iterations must pick fresh columns
    A = gaussian_matrix(30, 60, seed=10)
    x = generate_signal("flat", 2, 60, seed=11)
    y = A.entries @ x.values
    result = omp_run(A, y, iterations=8)
    assert len(set(result.selected)) == 8


def test_zero_observation_short_circuits():
    A = gaussian_matrix(20, 40, seed=12)
    result = omp_run(A, np.zeros(20), iterations=5)
    assert result.selected == []
    assert result.residual_norms == []
    assert np.all(result.estimate == 0.0)


def test_omp_run_validation():
    A = gaussian_matrix(10, 30, seed=13)
    with pytest.raises(ValueError):
        omp_run(A, np.ones(10), iterations=11)
    with pytest.raises(ValueError):
        omp_run(A, np.ones(10), iterations=0)
    with pytest.raises(ValueError):
        omp_run(A, np.ones(9), iterations=3)


def test_adjudicate_threshold_strictness():
    A = gaussian_matrix(10, 20, seed=14)
    x = generate_signal("flat", 3, 20, seed=15)
    result = omp_run(A, A.entries @ x.values, iterations=3)
    assert adjudicate(result, x)
    off = x.values.copy()
    off[int(x.support[0])] += 1e-9
    assert not adjudicate(result, off)
    exact_copy = result.estimate.copy()
    assert adjudicate(result, exact_copy)


def test_correct_support_implies_exact():
    for seed in range(10):
        A = gaussian_matrix(40, 80, seed=200 + seed)
        x = generate_signal("uniform", 5, 80, seed=300 + seed)
        y = A.entries @ x.values
        result = omp_run(A, y, iterations=5)
        if sorted(result.selected) == sorted(int(i) for i in x.support):
            assert adjudicate(result, x)


def test_diagnostic_trace_shapes_and_unit_direction():
    A = gaussian_matrix(80, 160, seed=16)
    x = generate_signal("decaying", 8, 160, seed=17, param=1.2)
    trace = selection_diagnostic(A, x, strongly_decaying(1.2))
    K = x.support.size
    assert trace.iterations() == K
    for attr in ("sigma_min", "offsupport_correlation", "threshold", "correct_selection"):
        assert len(getattr(trace, attr)) == K
    assert all(s == trace.sigma_min[0] for s in trace.sigma_min)
    assert all(t > 0 for t in trace.threshold)


def test_diagnostic_first_iteration_direction():
    # with nothing selected the scored direction is y / ||y||
    A = gaussian_matrix(60, 120, seed=18)
    x = generate_signal("gaussian", 6, 120, seed=19)
    y = A.entries @ x.values
    off = np.setdiff1d(np.arange(120), x.support)
    expected = np.max(np.abs(A.entries[:, off].T @ (y / np.linalg.norm(y))))
    trace = selection_diagnostic(A, x, cauchy_schwarz())
    assert trace.offsupport_correlation[0] == pytest.approx(expected, rel=1e-12)


def test_diagnostic_condition_implies_correct_selection():
    violations = 0
    held = 0
    for t in range(50):
        A = gaussian_matrix(100, 200, seed=split_seed(400, t, 0))
        x = generate_signal("decaying", 8, 200, seed=split_seed(400, t, 1), param=1.2)
        trace = selection_diagnostic(A, x, strongly_decaying(1.2))
        held += sum(trace.condition_held)
        violations += trace.violations()
    assert held > 0
    assert violations == 0
