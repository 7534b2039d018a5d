import math

import pytest

from ompbounds.phi import (
    cauchy_schwarz,
    gaussian_phi_probability,
    gaussian_phi_probability_raw,
    gaussian_piecewise,
    phi_eval,
    phi_partial_sum,
    ratio_probability_bound,
    strongly_decaying,
)

# frozen by term-by-term high-precision (40-digit) evaluation of the closed forms
SD12_AT_15 = 9.6591106801445993
SD12_PARTIAL_15 = 93.714045773059883
SD11_PARTIAL_15 = 110.54192483488603


def test_strongly_decaying_example_value():
    assert phi_eval(strongly_decaying(1.2), 15) == pytest.approx(SD12_AT_15, abs=1e-12)
    assert phi_eval(strongly_decaying(1.2), 15) == pytest.approx(9.6591, abs=1e-4)


@pytest.mark.parametrize(
    "phi", [cauchy_schwarz(), strongly_decaying(1.2), strongly_decaying(3.0), gaussian_piecewise(30)]
)
def test_all_families_are_one_at_one(phi):
    assert phi_eval(phi, 1) == pytest.approx(1.0, abs=1e-12)


def test_gaussian_piecewise_values():
    phi = gaussian_piecewise(30)
    assert phi_eval(phi, 29) == pytest.approx(28.5)
    assert phi_eval(phi, 30) == pytest.approx(28.5)
    assert phi_eval(phi, 28) == pytest.approx(28.0)
    with pytest.raises(ValueError):
        phi_eval(phi, 31)


def test_phi_eval_domain_errors():
    with pytest.raises(ValueError):
        phi_eval(cauchy_schwarz(), 0)
    with pytest.raises(ValueError):
        phi_eval(cauchy_schwarz(), -2)
    with pytest.raises(ValueError):
        strongly_decaying(1.0)
    with pytest.raises(ValueError):
        strongly_decaying(0.5)
    with pytest.raises(ValueError):
        gaussian_piecewise(0)


def test_partial_sums():
    assert phi_partial_sum(cauchy_schwarz(), 15) == pytest.approx(120.0)
    assert phi_partial_sum(strongly_decaying(1.2), 15) == pytest.approx(SD12_PARTIAL_15, rel=1e-12)
    assert phi_partial_sum(strongly_decaying(1.1), 15) == pytest.approx(SD11_PARTIAL_15, rel=1e-12)
    # piecewise: sum(1..28) + 2 * 28.5
    assert phi_partial_sum(gaussian_piecewise(30), 30) == pytest.approx(463.0)


def test_strongly_decaying_is_bounded_by_limit():
    # the closed form approaches (alpha+1)/(alpha-1) from below; in floats it
    # saturates to the cap exactly once tanh rounds to 1
    for alpha in (1.01, 1.2, 2.0, 3.0):
        cap = (alpha + 1.0) / (alpha - 1.0)
        for t in range(1, 201):
            assert phi_eval(strongly_decaying(alpha), t) <= cap
        assert phi_eval(strongly_decaying(alpha), 10) < cap


def test_strongly_decaying_alpha_to_one_recovers_t():
    phi = strongly_decaying(1.0 + 1e-6)
    for t in range(1, 21):
        assert abs(phi_eval(phi, t) - t) <= 1e-3


def test_strongly_decaying_large_t_stable():
    # tanh form must not overflow for huge t * log(alpha)
    assert phi_eval(strongly_decaying(1e6), 500) == pytest.approx(1.0 + 2e-6, rel=1e-4)


@pytest.mark.parametrize(
    "phi",
    [cauchy_schwarz(), strongly_decaying(1.1), strongly_decaying(2.5), gaussian_piecewise(200)],
)
def test_phi_nondecreasing_in_t(phi):
    upper = 200
    values = [phi_eval(phi, t) for t in range(1, upper + 1)]
    assert all(b >= a - 1e-12 for a, b in zip(values, values[1:]))


def test_phi_nonincreasing_in_alpha():
    alphas = [1.01 + 0.01 * i for i in range(200)]
    for t in (2, 5, 20):
        values = [phi_eval(strongly_decaying(a), t) for a in alphas]
        assert all(b <= a + 1e-12 for a, b in zip(values, values[1:]))


def test_ratio_bound_matches_rounded_specialization():
    # the rounded form 1 - 1.87 * 0.796^p agrees to 1e-2 relative for p = 1..50
    for p in range(1, 51):
        exact = ratio_probability_bound(0.95, 1.505, p)
        rounded = 1.0 - 1.87 * 0.796**p
        assert abs(exact - rounded) <= 1e-2 * abs(exact)


def test_ratio_bound_spot_values():
    # frozen from 40-digit evaluation
    assert ratio_probability_bound(0.95, 1.505, 1) == pytest.approx(-0.48830316703436107, abs=1e-12)
    assert ratio_probability_bound(0.95, 1.505, 20) == pytest.approx(0.98050654490425756, abs=1e-12)
    assert ratio_probability_bound(0.95, 1.505, 50) >= 0.9999
    assert ratio_probability_bound(0.95, 1.505, 20) == pytest.approx(1.0 - 1.87 * 0.796**20, abs=1e-3)


def test_ratio_bound_domain():
    with pytest.raises(ValueError):
        ratio_probability_bound(0.0, 1.505, 3)
    with pytest.raises(ValueError):
        ratio_probability_bound(1.2, 1.505, 3)
    with pytest.raises(ValueError):
        ratio_probability_bound(0.95, -1.0, 3)
    with pytest.raises(ValueError):
        ratio_probability_bound(0.95, 1.505, 0)


def test_gaussian_phi_probability_values():
    assert gaussian_phi_probability(1) == 0.0
    assert gaussian_phi_probability_raw(1) < 0.0
    assert gaussian_phi_probability_raw(10) == pytest.approx(0.056638339339150772, abs=1e-12)
    assert gaussian_phi_probability(200) == pytest.approx(0.99332295116547619, abs=1e-12)
    assert gaussian_phi_probability(100) > gaussian_phi_probability(50)
