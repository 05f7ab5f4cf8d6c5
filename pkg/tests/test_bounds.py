import math

import numpy as np
import pytest

from psiontic import bounds, circuit, ontology
from psiontic.bounds import omega_upper_bound, random_povm_search, region_data, sigma_min, sigma_parametric


def test_sigma_examples():
    p = circuit.solve_params(0.5, circuit.min_n(0.5))
    assert sigma_parametric(0.5, p.n, p.alpha, p.beta) <= 1e-10
    assert sigma_parametric(math.pi / 3, 1, math.pi, 0.0) == pytest.approx(0.1339745962155614, abs=1e-15)
    assert sigma_parametric(math.pi / 2, 1, math.pi, 0.0) <= 1e-30


def test_sigma_closed_form_matches_simulation(rng):
    for _ in range(500):
        n = int(rng.integers(1, 7))
        theta, alpha, beta = rng.uniform(0.01, math.pi / 2), rng.uniform(0, 2 * math.pi), rng.uniform(0, 2 * math.pi)
        closed = bounds.sigma_closed_form(theta, n, alpha, beta)
        assert bounds.sigma_simulated(theta, n, alpha, beta) == pytest.approx(closed, abs=1e-10)


def test_sigma_min_examples():
    assert sigma_min(math.pi / 4, 2) == 0.0
    assert sigma_min(math.pi / 3, 1, confirm=True) == pytest.approx(0.1339745962155614, abs=1e-12)
    values = [sigma_min(th, 2) for th in (1e-2, 1e-4, 1e-6)]
    assert values[0] < values[1] < values[2] < 1
    assert values[2] == pytest.approx(1.0, abs=1e-5)


def test_optimal_sigma_reports_parameters():
    res = bounds.optimal_sigma(math.pi / 3, 2)
    assert res.zero_attainable and res.sigma == 0.0 and res.attained <= 1e-20
    res = bounds.optimal_sigma(0.3, 2)
    assert not res.zero_attainable and (res.alpha, res.beta) == (math.pi, 0.0)


def test_grid_never_beats_alpha_pi_beta_zero():
    for theta in np.linspace(0.05, 1.5, 12):
        for n in (1, 2, 3, 4):
            if circuit.is_feasible(theta, n):
                continue
            grid, _, _ = bounds.grid_minimize_sigma(theta, n)
            assert grid >= sigma_min(theta, n) - 1e-8


def test_omega_upper_examples():
    assert omega_upper_bound(math.pi / 6, 1) == pytest.approx(0.5, abs=1e-12)
    assert omega_upper_bound(math.pi / 4, 2) == 0.0
    for theta in np.linspace(0.02, math.pi / 2, 40):
        vals = [omega_upper_bound(theta, n) for n in range(1, 7)]
        assert all(b <= a + 1e-12 for a, b in zip(vals, vals[1:]))


def test_region_data_rows():
    pts = region_data(n_max=3, grid_size=16)
    assert len(pts) == 48
    for p in pts:
        if p.n == 1:
            assert p.omega_upper == pytest.approx(1 - p.delta, abs=1e-9)
        if p.delta == 1.0:
            assert p.omega_upper == 0.0
        assert 0 <= p.omega_upper <= 1
    theta = math.asin(math.sin(math.pi / 4))
    assert omega_upper_bound(theta, 2) == 0.0


def test_region_csv_format():
    text = bounds.region_csv(region_data(n_max=1, grid_size=3))
    assert text.splitlines() == [
        "delta,n,omega_upper", "0.333333333,1,0.666666667", "0.666666667,1,0.333333333", "1,1,0",
    ]


def test_random_search_examples():
    res = random_povm_search(math.pi / 3, 1, 20000, seed=1)
    assert res.found and res.min_sigma >= 0.1339745962155614 - 1e-6
    res = random_povm_search(math.pi / 4, 2, 2000, seed=1)
    assert res.min_sigma >= -1e-10
    empty = random_povm_search(math.pi / 4, 2, 0, seed=1)
    assert empty.min_sigma == math.inf and not empty.found
    assert random_povm_search(1.0, 2, 500, seed=4) == random_povm_search(1.0, 2, 500, seed=4)


def test_haar_unitaries_are_unitary(rng):
    u = bounds.haar_unitaries(4, 10, rng)
    for m in u:
        np.testing.assert_allclose(m.conj().T @ m, np.eye(4), atol=1e-12)


def test_overlap_bound_from_models(rng):
    """A model within epsilon of the optimal measurement obeys omega**n <= sigma_min + 2**n epsilon."""
    checked = 0
    for _ in range(300):
        n = int(rng.integers(1, 4))
        theta = rng.uniform(0.05, math.pi / 2)
        if circuit.is_feasible(theta, n):
            params = circuit.solve_params(theta, n)
        else:
            params = circuit.CircuitParams(n, theta, math.pi, 0.0)
            checked += 1
        k = int(rng.integers(2, 5))
        model = ontology.OntModel(rng.dirichlet(np.ones(k)), rng.dirichlet(np.ones(k)))
        resp = ontology.posterior_response(model, params)
        rep = ontology.max_deviation(model, resp, params)
        assert rep.omega ** n <= sigma_min(theta, n) + 2**n * rep.epsilon + 1e-9
    assert checked > 50
