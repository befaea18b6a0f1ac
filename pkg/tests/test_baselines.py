import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from qiils.baselines import (GcsParams, LqaConfig, gcs_energy, gcs_state, gcs_z_expectations,
                             lqa_energy, lqa_gradient, run_config, run_gcs, run_lqa)
from qiils.graph import Graph, cut_value, gen_regular, random_graph
from qiils.oracle import brute_force_maxcut, exact_expectation
from qiils.solver import SolverConfig, random_angles, run

from conftest import small_graphs


# ------------------------------------------------------------------------ LQA

def test_lqa_energy_endpoints(triangle):
    q = np.full(3, math.pi / 4)
    assert lqa_energy(triangle, 0.0, 0.5, q) == pytest.approx(-3.0)
    assert lqa_energy(triangle, 1.0, 0.5, np.zeros(3)) == pytest.approx(0.5 * 3)


@pytest.mark.parametrize("s", [0.0, 0.3, 1.0])
def test_lqa_gradient_finite_differences(s):
    for g in small_graphs(5, seed=21):
        theta = random_angles(g.n, np.random.default_rng(g.n)) * 0.9 + 0.05
        an = lqa_gradient(g, s, 0.5, theta)
        fd = np.empty(g.n)
        for j in range(g.n):
            e = np.zeros(g.n)
            e[j] = 1e-5
            fd[j] = (lqa_energy(g, s, 0.5, theta + e) - lqa_energy(g, s, 0.5, theta - e)) / 2e-5
        assert np.max(np.abs(an - fd)) <= 1e-6 * max(1.0, np.max(np.abs(an)))


def _lqa_reference(g, cfg):
    theta = random_angles(g.n, np.random.default_rng(cfg.seed))
    cuts = []
    for k in range(1, cfg.steps + 1):
        grad = lqa_gradient(g, k / cfg.steps, cfg.gamma, theta)
        theta = np.clip(theta - cfg.eta * grad, 0, math.pi / 2)
        cuts.append(cut_value(g, (theta > math.pi / 4).astype(int)))
    return np.array(cuts)


def test_lqa_kernel_matches_reference():
    g = gen_regular(30, 3, weighted=True, seed=0)
    cfg = LqaConfig(gamma=0.5, eta=0.2, steps=60, seed=3)
    tr = run_lqa(g, cfg)
    np.testing.assert_allclose([r.cut for r in tr.records], _lqa_reference(g, cfg))


def test_lqa_trace():
    g = gen_regular(100, 3, seed=1)
    tr = run_lqa(g, LqaConfig(steps=300, seed=2))
    assert len(tr.records) == 300
    best = tr.best_cuts()
    assert np.all(np.diff(best) >= 0)
    assert cut_value(g, tr.best_bits) == tr.best_cut
    assert run_lqa(g, LqaConfig(steps=300, seed=2)).same_numbers(tr)


def test_lqa_config_checks():
    with pytest.raises(ValueError):
        LqaConfig(steps=0)
    with pytest.raises(ValueError):
        LqaConfig(eta=0.0)


def test_lqa_via_solver_config():
    g = gen_regular(40, 3, seed=0)
    tr = run(g, SolverConfig(algo="lqa", max_sweeps=50, seed=1))
    assert tr.algo == "lqa" and len(tr.records) == 50
    tr2 = run(g, SolverConfig(algo="lqa", max_sweeps=50, sweep_budget=70, seed=1))
    assert len(tr2.records) == 70


# ------------------------------------------------------------------------ GCS

def test_zero_parameters_give_plus_state():
    n = 4
    psi = gcs_state(GcsParams.zeros(n))
    np.testing.assert_allclose(psi, np.full(16, 0.25))
    g = random_graph(n, 5, seed=0)
    assert gcs_energy(g, 0.0, psi) == pytest.approx(-n, abs=1e-12)
    np.testing.assert_allclose(gcs_z_expectations(psi, n), 0.0, atol=1e-15)


@given(seed=st.integers(0, 1000), scale=st.floats(0.01, 3.0))
def test_norm_preserved(seed, scale):
    n = 5
    rng = np.random.default_rng(seed)
    vec = scale * rng.standard_normal(6 * n + n * (n - 1) // 2)
    psi = gcs_state(GcsParams.from_vector(vec, n))
    assert abs(np.linalg.norm(psi) - 1.0) < 1e-12


def test_energy_matches_matrix_free_oracle():
    g = random_graph(5, 7, seed=2, signed=True)
    vec = 0.7 * np.random.default_rng(1).standard_normal(6 * 5 + 10)
    psi = gcs_state(GcsParams.from_vector(vec, 5))
    for s in (0.0, 0.4, 1.0):
        assert gcs_energy(g, s, psi) == pytest.approx(exact_expectation(g, s, psi), abs=1e-12)


def test_y_rotation_moves_z():
    n = 1
    p = GcsParams.zeros(n)
    p.x[0, 1] = 0.2  # exp(-i 0.2 Y) turns |+> by 0.4 about y
    z = gcs_z_expectations(gcs_state(p), n)
    assert abs(z[0]) == pytest.approx(math.sin(0.4))


def test_coupling_only_changes_phases():
    n = 3
    p = GcsParams.zeros(n)
    p.B[0, 1] = p.B[1, 0] = 0.37
    psi = gcs_state(p)
    np.testing.assert_allclose(np.abs(psi), np.full(8, 8 ** -0.5))


def test_parameter_vector_roundtrip():
    n = 4
    vec = np.arange(6 * n + 6, dtype=float)
    p = GcsParams.from_vector(vec, n)
    np.testing.assert_array_equal(p.to_vector(), vec)
    assert np.array_equal(p.B, p.B.T)
    with pytest.raises(ValueError):
        GcsParams(np.zeros((2, 3)), np.zeros((2, 3)), np.ones((2, 2)))


def test_single_edge_solved(edge):
    tr = run_gcs(edge, steps=50, step_size=0.1, seed=0)
    assert tr.best_cut == 1.0
    assert cut_value(edge, tr.best_bits) == 1.0


def test_gcs_small_graph_reaches_optimum(triangle):
    tr = run_gcs(triangle, steps=60, step_size=0.1, seed=1)
    assert tr.best_cut == brute_force_maxcut(triangle).value


def test_gcs_limits():
    with pytest.raises(ValueError):
        run_gcs(gen_regular(18, 3, seed=0))
    with pytest.raises(ValueError):
        gcs_state(GcsParams.zeros(3), n=4)


def test_run_config_rejects_search_algos(edge):
    with pytest.raises(ValueError):
        run_config(edge, SolverConfig(algo="qiils"))


@pytest.mark.xfail(strict=True, reason="eta = 0.5 pulls both angles onto the same float "
                   "at pi/4, a stationary point (see notes/decisions.md)")
def test_lqa_single_edge(edge):
    tr = run_lqa(edge, LqaConfig(gamma=0.5, eta=0.5, steps=200, seed=0))
    assert tr.records[-1].cut == 1.0


@pytest.mark.parametrize("seed", range(5))
def test_lqa_single_edge_symmetric_collapse(edge, seed):
    # with eta = 0.5 the early transverse steps land both angles on the same
    # value; the antisymmetric mode is then exactly zero and cannot grow
    cfg = LqaConfig(gamma=0.5, eta=0.5, steps=200, seed=seed)
    theta = random_angles(2, np.random.default_rng(seed))
    for k in range(1, cfg.steps + 1):
        s = k / cfg.steps
        theta = np.clip(theta - cfg.eta * lqa_gradient(edge, s, cfg.gamma, theta), 0, math.pi / 2)
    assert theta[0] == theta[1] == pytest.approx(math.pi / 4, abs=1e-12)
    assert run_lqa(edge, cfg).records[-1].cut == 0.0


@pytest.mark.parametrize("eta", [0.2, 0.1])
def test_lqa_single_edge_smaller_step(edge, eta):
    for seed in range(5):
        tr = run_lqa(edge, LqaConfig(gamma=0.5, eta=eta, steps=200, seed=seed))
        assert tr.records[-1].cut == 1.0


def test_single_qubit_rotation_matches_expm():
    from scipy.linalg import expm
    p = GcsParams.zeros(1)
    p.x[0] = [math.pi / 4, 0, 0]
    X = np.array([[0, 1], [1, 0]])
    ref = expm(-1j * math.pi / 4 * X) @ np.full(2, 2 ** -0.5)
    np.testing.assert_allclose(gcs_state(p), ref, atol=1e-15)
    p.x[0] = [0.3, -0.7, 1.1]
    Y = np.array([[0, -1j], [1j, 0]])
    Z = np.diag([1, -1])
    ref = expm(-1j * (0.3 * X - 0.7 * Y + 1.1 * Z)) @ np.full(2, 2 ** -0.5)
    np.testing.assert_allclose(gcs_state(p), ref, atol=1e-14)


def test_gcs_energy_n8_matches_oracle():
    g = gen_regular(8, 3, weighted=True, seed=1)
    vec = np.random.default_rng(8).uniform(-1, 1, 6 * 8 + 28)
    psi = gcs_state(GcsParams.from_vector(vec, 8))
    assert gcs_energy(g, 0.6, psi) == pytest.approx(exact_expectation(g, 0.6, psi), abs=1e-10)
