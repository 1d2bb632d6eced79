import itertools

import numpy as np
import pytest

from sparsekit.convex import (
    InfeasibleError,
    RwConfig,
    _bp_equality_full,
    bp_denoise,
    bp_equality,
    l1_lp_problem,
    reweighted_l1,
    rw_constants,
    rw_error_recursion,
    tail_noise_level,
)
from sparsekit.ensembles import EnsembleSpec, NoiseSpec, SignalSpec, gen_matrix, gen_noise, gen_signal
from sparsekit.rip import ric_exact
from sparsekit.rng import CounterRng, stream_seed


from helpers import l1_vertex_oracle


class TestLpRecast:
    def test_objective_is_t_block(self):
        A = gen_matrix(EnsembleSpec("gaussian", 4, 6, seed=1))
        lp = l1_lp_problem(A, np.ones(4))
        assert lp.n_vars == 12
        np.testing.assert_array_equal(lp.c[:6], np.zeros(6))
        np.testing.assert_array_equal(lp.c[6:], np.ones(6))

    def test_constraints_encode_absolute_value(self):
        A = gen_matrix(EnsembleSpec("gaussian", 3, 5, seed=2))
        lp = l1_lp_problem(A, np.zeros(3))
        z = CounterRng(3).normal(5)
        t = np.abs(z) + 0.1
        w = np.concatenate([z, t])
        assert np.all(lp.A_ub @ w <= lp.b_ub)
        t_bad = np.abs(z) - 0.05
        assert np.any(lp.A_ub @ np.concatenate([z, t_bad]) > lp.b_ub)

    def test_complementarity_at_optimum(self):
        A = gen_matrix(EnsembleSpec("gaussian", 8, 16, seed=3))
        x = gen_signal(SignalSpec(16, 2, seed=4))
        z, t = _bp_equality_full(A, A @ x)
        assert np.max(t - np.abs(z)) <= 1e-7


class TestBpEquality:
    def test_square_invertible(self):
        S = CounterRng(5).normal(25).reshape(5, 5) + 5 * np.eye(5)
        u = CounterRng(6).normal(5)
        np.testing.assert_allclose(bp_equality(S, u), np.linalg.solve(S, u),
                                   atol=1e-8)

    def test_hand_example(self):
        A = np.array([[1.0, 0.0, 1.0], [0.0, 1.0, 1.0]])
        x = bp_equality(A, [1.0, 1.0])
        np.testing.assert_allclose(x, [0.0, 0.0, 1.0], atol=1e-8)
        assert abs(np.abs(x).sum() - 1.0) < 1e-8

    def test_zero_samples(self):
        A = gen_matrix(EnsembleSpec("gaussian", 4, 9, seed=7))
        assert np.array_equal(bp_equality(A, np.zeros(4)), np.zeros(9))

    def test_infeasible(self):
        with pytest.raises(InfeasibleError):
            bp_equality(np.array([[1.0, 0.0], [1.0, 0.0]]), [1.0, 2.0])

    def test_never_beats_planted_feasible_point(self):
        for seed in range(10):
            A = gen_matrix(EnsembleSpec("gaussian", 10, 24, seed=seed))
            x = gen_signal(SignalSpec(24, 3, seed=stream_seed(seed, "s")))
            xh = bp_equality(A, A @ x)
            assert np.abs(xh).sum() <= np.abs(x).sum() + 1e-7

    def test_matches_vertex_oracle(self):
        checked = 0
        for seed in range(30):
            A = gen_matrix(EnsembleSpec("gaussian", 6, 10, seed=stream_seed("oracle", seed)))
            x = gen_signal(SignalSpec(10, 2, seed=stream_seed("oracle-sig", seed)))
            u = A @ x
            oracle, unique = l1_vertex_oracle(A, u)
            if not unique:
                continue
            xh = bp_equality(A, u)
            np.testing.assert_allclose(xh, oracle, atol=1e-6)
            checked += 1
        assert checked >= 20

    def test_exact_recovery_all_sign_patterns(self):
        # near-orthonormal columns: every 2-sparse vector comes back exactly
        rng = CounterRng(stream_seed("signmat"))
        Q, _ = np.linalg.qr(rng.normal(14 * 10).reshape(14, 10))
        A = Q + 0.01 * rng.normal(14 * 10).reshape(14, 10)
        assert ric_exact(A, 6).delta <= 0.2
        for supp in itertools.combinations(range(10), 2):
            for signs in itertools.product([1.0, -1.0], repeat=2):
                x = np.zeros(10)
                x[list(supp)] = signs
                xh = bp_equality(A, A @ x)
                np.testing.assert_allclose(xh, x, atol=1e-6)


class TestBpDenoise:
    def test_large_eps_returns_zero(self):
        A = gen_matrix(EnsembleSpec("gaussian", 6, 12, seed=8))
        u = CounterRng(9).normal(6)
        assert np.array_equal(bp_denoise(A, u, np.linalg.norm(u) + 0.1),
                              np.zeros(12))

    def test_eps_zero_matches_equality(self):
        A = gen_matrix(EnsembleSpec("gaussian", 8, 20, seed=10))
        x = gen_signal(SignalSpec(20, 2, seed=11))
        np.testing.assert_allclose(bp_denoise(A, A @ x, 0.0),
                                   bp_equality(A, A @ x), atol=1e-10)

    def test_feasibility_and_stability(self):
        A = gen_matrix(EnsembleSpec("gaussian", 6, 10, seed=12))
        x = gen_signal(SignalSpec(10, 1, seed=13))
        e = gen_noise(NoiseSpec(6, 0.1, seed=14))
        u = A @ x + e
        xh = bp_denoise(A, u, 0.1)
        assert np.linalg.norm(A @ xh - u) <= 0.1 + 1e-8
        # error bounded by a moderate multiple of the noise level
        assert np.linalg.norm(xh - x) <= 20 * 0.1

    def test_l1_norm_nonincreasing_in_eps(self):
        A = gen_matrix(EnsembleSpec("gaussian", 8, 16, seed=15))
        x = gen_signal(SignalSpec(16, 3, seed=16))
        u = A @ x + gen_noise(NoiseSpec(8, 0.05, seed=17))
        norms = [np.abs(bp_denoise(A, u, eps)).sum()
                 for eps in (0.01, 0.05, 0.2, 0.5)]
        assert all(a >= b - 1e-7 for a, b in zip(norms, norms[1:]))

    def test_negative_eps_rejected(self):
        with pytest.raises(ValueError):
            bp_denoise(np.eye(2), [1.0, 0.0], -0.1)


class TestReweighted:
    def test_noiseless_fixed_point(self):
        A = gen_matrix(EnsembleSpec("gaussian", 16, 32, seed=18))
        x = gen_signal(SignalSpec(32, 2, seed=19))
        rep = reweighted_l1(A, A @ x, RwConfig(max_iters=3), x_ref=x)
        assert rep.reference_errors[0] <= 1e-7
        assert rep.reference_errors[-1] <= 1e-7

    def test_zero_samples(self):
        A = gen_matrix(EnsembleSpec("gaussian", 6, 12, seed=20))
        rep = reweighted_l1(A, np.zeros(6), RwConfig(max_iters=2))
        for est in rep.estimate_history:
            assert np.array_equal(est, np.zeros(12))

    def test_stability_schedule(self):
        cfg = RwConfig()
        assert cfg.stability(1) == pytest.approx(1e-3)
        assert cfg.stability(9) == pytest.approx(1 / 9000)
        cfg2 = RwConfig(a_schedule=lambda k: 0.5)
        assert cfg2.stability(4) == 0.5

    def test_noisy_improvement_direction_small(self):
        # median error ratio (last vs first iteration) stays below 1
        ratios = []
        for seed in range(12):
            A = gen_matrix(EnsembleSpec("gaussian", 32, 64, seed=stream_seed("rw", seed)))
            x = gen_signal(SignalSpec(64, 8, seed=stream_seed("rwsig", seed),
                                      random_signs=True))
            u_clean = A @ x
            e = gen_noise(NoiseSpec(32, 0.2 * np.linalg.norm(u_clean),
                                    seed=stream_seed("rwn", seed)))
            sigma = np.linalg.norm(e) / np.sqrt(32)
            eps = np.sqrt(sigma**2 * (32 + 2 * np.sqrt(64)))
            rep = reweighted_l1(A, u_clean + e, RwConfig(epsilon=eps, max_iters=5),
                                x_ref=x)
            ratios.append(rep.reference_errors[-1] / rep.reference_errors[0])
        assert np.median(ratios) < 1.0


class TestErrorRecursion:
    def test_constants(self):
        rho, alpha = rw_constants(0.2)
        assert rho == pytest.approx(np.sqrt(2) * 0.2 / 0.8)
        assert alpha == pytest.approx(2 * np.sqrt(1.2) / np.sqrt(0.8))

    def test_delta_range_enforced(self):
        with pytest.raises(ValueError):
            rw_constants(np.sqrt(2) - 1)

    def test_noiseless_collapses(self):
        b = rw_error_recursion(10.0, 0.0, 0.2)
        assert b.L == 0.0 and b.iters_to_converge == 1
        np.testing.assert_array_equal(b.E, [0.0])

    def test_closed_form_example(self):
        b = rw_error_recursion(10.0, 0.1, 0.2)
        assert b.rho == pytest.approx(0.35355, abs=1e-5)
        assert b.alpha == pytest.approx(2.44949, abs=1e-5)
        assert b.E[0] == pytest.approx(0.75783, abs=1e-5)
        assert b.L == pytest.approx(0.25366, abs=1e-5)

    def test_limit_below_simple_bound(self):
        for delta in (0.05, 0.15, 0.3):
            for eps in (0.01, 0.2, 1.0):
                rho, alpha = rw_constants(delta)
                if 50.0 < 4 * alpha * eps / (1 - rho):
                    continue
                b = rw_error_recursion(50.0, eps, delta)
                assert b.L <= 2 * b.alpha * eps / (1 + b.rho) + 1e-12

    def test_sequence_monotone_and_fixed_point(self):
        b = rw_error_recursion(10.0, 0.5, 0.25, tol=1e-9)
        assert np.all(np.diff(b.E) <= 1e-15)
        assert np.all(b.E >= 0)
        L, frac = b.L, b.L / (10.0 - b.L)
        resid = L - (1 + frac) * b.alpha * 0.5 / (1 - b.rho * frac)
        assert abs(resid) < 1e-9

    def test_hypothesis_violation(self):
        with pytest.raises(ValueError):
            rw_error_recursion(0.1, 1.0, 0.2)

    def test_tail_noise_level(self):
        x = np.array([2.0, 1.0, 0.5, 0.25])
        got = tail_noise_level(x, 2, 0.1)
        tail = np.array([0.5, 0.25])
        want = 1.2 * (np.linalg.norm(tail) + np.abs(tail).sum() / np.sqrt(2)) + 0.1
        assert got == pytest.approx(want)
