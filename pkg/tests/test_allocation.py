"""Budget allocation: marginals, water-filling and the grid-search oracle."""

import numpy as np
import pytest

from bmr import (
    AllocationProblem,
    ChannelParams,
    EnvModel,
    brute_force,
    effective_noise,
    marginal_rate,
    mode_rate,
    optimize,
    scheme_rate,
    waterfill,
)


def objective(t, allocation):
    return float(np.sum(mode_rate(np.asarray(t, dtype=float), np.maximum(allocation, 0.0))))


class TestMarginalRate:
    def test_richardson_self_check(self):
        """The default step and a 10x coarser one agree to three digits."""
        fine = marginal_rate(1.0, 4.0)
        h = 10.0 * max(1e-6, 1e-6 * 4.0)
        from bmr.rates import _rate

        coarse = (_rate(1.0, 4.0 + h) - _rate(1.0, 4.0 - h)) / (2.0 * h)
        assert fine == pytest.approx(coarse, rel=1e-3)

    def test_concavity_probe(self):
        for t in (0.1, 1.0, 10.0):
            assert marginal_rate(t, 0.0) > marginal_rate(t, 8.0)

    def test_saturates_at_large_budgets(self):
        assert marginal_rate(1.0, 1e6) < 1e-5

    def test_positive(self):
        rng = np.random.default_rng(31)
        t = 10.0 ** rng.uniform(-3, 3, 100)
        n_k = rng.uniform(0.0, 20.0, 100)
        assert np.all(marginal_rate(t, n_k) > 0.0)


class TestOptimize:
    def test_uniform_noise_gives_uniform_split(self):
        problem = AllocationProblem(t=np.full(6, 0.7), budget=18.0)
        np.testing.assert_allclose(optimize(problem), np.full(6, 3.0), atol=1e-9)

    def test_zero_budget(self):
        problem = AllocationProblem(t=np.array([0.5, 2.0]), budget=0.0)
        np.testing.assert_array_equal(optimize(problem), np.zeros(2))

    def test_budget_binds(self):
        rng = np.random.default_rng(32)
        for _ in range(20):
            n = int(rng.integers(1, 9))
            problem = AllocationProblem(
                t=10.0 ** rng.uniform(-2, 2, n), budget=float(rng.uniform(0.1, 64.0))
            )
            allocation = optimize(problem)
            assert np.all(allocation >= 0.0)
            assert abs(allocation.sum() - problem.budget) <= problem.tol

    def test_matches_grid_search_three_modes(self):
        """Frozen oracle point: collective noise at s = 2, eta = 0.7, budget 24."""
        params = ChannelParams(n=3, eta=0.7, s=2.0, n_mean=8.0)
        t = effective_noise(params, EnvModel(params), "collective").t
        problem = AllocationProblem(t=t, budget=24.0)
        gap = objective(t, optimize(problem)) - objective(t, brute_force(problem, 0.01))
        assert gap >= -1e-4
        assert abs(gap) < 1e-3  # the optimizer sits just above the 0.01 grid

    def test_permutation_equivariance(self):
        rng = np.random.default_rng(33)
        t = np.array([0.2, 1.5, 0.9, 4.0])
        perm = rng.permutation(4)
        base = optimize(AllocationProblem(t=t, budget=10.0))
        permuted = optimize(AllocationProblem(t=t[perm], budget=10.0))
        np.testing.assert_allclose(permuted, base[perm], atol=1e-9)

    def test_lower_noise_gets_more(self):
        rng = np.random.default_rng(34)
        for _ in range(25):
            n = int(rng.integers(2, 6))
            t = 10.0 ** rng.uniform(-2, 1, n)
            allocation = optimize(AllocationProblem(t=t, budget=float(rng.uniform(1.0, 40.0))))
            order = np.argsort(t)
            assert np.all(np.diff(allocation[order]) <= 1e-8)

    def test_collective_pairing_symmetry(self):
        """Mirrored collective modes carry equal squeezing, hence equal budget."""
        for n in (4, 7, 10):
            result = scheme_rate(ChannelParams(n=n, eta=0.7, s=1.5, n_mean=8.0), "collective")
            np.testing.assert_allclose(result.allocation, result.allocation[::-1], atol=1e-8)

    def test_waterfill_batch_matches_loop(self):
        rng = np.random.default_rng(35)
        t = 10.0 ** rng.uniform(-2, 2, (5, 4))
        budgets = rng.uniform(0.5, 32.0, 5)
        stacked = waterfill(t, budgets)
        for row in range(5):
            np.testing.assert_array_equal(stacked[row], waterfill(t[row], budgets[row]))

    def test_problem_validation(self):
        with pytest.raises(ValueError):
            AllocationProblem(t=np.array([0.0, 1.0]), budget=1.0)
        with pytest.raises(ValueError):
            AllocationProblem(t=np.array([1.0]), budget=-1.0)
        with pytest.raises(ValueError):
            AllocationProblem(t=np.array([1.0]), budget=1.0, tol=0.0)


class TestBruteForce:
    def test_single_mode_gets_everything(self):
        problem = AllocationProblem(t=np.array([0.4]), budget=5.0)
        np.testing.assert_array_equal(brute_force(problem, 0.01), [5.0])

    def test_symmetric_two_modes(self):
        problem = AllocationProblem(t=np.array([0.8, 0.8]), budget=12.0)
        allocation = brute_force(problem, 0.01)
        assert abs(allocation[0] - allocation[1]) <= 12.0 * 0.01 + 1e-12

    def test_rejects_large_problems(self):
        with pytest.raises(ValueError):
            brute_force(AllocationProblem(t=np.ones(5), budget=1.0), 0.1)

    def test_two_mode_dominance_point(self):
        t = np.array([0.1, 3.0])
        problem = AllocationProblem(t=t, budget=16.0)
        assert objective(t, optimize(problem)) >= objective(t, brute_force(problem, 0.01)) - 1e-4

    def test_randomized_dominance_suite(self):
        rng = np.random.default_rng(36)
        for _ in range(25):
            n = int(rng.integers(2, 4))
            t = 10.0 ** rng.uniform(-1.5, 1.0, n)
            problem = AllocationProblem(t=t, budget=float(rng.uniform(0.5, 32.0)))
            assert objective(t, optimize(problem)) >= objective(t, brute_force(problem, 0.01)) - 1e-4
