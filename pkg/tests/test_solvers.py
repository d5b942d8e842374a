#!/usr/bin/env python3
"""
Test the min-max bisection splitter and the Bland-rule simplex
"""

import math
import os
import sys

import numpy as np
import pytest
from scipy.optimize import linprog

# Add parent directory to path for imports
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from chainsim.solvers import (
    LoadMode,
    LpStatus,
    SharedCap,
    SplitCandidate,
    SplitProblem,
    greedy_bisection_minmax,
    linprog_bland,
    simplex_min_cost,
)


def grid_minmax(loads, demand, step=1e-3):
    """Best max(u1 + x, u2 + demand - x) over a grid of the first share"""
    best = math.inf
    for share in np.arange(0.0, 1.0 + step / 2, step):
        x = share * demand
        best = min(best, max(loads[0] + x, loads[1] + demand - x))
    return best


class TestBisection:
    """Test greedy_bisection_minmax"""

    def test_single_candidate(self):
        problem = SplitProblem([SplitCandidate(load=3.0, capacity=100.0)], demand=10.0)
        solution = greedy_bisection_minmax(problem)
        assert solution.ratios == pytest.approx([1.0])
        assert solution.objective_value == pytest.approx(13.0)

    def test_symmetric_split(self):
        problem = SplitProblem([SplitCandidate(0.0, 100.0), SplitCandidate(0.0, 100.0)],
                               demand=10.0)
        solution = greedy_bisection_minmax(problem)
        assert solution.ratios == pytest.approx([0.5, 0.5], abs=1e-5)
        assert solution.objective_value == pytest.approx(5.0, abs=1e-4)
        assert math.fsum(solution.ratios) == pytest.approx(1.0)

    def test_loaded_candidate_gets_nothing(self):
        problem = SplitProblem([SplitCandidate(10.0, 100.0), SplitCandidate(0.0, 100.0)],
                               demand=10.0)
        solution = greedy_bisection_minmax(problem)
        assert solution.ratios == pytest.approx([0.0, 1.0], abs=1e-5)
        assert solution.objective_value == pytest.approx(10.0, abs=1e-4)
        assert solution.objective_value == pytest.approx(grid_minmax([10.0, 0.0], 10.0), abs=1e-2)

    @pytest.mark.parametrize("loads,demand", [([2.0, 7.0], 10.0), ([0.0, 3.0], 4.0),
                                              ([5.0, 5.0], 1.0)])
    def test_matches_grid_search(self, loads, demand):
        problem = SplitProblem([SplitCandidate(u, 1000.0) for u in loads], demand=demand)
        solution = greedy_bisection_minmax(problem)
        assert solution.objective_value == pytest.approx(grid_minmax(loads, demand),
                                                         abs=demand * 1e-3)

    def test_link_cap_limits_share(self):
        problem = SplitProblem([SplitCandidate(0.0, 100.0, link_cap=2.0),
                                SplitCandidate(5.0, 100.0)], demand=10.0)
        solution = greedy_bisection_minmax(problem)
        assert solution.ratios[0] == pytest.approx(0.2, abs=1e-5)
        assert solution.objective_value == pytest.approx(13.0, abs=1e-4)

    def test_utilization_mode(self):
        """Level is (u + x) / capacity: the larger candidate takes more"""
        problem = SplitProblem([SplitCandidate(0.0, 100.0), SplitCandidate(0.0, 300.0)],
                               demand=40.0)
        solution = greedy_bisection_minmax(problem, mode=LoadMode.UTILIZATION)
        assert solution.ratios == pytest.approx([0.25, 0.75], abs=1e-5)
        assert solution.objective_value == pytest.approx(0.1, abs=1e-6)

    def test_shortfall_is_infeasible(self):
        problem = SplitProblem([SplitCandidate(0.0, 3.0), SplitCandidate(0.0, 3.0)], demand=10.0)
        solution = greedy_bisection_minmax(problem)
        assert not solution.feasible
        assert solution.objective_value == math.inf

    def test_shared_caps_not_supported(self):
        problem = SplitProblem([SplitCandidate(0.0, 10.0), SplitCandidate(0.0, 10.0)], demand=1.0,
                               shared_caps=[SharedCap([0, 1], 5.0)])
        with pytest.raises(ValueError):
            greedy_bisection_minmax(problem)


class TestSplitTypes:
    def test_candidate_validation(self):
        with pytest.raises(ValueError):
            SplitCandidate(load=5.0, capacity=1.0)
        with pytest.raises(ValueError):
            SplitCandidate(load=0.0, capacity=1.0, link_cap=-1.0)

    def test_problem_validation(self):
        with pytest.raises(ValueError):
            SplitProblem([], demand=1.0)
        with pytest.raises(ValueError):
            SplitProblem([SplitCandidate(0.0, 1.0)], demand=0.0)
        with pytest.raises(ValueError):
            SplitProblem([SplitCandidate(0.0, 1.0)], demand=1.0, shared_caps=[SharedCap([1], 1.0)])


class TestSimplex:
    """Test linprog_bland and simplex_min_cost"""

    def test_cheapest_candidate_takes_all(self):
        problem = SplitProblem([SplitCandidate(0.0, math.inf, unit_cost=1.0),
                                SplitCandidate(0.0, math.inf, unit_cost=2.0)], demand=1.0)
        solution = simplex_min_cost(problem)
        assert solution.ratios == pytest.approx([1.0, 0.0])
        assert solution.objective_value == pytest.approx(1.0)

    def test_capped_cheapest_candidate(self):
        problem = SplitProblem([SplitCandidate(0.0, math.inf, unit_cost=1.0, link_cap=0.6),
                                SplitCandidate(0.0, math.inf, unit_cost=2.0)], demand=1.0)
        solution = simplex_min_cost(problem)
        assert solution.ratios == pytest.approx([0.6, 0.4])
        assert solution.objective_value == pytest.approx(1.4)

    def test_capacity_shortfall(self):
        problem = SplitProblem([SplitCandidate(0.0, math.inf, unit_cost=1.0, link_cap=0.3),
                                SplitCandidate(0.0, math.inf, unit_cost=2.0, link_cap=0.3)],
                               demand=1.0)
        solution = simplex_min_cost(problem)
        assert not solution.feasible

    def test_shared_cap_couples_candidates(self):
        """The two cheap candidates share a link that carries half the demand"""
        problem = SplitProblem(
            [SplitCandidate(0.0, math.inf, unit_cost=1.0),
             SplitCandidate(0.0, math.inf, unit_cost=1.5),
             SplitCandidate(0.0, math.inf, unit_cost=3.0)],
            demand=2.0,
            shared_caps=[SharedCap([0, 1], 1.0)],
        )
        solution = simplex_min_cost(problem)
        assert solution.ratios == pytest.approx([0.5, 0.0, 0.5])

    def test_compute_headroom_bounds_share(self):
        problem = SplitProblem([SplitCandidate(8.0, 10.0, unit_cost=0.0),
                                SplitCandidate(0.0, 10.0, unit_cost=1.0)], demand=5.0)
        solution = simplex_min_cost(problem)
        assert solution.ratios == pytest.approx([0.4, 0.6])

    @pytest.mark.parametrize("seed", range(8))
    def test_matches_scipy(self, seed):
        rng = np.random.default_rng(seed)
        n, m = 4, 3
        c = rng.uniform(0.1, 2.0, size=n)
        A_ub = rng.uniform(0.0, 1.0, size=(m, n))
        x0 = rng.dirichlet(np.ones(n))
        b_ub = A_ub @ x0 + rng.uniform(0.0, 0.2, size=m)
        A_eq, b_eq = np.ones((1, n)), np.array([1.0])

        ours = linprog_bland(c, A_ub, b_ub, A_eq, b_eq)
        oracle = linprog(c, A_ub=A_ub, b_ub=b_ub, A_eq=A_eq, b_eq=b_eq, bounds=[(0, None)] * n)
        assert ours.optimal and oracle.success
        assert ours.objective == pytest.approx(oracle.fun, abs=1e-8)
        assert np.all(A_ub @ ours.x <= b_ub + 1e-9)
        assert ours.x.sum() == pytest.approx(1.0)

    def test_infeasible_lp(self):
        result = linprog_bland([1.0, 1.0], A_ub=[[1.0, 1.0]], b_ub=[1.0],
                               A_eq=[[1.0, 1.0]], b_eq=[2.0])
        assert result.status == LpStatus.INFEASIBLE

    def test_unbounded_lp(self):
        result = linprog_bland([-1.0, 0.0], A_ub=[[0.0, 1.0]], b_ub=[1.0])
        assert result.status == LpStatus.UNBOUNDED

    def test_degenerate_lp_terminates(self):
        """Beale's cycling example; Bland's rule must reach the optimum"""
        c = [-0.75, 150.0, -0.02, 6.0]
        A_ub = [[0.25, -60.0, -0.04, 9.0],
                [0.5, -90.0, -0.02, 3.0],
                [0.0, 0.0, 1.0, 0.0]]
        b_ub = [0.0, 0.0, 1.0]
        result = linprog_bland(c, A_ub, b_ub)
        assert result.optimal
        assert result.objective == pytest.approx(-0.05)

    def test_negative_rhs_needs_phase_one(self):
        """x1 + x2 >= 2 written as -x1 - x2 <= -2"""
        result = linprog_bland([1.0, 3.0], A_ub=[[-1.0, -1.0]], b_ub=[-2.0])
        assert result.optimal
        assert list(result.x) == pytest.approx([2.0, 0.0])


def linprog_minmax(problem, scales):
    """Min-max level of a split problem solved as an LP on (x, t)"""
    n = len(problem.candidates)
    c = np.zeros(n + 1)
    c[-1] = 1.0
    A_ub = np.zeros((n, n + 1))
    b_ub = np.zeros(n)
    for j, (candidate, s) in enumerate(zip(problem.candidates, scales)):
        A_ub[j, j] = 1.0 / s
        A_ub[j, -1] = -1.0
        b_ub[j] = -candidate.load / s
    A_eq = np.append(np.ones(n), 0.0).reshape(1, -1)
    bounds = [(0.0, c_.headroom) for c_ in problem.candidates] + [(None, None)]
    result = linprog(c, A_ub=A_ub, b_ub=b_ub, A_eq=A_eq, b_eq=[problem.demand],
                     bounds=bounds, method="highs")
    return result.fun if result.status == 0 else math.inf


def random_split_problem(rng):
    candidates = []
    for _ in range(rng.integers(1, 5)):
        capacity = float(rng.uniform(1.0, 100.0))
        load = float(rng.uniform(0.0, 0.9)) * capacity
        link_cap = math.inf if rng.random() < 0.5 else float(rng.uniform(0.0, capacity - load))
        candidates.append(SplitCandidate(load, capacity, link_cap=link_cap))
    headroom = math.fsum(c.headroom for c in candidates)
    return SplitProblem(candidates, demand=float(rng.uniform(0.1, 1.5)) * max(headroom, 1.0))


@pytest.mark.slow
class TestBisectionAgainstLinprog:
    """1000 random problems of up to four candidates, both load modes"""

    @pytest.mark.parametrize("mode", [LoadMode.ABSOLUTE, LoadMode.UTILIZATION])
    def test_level_matches_linprog(self, mode):
        rng = np.random.default_rng(11)
        compared = 0
        for _ in range(1000):
            problem = random_split_problem(rng)
            headroom = math.fsum(c.headroom for c in problem.candidates)
            solution = greedy_bisection_minmax(problem, mode=mode)
            if problem.demand > headroom * (1 + 1e-9):
                assert not solution.feasible
                continue
            if problem.demand > headroom * (1 - 1e-9):
                continue
            scales = ([1.0] * len(problem.candidates) if mode == LoadMode.ABSOLUTE
                      else [c.capacity for c in problem.candidates])
            level_tol = 1e-6 * problem.demand / max(scales)
            assert solution.feasible
            assert solution.objective_value == pytest.approx(
                linprog_minmax(problem, scales), abs=2 * level_tol + 1e-9)
            assert math.fsum(solution.ratios) == pytest.approx(1.0)
            for ratio, candidate in zip(solution.ratios, problem.candidates):
                assert ratio * problem.demand <= candidate.headroom + level_tol
            compared += 1
        assert compared > 300
        print(f"✅ {compared} feasible splits matched linprog ({mode.value})")


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
