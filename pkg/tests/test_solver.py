from __future__ import annotations

import random

import pytest

from schedrelax.model import Job, ProblemInstance, Resource, Schedule, validate
from schedrelax.solver import (
    EXACT_JOB_CAP,
    SolveLimits,
    event_point_closure,
    solve_exact,
    solve_heuristic,
)

from _oracles import brute_force_optimum, objective_oracle
from conftest import make_tiny1, random_instance


class TestSolveExact:
    def test_tiny1_optimum_is_two(self, tiny1):
        result = solve_exact(tiny1)
        assert result.optimal
        assert result.objective == 2
        assert validate(tiny1, result.schedule).feasible
        assert objective_oracle(tiny1, result.schedule.starts) == 2

    def test_relaxed_capacity_reaches_zero(self):
        instance = make_tiny1()
        instance.resources[0].base_pattern = [3] * 24
        result = solve_exact(instance)
        assert result.optimal and result.objective == 0

    def test_infinite_due_dates_make_any_feasible_schedule_optimal(self, tiny1):
        tiny1.job(3).due_date = None
        tiny1.job(3).weight = 0.0
        result = solve_exact(tiny1)
        assert result.optimal and result.objective == 0

    def test_job_cap_enforced(self):
        jobs = [Job(j, 1, consumption={1: 1}) for j in range(1, EXACT_JOB_CAP + 2)]
        instance = ProblemInstance(jobs, [], [Resource(1, [20] * 24)], 24)
        with pytest.raises(ValueError):
            solve_exact(instance)

    def test_limit_exceeded_returns_marker(self, tiny1):
        result = solve_exact(tiny1, SolveLimits(node_limit=2))
        assert not result.optimal
        assert result.status == "limit exceeded"

    def test_matches_brute_force_on_random_batch(self):
        rng = random.Random(2024)
        for _ in range(12):
            instance = random_instance(rng, max_jobs=6, horizon_cap=20)
            expected, _ = brute_force_optimum(instance)
            result = solve_exact(instance, SolveLimits(time_limit=300))
            if expected is None:
                assert not result.feasible
            else:
                assert result.optimal
                assert result.objective == expected


class TestEventPointClosure:
    def test_includes_zero_and_capacity_changes(self):
        instance = ProblemInstance(
            jobs=[Job(1, 5, consumption={1: 1})],
            precedences=[],
            resources=[Resource(1, [2 if 6 <= h < 14 else 0 for h in range(24)])],
            horizon=24,
        )
        points = event_point_closure(instance)
        assert 0 in points and 6 in points and 14 in points
        assert 11 in points  # 6 + 5

    def test_closed_under_duration_sums(self, tiny1):
        points = set(event_point_closure(tiny1))
        for t in points:
            for job in tiny1.jobs:
                if t + job.duration <= tiny1.horizon:
                    assert t + job.duration in points


class TestSolveHeuristic:
    def test_tiny1_reaches_the_optimum(self, tiny1):
        result = solve_heuristic(tiny1)
        assert result.feasible
        assert result.objective == 2
        assert validate(tiny1, result.schedule).feasible
        # The minimum-slack pass schedules the long feeder chain first.
        assert result.schedule.starts == {1: 3, 2: 0, 3: 5}

    def test_warm_start_objective_never_regresses(self, tiny1):
        warm = Schedule({1: 3, 2: 0, 3: 5})
        result = solve_heuristic(tiny1, warm_start=warm)
        assert result.objective <= objective_oracle(tiny1, warm.starts)

    def test_warm_start_must_be_feasible(self, tiny1):
        with pytest.raises(ValueError):
            solve_heuristic(tiny1, warm_start=Schedule({1: 0, 2: 0, 3: 5}))

    def test_relaxed_instance_with_warm_start_reaches_zero(self, tiny1):
        relaxed = tiny1.with_overlay_deltas({(1, 0): 1, (1, 1): 1, (1, 2): 1})
        result = solve_heuristic(relaxed, warm_start=Schedule({1: 3, 2: 0, 3: 5}))
        assert result.objective == 0

    def test_deterministic_for_fixed_seed(self):
        rng = random.Random(5)
        for _ in range(5):
            instance = random_instance(rng)
            a = solve_heuristic(instance, SolveLimits(seed=9))
            b = solve_heuristic(instance, SolveLimits(seed=9))
            assert a.feasible == b.feasible
            if a.feasible:
                assert a.schedule.starts == b.schedule.starts

    def test_infeasible_horizon_reported(self):
        instance = ProblemInstance(
            jobs=[Job(1, 4, consumption={1: 1}), Job(2, 4, consumption={1: 1})],
            precedences=[(1, 2)],
            resources=[Resource(1, [1] * 24)],
            horizon=6,
        )
        result = solve_heuristic(instance)
        assert not result.feasible
        assert result.schedule is None
        with pytest.raises(RuntimeError):
            result.require_schedule()

    def test_feasible_and_bounded_by_exact_on_random_batch(self):
        rng = random.Random(99)
        for _ in range(10):
            instance = random_instance(rng, max_jobs=7, horizon_cap=24)
            heur = solve_heuristic(instance, SolveLimits(restarts=8, seed=1))
            exact = solve_exact(instance, SolveLimits(time_limit=300))
            if not exact.feasible:
                continue
            assert heur.feasible
            assert validate(instance, heur.schedule).feasible
            assert heur.objective >= exact.objective
