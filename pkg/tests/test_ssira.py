from __future__ import annotations

import random

import pytest

from schedrelax.accounting import CapacityAddition
from schedrelax.model import Job, ProblemInstance, Resource, Schedule, weighted_tardiness
from schedrelax.solver import SolveLimits, solve_heuristic
from schedrelax.ssira import (
    ImprovementInterval,
    SsiraParams,
    availability_intervals,
    find_intervals_to_relax,
    left_shift_closure,
    run_ssira,
    suffix_relaxed_schedule,
)

from _oracles import left_shift_closure_oracle, suffix_relaxed_oracle
from conftest import random_feasible_pair


class TestSuffixRelaxedSchedule:
    def test_tiny1_cut_at_one(self, tiny1, tiny1_schedule):
        relaxed = suffix_relaxed_schedule(tiny1, tiny1_schedule, 1)
        assert relaxed.starts == {1: 0, 2: 0, 3: 3}

    def test_cut_at_or_after_last_start_keeps_everything(self, tiny1, tiny1_schedule):
        for t in (5, 9, tiny1.horizon):
            relaxed = suffix_relaxed_schedule(tiny1, tiny1_schedule, t)
            assert relaxed.starts == tiny1_schedule.starts

    def test_source_job_relaxes_to_zero(self, tiny1, tiny1_schedule):
        relaxed = suffix_relaxed_schedule(tiny1, tiny1_schedule, 0)
        assert relaxed.starts[1] == 0  # source with start 3 > 0 drops to 0

    def test_matches_recursive_definition_for_every_cut(self):
        rng = random.Random(23)
        for _ in range(20):
            instance, schedule = random_feasible_pair(rng)
            for t in range(0, instance.horizon + 1):
                got = suffix_relaxed_schedule(instance, schedule, t)
                assert got.starts == suffix_relaxed_oracle(instance, schedule.starts, t)

    def test_never_delays_and_respects_precedence(self):
        rng = random.Random(29)
        for _ in range(10):
            instance, schedule = random_feasible_pair(rng)
            for t in range(0, instance.horizon + 1):
                relaxed = suffix_relaxed_schedule(instance, schedule, t)
                for job in instance.jobs:
                    assert relaxed.starts[job.id] <= schedule.starts[job.id]
                for i, j in instance.precedences:
                    assert (
                        relaxed.starts[i] + instance.job(i).duration <= relaxed.starts[j]
                    )
            full = suffix_relaxed_schedule(instance, schedule, instance.horizon)
            assert full.starts == schedule.starts


class TestLeftShiftClosure:
    def test_tiny1_closure_collects_both_feeders(self, tiny1, tiny1_schedule):
        assert left_shift_closure(tiny1, tiny1_schedule, 3) == {1, 2, 3}

    def test_isolated_job_is_alone(self):
        instance = ProblemInstance(
            jobs=[Job(1, 2, consumption={1: 1})],
            precedences=[],
            resources=[Resource(1, [2] * 24)],
            horizon=24,
        )
        assert left_shift_closure(instance, Schedule({1: 0}), 1) == {1}

    def test_shift_boundary_rule_reaches_previous_interval(self):
        # Job 2 starts exactly when the second availability interval of its
        # resource opens; job 1 ends exactly when the first interval closes.
        instance = ProblemInstance(
            jobs=[
                Job(1, 2, consumption={1: 1}),
                Job(2, 3, due_date=40, weight=1.0, consumption={1: 1}),
            ],
            precedences=[],
            resources=[Resource(1, [0] * 6 + [1] * 8 + [0] * 10)],
            horizon=48,
        )
        assert availability_intervals(instance, 1)[:2] == [(6, 14), (30, 38)]
        schedule = Schedule({1: 12, 2: 30})
        assert left_shift_closure(instance, schedule, 2) == {1, 2}

    def test_first_interval_start_has_no_previous(self):
        instance = ProblemInstance(
            jobs=[Job(1, 2, consumption={1: 1}), Job(2, 2, consumption={1: 1})],
            precedences=[],
            resources=[Resource(1, [0] * 6 + [1] * 8 + [0] * 10)],
            horizon=24,
        )
        schedule = Schedule({1: 6, 2: 8})
        assert left_shift_closure(instance, schedule, 1) == {1}

    def test_matches_naive_fixpoint_oracle(self):
        rng = random.Random(37)
        for _ in range(20):
            instance, schedule = random_feasible_pair(rng)
            for job in instance.jobs:
                got = left_shift_closure(instance, schedule, job.id)
                want = left_shift_closure_oracle(instance, schedule.starts, job.id)
                assert got == want


class TestFindIntervalsToRelax:
    def test_tiny1_earliest_start_key(self, tiny1, tiny1_schedule):
        intervals = find_intervals_to_relax(tiny1, tiny1_schedule, 2, "earliest_start", 3)
        assert intervals == [
            ImprovementInterval(1, 0, 2),
            ImprovementInterval(3, 3, 4),
        ]

    def test_tiny1_smallest_shift_key(self, tiny1, tiny1_schedule):
        intervals = find_intervals_to_relax(tiny1, tiny1_schedule, 1, "smallest_shift", 3)
        assert intervals == [ImprovementInterval(3, 3, 4)]

    def test_unimprovable_target_yields_nothing(self):
        instance = ProblemInstance(
            jobs=[Job(1, 2, due_date=2, weight=1.0, consumption={1: 1})],
            precedences=[],
            resources=[Resource(1, [2] * 24)],
            horizon=24,
        )
        assert find_intervals_to_relax(instance, Schedule({1: 0}), 3, "earliest_start", 1) == []

    def test_interval_length_matches_duration_and_improves(self):
        rng = random.Random(43)
        for _ in range(10):
            instance, schedule = random_feasible_pair(rng)
            for target in instance.projects:
                for key in ("earliest_start", "smallest_shift"):
                    for interval in find_intervals_to_relax(instance, schedule, 4, key, target):
                        job = instance.job(interval.job)
                        assert interval.end - interval.start == job.duration
                        assert interval.start < schedule.starts[interval.job]

    def test_limit_respected(self, tiny1, tiny1_schedule):
        intervals = find_intervals_to_relax(tiny1, tiny1_schedule, 1, "earliest_start", 3)
        assert intervals == [ImprovementInterval(1, 0, 2)]

    def test_breakpoint_minimum_equals_per_cut_brute_force(self):
        # find_intervals evaluates the relaxation only at distinct start
        # values; the improvement start must match a scan over every cut.
        rng = random.Random(47)
        for _ in range(10):
            instance, schedule = random_feasible_pair(rng)
            for target in instance.projects:
                intervals = find_intervals_to_relax(
                    instance, schedule, len(instance.jobs), "earliest_start", target
                )
                got = {iv.job: iv.start for iv in intervals}
                want: dict[int, int] = {}
                for job_id in left_shift_closure(instance, schedule, target):
                    values = [
                        suffix_relaxed_oracle(instance, schedule.starts, t)[job_id]
                        for t in range(0, instance.horizon + 1)
                    ]
                    improving = [v for v in values if v < schedule.starts[job_id]]
                    if improving:
                        want[job_id] = min(improving)
                assert got == want


class TestRunSsira:
    def test_tiny1_end_to_end_trace(self, tiny1):
        baseline = solve_heuristic(tiny1, SolveLimits(seed=0)).require_schedule()
        params = SsiraParams(iterations_limit=1, intervals_limit=2, sort_key="earliest_start")
        run = run_ssira(tiny1, baseline, params, target=3, limits=SolveLimits(seed=0))
        final = run.final
        assert final.delta_tardiness == 2
        assert final.migrations == []
        # The unconsumed [3,4) raise is reduced away.
        assert final.additions == [CapacityAddition(1, 0, 2, 1)]
        total, _ = weighted_tardiness(final.instance, final.schedule)
        assert total == 0

    def test_tiny2_prefers_migration_from_idle_resource(self, tiny2):
        baseline = solve_heuristic(tiny2, SolveLimits(seed=0)).require_schedule()
        params = SsiraParams(iterations_limit=1, intervals_limit=2)
        run = run_ssira(tiny2, baseline, params, target=3, limits=SolveLimits(seed=0))
        final = run.final
        assert final.additions == []
        assert len(final.migrations) == 1
        migration = final.migrations[0]
        assert (migration.donor, migration.recipient) == (2, 1)
        assert final.delta_tardiness == 2

    def test_on_time_target_returns_identity(self):
        instance = ProblemInstance(
            jobs=[Job(1, 2, due_date=5, weight=1.0, consumption={1: 1})],
            precedences=[],
            resources=[Resource(1, [2] * 24)],
            horizon=24,
        )
        baseline = Schedule({1: 0})
        run = run_ssira(instance, baseline, SsiraParams(), target=1)
        assert run.final.is_identity
        assert run.final.delta_tardiness == 0

    def test_target_tardiness_never_regresses(self):
        rng = random.Random(53)
        for _ in range(5):
            instance, schedule = random_feasible_pair(rng, max_resources=2)
            target = instance.projects[0]
            params = SsiraParams(iterations_limit=3, intervals_limit=2, sort_key="smallest_shift")
            run = run_ssira(instance, schedule, params, target, SolveLimits(restarts=4, seed=7))
            deltas = [p.delta_tardiness for p in run.proposals]
            assert all(d >= 0 for d in deltas)
            assert deltas == sorted(deltas)  # non-decreasing improvement

    def test_target_must_be_project(self, tiny1, tiny1_schedule):
        with pytest.raises(ValueError):
            run_ssira(tiny1, tiny1_schedule, SsiraParams(), target=2)
