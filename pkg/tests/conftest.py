from __future__ import annotations

import random

import pytest

from schedrelax.model import Job, ProblemInstance, Resource, Schedule


def make_tiny1(extra_resources: int = 0) -> ProblemInstance:
    """Three jobs feeding one tardy project on a single capacity-2 resource."""
    resources = [Resource(1, [2] * 24)]
    for k in range(extra_resources):
        resources.append(Resource(2 + k, [2] * 24))
    return ProblemInstance(
        jobs=[
            Job(1, duration=2, consumption={1: 1}),
            Job(2, duration=3, consumption={1: 2}),
            Job(3, duration=1, due_date=4, weight=1.0, consumption={1: 1}),
        ],
        precedences=[(1, 3), (2, 3)],
        resources=resources,
        horizon=24,
    )


@pytest.fixture
def tiny1() -> ProblemInstance:
    return make_tiny1()


@pytest.fixture
def tiny2() -> ProblemInstance:
    """TINY-1 plus an idle second resource (a migration donor)."""
    return make_tiny1(extra_resources=1)


@pytest.fixture
def tiny1_schedule() -> Schedule:
    return Schedule({1: 3, 2: 0, 3: 5})


def random_instance(
    rng: random.Random,
    max_jobs: int = 8,
    max_resources: int = 2,
    horizon_cap: int = 30,
    constant_capacity: bool = False,
) -> ProblemInstance:
    """Small random in-forest instance for oracle-vs-implementation suites."""
    n = rng.randint(3, max_jobs)
    m = rng.randint(1, max_resources)
    durations = [rng.randint(1, 4) for _ in range(n)]
    # Random in-forest: each job may point at one higher-numbered successor.
    precedences = []
    for j in range(1, n):
        if rng.random() < 0.7:
            precedences.append((j, rng.randint(j + 1, n)))
    successors = {i for i, _ in precedences}
    resources = []
    for k in range(1, m + 1):
        if constant_capacity:
            pattern = [rng.randint(2, 3)] * 24
        else:
            base = rng.randint(2, 3)
            pattern = [base + (1 if 8 <= h < 16 else 0) for h in range(24)]
        resources.append(Resource(k, pattern))
    jobs = []
    for j in range(1, n + 1):
        consumption = {}
        for k in range(1, m + 1):
            if rng.random() < 0.8:
                consumption[k] = rng.randint(1, 2)
        if not consumption:
            consumption[rng.randint(1, m)] = 1
        jobs.append(Job(j, durations[j - 1], consumption=consumption))
    horizon = min(horizon_cap, max(sum(durations) + 4, max(durations) + 1))
    instance = ProblemInstance(jobs, precedences, resources, horizon)
    # Give every root a due date near its precedence-critical path.
    tails: dict[int, int] = {}
    root_of: dict[int, int] = {}
    for j in reversed(instance.topological_order()):
        succ = instance.successor_of(j)
        tails[j] = instance.job(j).duration + (tails[succ] if succ is not None else 0)
        root_of[j] = j if succ is None else root_of[succ]
    for root in instance.projects:
        critical = max(tails[j] for j in tails if root_of[j] == root)
        job = instance.job(root)
        job.due_date = max(1, rng.randint(max(1, critical - 2), critical + 4))
        job.weight = float(rng.randint(1, 3))
    instance.check_structure()
    return instance


def random_feasible_pair(rng: random.Random, **kwargs):
    """Random instance plus a feasible schedule built by naive greedy placement."""
    from schedrelax.model import validate

    while True:
        instance = random_instance(rng, **kwargs)
        remaining = {
            res.id: [res.capacity_at(t) for t in range(instance.horizon)]
            for res in instance.resources
        }
        starts: dict[int, int] = {}
        ok = True
        for j in instance.topological_order():
            job = instance.job(j)
            est = max(
                (starts[i] + instance.job(i).duration for i in instance.predecessors_of(j)),
                default=0,
            )
            placed = False
            for s in range(est, instance.horizon - job.duration + 1):
                if all(
                    remaining[k][t] >= q
                    for k, q in job.consumption.items()
                    for t in range(s, s + job.duration)
                ):
                    for k, q in job.consumption.items():
                        for t in range(s, s + job.duration):
                            remaining[k][t] -= q
                    starts[j] = s
                    placed = True
                    break
            if not placed:
                ok = False
                break
        if ok:
            schedule = Schedule(starts)
            assert validate(instance, schedule).feasible
            return instance, schedule
