"""Targeted capacity relaxation around a chosen project.

The algorithm looks for *improvement intervals*: earlier slots a job could
occupy once capacity constraints are waived for everything scheduled after a
cut time t. Candidates are restricted to the target project's left-shift
closure (the jobs that must move earlier for the target to finish earlier).
Capacity is then raised over the selected intervals by each job's own
demand, the instance is re-solved with a warm start, and the consumed
changes are reported.
"""

from __future__ import annotations

from dataclasses import dataclass

from .model import ProblemInstance, Schedule, tardiness, validate
from .relaxation import (
    RelaxationProposal,
    RelaxationRun,
    build_proposal,
    identity_proposal,
)
from .solver import SolveLimits, solve_heuristic

SORT_KEYS = ("earliest_start", "smallest_shift")


@dataclass(frozen=True)
class ImprovementInterval:
    """Job j could run over [start, end) instead of its current slot."""

    job: int
    start: int
    end: int


@dataclass
class SsiraParams:
    iterations_limit: int = 1
    intervals_limit: int = 1
    sort_key: str = "earliest_start"

    def __post_init__(self) -> None:
        if self.iterations_limit < 1 or self.intervals_limit < 1:
            raise ValueError("iterations and intervals limits must be at least 1")
        if self.sort_key not in SORT_KEYS:
            raise ValueError(f"sort_key must be one of {SORT_KEYS}")

    @property
    def label(self) -> str:
        return f"key={self.sort_key};IT={self.intervals_limit};I={self.iterations_limit}"

    def to_dict(self) -> dict:
        return {
            "sort_key": self.sort_key,
            "intervals_limit": self.intervals_limit,
            "iterations_limit": self.iterations_limit,
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "SsiraParams":
        return cls(
            iterations_limit=int(doc.get("iterations_limit", 1)),
            intervals_limit=int(doc.get("intervals_limit", 1)),
            sort_key=doc.get("sort_key", "earliest_start"),
        )


def suffix_relaxed_schedule(
    instance: ProblemInstance, schedule: Schedule, t: int
) -> Schedule:
    """Keep jobs starting at or before t; everything later drops its capacity
    constraints and moves to its precedence-earliest start (sources to 0)."""
    relaxed: dict[int, int] = {}
    for job_id in instance.topological_order():
        start = schedule.starts[job_id]
        if start <= t:
            relaxed[job_id] = start
        else:
            relaxed[job_id] = max(
                (relaxed[i] + instance.job(i).duration for i in instance.predecessors_of(job_id)),
                default=0,
            )
    return Schedule(relaxed)


def availability_intervals(instance: ProblemInstance, resource_id: int) -> list[tuple[int, int]]:
    """Maximal half-open runs of strictly positive capacity."""
    res = instance.resource(resource_id)
    intervals: list[tuple[int, int]] = []
    t = 0
    while t < instance.horizon:
        if res.capacity_at(t) > 0:
            begin = t
            while t < instance.horizon and res.capacity_at(t) > 0:
                t += 1
            intervals.append((begin, t))
        else:
            t += 1
    return intervals


def left_shift_closure(
    instance: ProblemInstance, schedule: Schedule, job_id: int
) -> set[int]:
    """Least set containing the job and closed under the blocking rules:

    * precedence predecessors completing exactly at a member's start;
    * jobs sharing a required resource completing exactly at a member's start;
    * when a member starts exactly at the opening of one of its resources'
      availability intervals, every user of that resource completing exactly
      at the close of the previous availability interval.
    """
    completions = {job.id: schedule.starts[job.id] + job.duration for job in instance.jobs}
    intervals = {res.id: availability_intervals(instance, res.id) for res in instance.resources}
    users: dict[int, list[int]] = {res.id: [] for res in instance.resources}
    for job in instance.jobs:
        for k, q in job.consumption.items():
            if q > 0:
                users[k].append(job.id)

    closure = {job_id}
    frontier = [job_id]
    while frontier:
        x = frontier.pop()
        s_x = schedule.starts[x]
        found: list[int] = []
        for i in instance.predecessors_of(x):
            if completions[i] == s_x:
                found.append(i)
        x_needs = [k for k, q in instance.job(x).consumption.items() if q > 0]
        for k in x_needs:
            for i in users[k]:
                if i != x and completions[i] == s_x:
                    found.append(i)
        for k in x_needs:
            ivals = intervals[k]
            for index, (begin, _end) in enumerate(ivals):
                if s_x == begin and index > 0:
                    previous_close = ivals[index - 1][1]
                    for i in users[k]:
                        if completions[i] == previous_close:
                            found.append(i)
        for i in found:
            if i not in closure:
                closure.add(i)
                frontier.append(i)
    return closure


def find_intervals_to_relax(
    instance: ProblemInstance,
    schedule: Schedule,
    intervals_limit: int,
    sort_key: str,
    target: int,
) -> list[ImprovementInterval]:
    """Best earlier slots for jobs in the target's left-shift closure.

    For each closure job, its candidate start is the smallest relaxed start
    over all cut times that beats its current start. The suffix-relaxed
    schedule is constant between consecutive start values, so only the
    distinct starts (plus 0) are evaluated. The first ``intervals_limit``
    candidates under the sort key are returned: ``earliest_start`` orders by
    interval start, ``smallest_shift`` by how little the job moves; both
    break ties toward the lower job id.
    """
    closure = left_shift_closure(instance, schedule, target)
    cuts = sorted({0, *schedule.starts.values()})
    best_start: dict[int, int] = {}
    for t in cuts:
        relaxed = suffix_relaxed_schedule(instance, schedule, t)
        for job_id in closure:
            candidate = relaxed.starts[job_id]
            if candidate < schedule.starts[job_id]:
                if job_id not in best_start or candidate < best_start[job_id]:
                    best_start[job_id] = candidate
    candidates = [
        ImprovementInterval(job_id, start, start + instance.job(job_id).duration)
        for job_id, start in best_start.items()
    ]
    if sort_key == "earliest_start":
        candidates.sort(key=lambda iv: (iv.start, iv.job))
    else:
        candidates.sort(key=lambda iv: (schedule.starts[iv.job] - iv.start, iv.job))
    return candidates[:intervals_limit]


def run_ssira(
    instance: ProblemInstance,
    schedule: Schedule,
    params: SsiraParams,
    target: int,
    limits: SolveLimits | None = None,
) -> RelaxationRun:
    """Iterate interval-guided relaxations; stops early once no closure job
    can move. Capacity raises accumulate on a working copy; availability
    intervals for the closure always come from the original instance."""
    limits = limits or SolveLimits()
    if target not in instance.projects:
        raise ValueError(f"job {target} is not a project root")
    report = validate(instance, schedule)
    if not report.feasible:
        raise ValueError(f"initial schedule infeasible: {report.violations[0].message}")

    working = instance
    current = schedule
    proposals: list[RelaxationProposal] = []
    for iteration in range(1, params.iterations_limit + 1):
        intervals = find_intervals_to_relax(
            instance, current, params.intervals_limit, params.sort_key, target
        )
        if not intervals:
            break
        deltas: dict[tuple[int, int], int] = {}
        for interval in intervals:
            job = instance.job(interval.job)
            for k, q in job.consumption.items():
                if q <= 0:
                    continue
                for t in range(interval.start, interval.end):
                    key = (k, t)
                    deltas[key] = deltas.get(key, 0) + q
        working = working.with_overlay_deltas(deltas)
        result = solve_heuristic(working, limits, warm_start=current)
        candidate = result.require_schedule()
        if tardiness(instance, candidate, target) <= tardiness(instance, current, target):
            current = candidate
        proposals.append(
            build_proposal(instance, schedule, working, current, target, iteration)
        )
    if not proposals:
        proposals.append(identity_proposal(instance, schedule, target))
    return RelaxationRun(proposals, schedule, target)
