"""Core domain types for capacity-constrained project scheduling.

A problem instance consists of jobs with durations and per-resource
consumptions, precedence constraints forming an in-forest (every job has at
most one successor; the roots of the in-trees are the *projects* and are the
only jobs carrying due dates and tardiness weights), and renewable resources
whose capacities vary over time with a 24-period cycle plus sparse overlay
edits.

Time is a zero-based grid t in {0, ..., horizon-1}; a job started at S runs
over the half-open interval [S, S + duration).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

PERIODS_PER_DAY = 24


class InstanceError(ValueError):
    """Raised when an instance violates a structural invariant."""


@dataclass
class Job:
    """A non-preemptive job.

    ``due_date`` is None for +infinity. Only project roots (jobs without a
    successor) may carry a finite due date or a positive tardiness weight.
    ``consumption`` maps resource id to per-period demand; zero entries are
    omitted.
    """

    id: int
    duration: int
    due_date: int | None = None
    weight: float = 0.0
    consumption: dict[int, int] = field(default_factory=dict)


@dataclass
class Resource:
    """A renewable resource with a periodic capacity plus sparse edits.

    ``base_pattern`` holds 24 non-negative capacities repeated with a period
    of 24 (working shifts). ``overlay`` maps absolute time periods to signed
    capacity deltas; the effective capacity must stay non-negative.
    """

    id: int
    base_pattern: list[int]
    overlay: dict[int, int] = field(default_factory=dict)

    def capacity_at(self, t: int) -> int:
        return self.base_pattern[t % PERIODS_PER_DAY] + self.overlay.get(t, 0)


@dataclass
class ProblemInstance:
    """Jobs, in-forest precedences, resources, and a time horizon."""

    jobs: list[Job]
    precedences: list[tuple[int, int]]
    resources: list[Resource]
    horizon: int

    def __post_init__(self) -> None:
        self.precedences = [(int(i), int(j)) for i, j in self.precedences]
        self._job_by_id = {job.id: job for job in self.jobs}
        self._resource_by_id = {res.id: res for res in self.resources}
        self._successor = {i: j for i, j in self.precedences}
        self._predecessors: dict[int, list[int]] = {job.id: [] for job in self.jobs}
        for i, j in self.precedences:
            if j in self._predecessors:
                self._predecessors[j].append(i)
        for preds in self._predecessors.values():
            preds.sort()

    # -- lookups ---------------------------------------------------------

    def job(self, job_id: int) -> Job:
        return self._job_by_id[job_id]

    def resource(self, resource_id: int) -> Resource:
        return self._resource_by_id[resource_id]

    def successor_of(self, job_id: int) -> int | None:
        return self._successor.get(job_id)

    def predecessors_of(self, job_id: int) -> list[int]:
        return self._predecessors.get(job_id, [])

    @property
    def projects(self) -> list[int]:
        """Roots of the precedence in-trees, ascending by id."""
        return [job.id for job in self.jobs if job.id not in self._successor]

    def capacity(self, resource_id: int, t: int) -> int:
        return self._resource_by_id[resource_id].capacity_at(t)

    def capacity_profile(self, resource_id: int) -> np.ndarray:
        """Effective capacity of one resource over [0, horizon)."""
        res = self._resource_by_id[resource_id]
        reps = -(-self.horizon // PERIODS_PER_DAY)
        profile = np.tile(np.asarray(res.base_pattern, dtype=np.int64), reps)[: self.horizon]
        for t, delta in res.overlay.items():
            if 0 <= t < self.horizon:
                profile[t] += delta
        return profile

    def capacity_matrix(self) -> np.ndarray:
        """Capacities of all resources, shape (len(resources), horizon)."""
        return np.stack([self.capacity_profile(res.id) for res in self.resources])

    def topological_order(self) -> list[int]:
        """Job ids with predecessors first; ties broken by lowest id."""
        import heapq

        remaining = {job.id: len(self._predecessors[job.id]) for job in self.jobs}
        ready = [job_id for job_id, n in remaining.items() if n == 0]
        heapq.heapify(ready)
        order: list[int] = []
        while ready:
            job_id = heapq.heappop(ready)
            order.append(job_id)
            succ = self._successor.get(job_id)
            if succ is not None:
                remaining[succ] -= 1
                if remaining[succ] == 0:
                    heapq.heappush(ready, succ)
        if len(order) != len(self.jobs):
            raise InstanceError("precedence graph contains a cycle")
        return order

    # -- structural validation -------------------------------------------

    def check_structure(self) -> None:
        """Raise InstanceError on any violated structural invariant."""
        n = len(self.jobs)
        ids = sorted(job.id for job in self.jobs)
        if ids != list(range(1, n + 1)):
            raise InstanceError("job ids must be 1..n, dense and unique")
        res_ids = sorted(res.id for res in self.resources)
        if res_ids != list(range(1, len(self.resources) + 1)):
            raise InstanceError("resource ids must be 1..m, dense and unique")
        if self.horizon < 1:
            raise InstanceError("horizon must be positive")
        out_degree: dict[int, int] = {}
        for i, j in self.precedences:
            if i not in self._job_by_id or j not in self._job_by_id:
                raise InstanceError(f"precedence ({i},{j}) references a missing job")
            out_degree[i] = out_degree.get(i, 0) + 1
            if out_degree[i] > 1:
                raise InstanceError(f"job {i} has more than one successor (not an in-forest)")
        self.topological_order()  # raises on cycles
        max_caps = {
            res.id: int(self.capacity_profile(res.id).max()) for res in self.resources
        }
        for job in self.jobs:
            if job.duration < 1:
                raise InstanceError(f"job {job.id} has non-positive duration")
            if job.duration > self.horizon:
                raise InstanceError(f"job {job.id} is longer than the horizon")
            if job.weight < 0:
                raise InstanceError(f"job {job.id} has negative tardiness weight")
            is_root = job.id not in self._successor
            if not is_root and (job.due_date is not None or job.weight != 0):
                raise InstanceError(
                    f"job {job.id} is not a project root but carries a due date or weight"
                )
            for res_id, qty in job.consumption.items():
                if res_id not in self._resource_by_id:
                    raise InstanceError(f"job {job.id} consumes unknown resource {res_id}")
                if qty < 0:
                    raise InstanceError(f"job {job.id} has negative consumption")
                if qty > max_caps[res_id]:
                    raise InstanceError(
                        f"job {job.id} demands {qty} of resource {res_id}, above its peak "
                        f"capacity {max_caps[res_id]}"
                    )
        for res in self.resources:
            if len(res.base_pattern) != PERIODS_PER_DAY:
                raise InstanceError(f"resource {res.id} needs a {PERIODS_PER_DAY}-value base pattern")
            if any(c < 0 for c in res.base_pattern):
                raise InstanceError(f"resource {res.id} has a negative base capacity")
            profile = self.capacity_profile(res.id)
            if profile.min() < 0:
                t = int(np.argmin(profile))
                raise InstanceError(f"resource {res.id} has negative capacity at t={t}")

    # -- derived instances -----------------------------------------------

    def with_overlay_deltas(self, deltas: dict[tuple[int, int], int]) -> "ProblemInstance":
        """Copy of this instance with (resource, t) -> delta added to overlays."""
        resources = []
        for res in self.resources:
            overlay = dict(res.overlay)
            for (res_id, t), delta in deltas.items():
                if res_id == res.id and delta != 0:
                    overlay[t] = overlay.get(t, 0) + delta
                    if overlay[t] == 0:
                        del overlay[t]
            resources.append(Resource(res.id, list(res.base_pattern), overlay))
        return ProblemInstance(
            jobs=[
                Job(j.id, j.duration, j.due_date, j.weight, dict(j.consumption))
                for j in self.jobs
            ],
            precedences=list(self.precedences),
            resources=resources,
            horizon=self.horizon,
        )


@dataclass
class Schedule:
    """Start times, one non-negative integer per job id."""

    starts: dict[int, int]

    def start(self, job_id: int) -> int:
        return self.starts[job_id]

    def copy(self) -> "Schedule":
        return Schedule(dict(self.starts))


@dataclass
class Violation:
    """One broken constraint found by :func:`validate`."""

    kind: str  # "precedence" | "capacity" | "horizon"
    message: str
    job: int | None = None
    resource: int | None = None
    t: int | None = None


@dataclass
class FeasibilityReport:
    violations: list[Violation]

    @property
    def feasible(self) -> bool:
        return not self.violations


def completion(instance: ProblemInstance, schedule: Schedule, job_id: int) -> int:
    return schedule.starts[job_id] + instance.job(job_id).duration


def completions(instance: ProblemInstance, schedule: Schedule) -> dict[int, int]:
    return {job.id: schedule.starts[job.id] + job.duration for job in instance.jobs}


def latest_completion(instance: ProblemInstance, schedule: Schedule) -> int:
    return max(completions(instance, schedule).values(), default=0)


def consumption_timeline(
    instance: ProblemInstance, schedule: Schedule, resource_id: int
) -> np.ndarray:
    """Total demand on one resource per time period over [0, horizon)."""
    load = np.zeros(instance.horizon, dtype=np.int64)
    for job in instance.jobs:
        qty = job.consumption.get(resource_id, 0)
        if qty:
            s = schedule.starts[job.id]
            load[s : s + job.duration] += qty
    return load


def validate(instance: ProblemInstance, schedule: Schedule) -> FeasibilityReport:
    """Check a schedule against precedence, capacity, and horizon constraints.

    The instance itself must be structurally valid; otherwise InstanceError
    is raised before any schedule checking happens.
    """
    instance.check_structure()
    if set(schedule.starts) != {job.id for job in instance.jobs}:
        raise InstanceError("schedule must assign a start to exactly the instance's jobs")
    violations: list[Violation] = []
    for job in instance.jobs:
        s = schedule.starts[job.id]
        if s < 0 or s + job.duration > instance.horizon:
            violations.append(
                Violation(
                    "horizon",
                    f"job {job.id} runs over [{s},{s + job.duration}) outside [0,{instance.horizon})",
                    job=job.id,
                )
            )
    for i, j in instance.precedences:
        c_i = completion(instance, schedule, i)
        if c_i > schedule.starts[j]:
            violations.append(
                Violation(
                    "precedence",
                    f"job {i} completes at {c_i} after successor {j} starts at {schedule.starts[j]}",
                    job=j,
                )
            )
    if not any(v.kind == "horizon" for v in violations):
        caps = instance.capacity_matrix()
        for idx, res in enumerate(instance.resources):
            load = consumption_timeline(instance, schedule, res.id)
            over = np.nonzero(load > caps[idx])[0]
            for t in over:
                violations.append(
                    Violation(
                        "capacity",
                        f"resource {res.id} holds load {int(load[t])} over capacity "
                        f"{int(caps[idx][t])} at t={int(t)}",
                        resource=res.id,
                        t=int(t),
                    )
                )
    return FeasibilityReport(violations)


def tardiness(instance: ProblemInstance, schedule: Schedule, job_id: int) -> int:
    """Completion past the due date, 0 when on time or without a due date."""
    job = instance.job(job_id)
    if job.due_date is None:
        return 0
    return max(0, schedule.starts[job_id] + job.duration - job.due_date)


def weighted_tardiness(
    instance: ProblemInstance, schedule: Schedule
) -> tuple[float, dict[int, float]]:
    """Total weighted tardiness and the per-project contributions."""
    per_project: dict[int, float] = {}
    for root in instance.projects:
        per_project[root] = instance.job(root).weight * tardiness(instance, schedule, root)
    return sum(per_project.values()), per_project
