"""Schedulers minimizing total weighted project tardiness.

Two entry points:

* :func:`solve_exact` — depth-first branch and bound for tiny instances.
  Start times are drawn from the event-point closure: 0, every instant where
  some capacity changes, and everything reachable from those by adding job
  durations. Any schedule in which no job can be shifted one period earlier
  starts only at such points, so the restriction keeps an optimum reachable.

* :func:`solve_heuristic` — deterministic multi-pass serial schedule
  generation over priority rules (minimum slack, earliest project due date,
  longest downstream path, then seeded random orders), each pass followed by
  a backward/forward justification step. Supports warm-starting from a known
  feasible schedule; the incumbent is only ever replaced by a strictly
  better objective, so warm-start objectives never regress.
"""

from __future__ import annotations

import heapq
import random
import time
from dataclasses import dataclass

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .model import ProblemInstance, Schedule, validate, weighted_tardiness

EXACT_JOB_CAP = 14
_INF = float("inf")


@dataclass
class SolveLimits:
    """Search budgets. ``time_limit`` follows the 10-second default for
    finding a single solution; determinism holds whenever a run completes
    within it (restarts and nodes are the binding limits in practice)."""

    time_limit: float = 10.0
    node_limit: int = 2_000_000
    restarts: int = 12
    seed: int = 0

    def __post_init__(self) -> None:
        if self.time_limit <= 0:
            raise ValueError("time_limit must be positive")


@dataclass
class SolveResult:
    schedule: Schedule | None
    objective: float | None
    feasible: bool
    optimal: bool
    status: str
    nodes: int = 0
    passes: int = 0

    def require_schedule(self) -> Schedule:
        if self.schedule is None:
            raise RuntimeError(f"no feasible schedule available ({self.status})")
        return self.schedule


@dataclass
class _CompiledInstance:
    """Numpy-friendly view of an instance used by both solvers."""

    order: list[int]
    durations: dict[int, int]
    demands: dict[int, list[tuple[int, int]]]  # job -> [(resource row, qty)]
    preds: dict[int, list[int]]
    caps: np.ndarray
    horizon: int

    @classmethod
    def build(cls, instance: ProblemInstance) -> "_CompiledInstance":
        row = {res.id: idx for idx, res in enumerate(instance.resources)}
        demands = {
            job.id: [(row[k], q) for k, q in sorted(job.consumption.items()) if q > 0]
            for job in instance.jobs
        }
        return cls(
            order=instance.topological_order(),
            durations={job.id: job.duration for job in instance.jobs},
            demands=demands,
            preds={job.id: instance.predecessors_of(job.id) for job in instance.jobs},
            caps=instance.capacity_matrix(),
            horizon=instance.horizon,
        )


def _window_feasible(rem: np.ndarray, demands, duration: int, horizon: int) -> np.ndarray:
    """Boolean vector over candidate starts 0..horizon-duration."""
    feasible = np.ones(horizon - duration + 1, dtype=bool)
    for row, qty in demands:
        window_min = sliding_window_view(rem[row], duration).min(axis=1)
        feasible &= window_min >= qty
    return feasible


def _place(rem: np.ndarray, demands, start: int, duration: int, sign: int) -> None:
    for row, qty in demands:
        rem[row, start : start + duration] -= sign * qty


def _objective(instance: ProblemInstance, starts: dict[int, int]) -> float:
    total = 0.0
    for job in instance.jobs:
        if job.due_date is not None and job.weight:
            total += job.weight * max(0, starts[job.id] + job.duration - job.due_date)
    return total


# --- serial schedule generation ------------------------------------------


def _tails(instance: ProblemInstance) -> dict[int, int]:
    """Duration-weighted path from each job to its project root, inclusive."""
    tails: dict[int, int] = {}
    for job_id in reversed(instance.topological_order()):
        succ = instance.successor_of(job_id)
        tails[job_id] = instance.job(job_id).duration + (tails[succ] if succ else 0)
    return tails


def _root_due(instance: ProblemInstance) -> dict[int, float]:
    roots: dict[int, float] = {}
    for job_id in reversed(instance.topological_order()):
        succ = instance.successor_of(job_id)
        if succ is None:
            due = instance.job(job_id).due_date
            roots[job_id] = _INF if due is None else due
        else:
            roots[job_id] = roots[succ]
    return roots


def priority_orders(instance: ProblemInstance) -> dict[str, dict[int, tuple]]:
    """Static priority keys (lower is scheduled earlier) for the base rules."""
    tails = _tails(instance)
    due = _root_due(instance)
    return {
        "min_slack": {j: (due[j] - tails[j], j) for j in tails},
        "earliest_due": {j: (due[j], -tails[j], j) for j in tails},
        "longest_path": {j: (-tails[j], j) for j in tails},
    }


def _serial_generation(
    compiled: _CompiledInstance, priority: dict[int, tuple]
) -> dict[int, int] | None:
    """Schedule eligible jobs by priority at their earliest feasible start."""
    rem = compiled.caps.copy()
    starts: dict[int, int] = {}
    pending = {j: len(compiled.preds[j]) for j in compiled.durations}
    ready = [(priority[j], j) for j, n in pending.items() if n == 0]
    heapq.heapify(ready)
    succ_of: dict[int, list[int]] = {j: [] for j in compiled.durations}
    for j, preds in compiled.preds.items():
        for i in preds:
            succ_of[i].append(j)
    while ready:
        _, job_id = heapq.heappop(ready)
        duration = compiled.durations[job_id]
        est = max(
            (starts[i] + compiled.durations[i] for i in compiled.preds[job_id]), default=0
        )
        if est + duration > compiled.horizon:
            return None
        feasible = _window_feasible(rem, compiled.demands[job_id], duration, compiled.horizon)
        feasible = feasible[est:]
        if not feasible.size:
            return None
        offset = int(np.argmax(feasible))
        if not feasible[offset]:
            return None
        start = est + offset
        starts[job_id] = start
        _place(rem, compiled.demands[job_id], start, duration, +1)
        for succ in succ_of[job_id]:
            pending[succ] -= 1
            if pending[succ] == 0:
                heapq.heappush(ready, (priority[succ], succ))
    if len(starts) != len(compiled.durations):
        return None
    return starts


def _justify(
    instance: ProblemInstance, compiled: _CompiledInstance, starts: dict[int, int]
) -> dict[int, int]:
    """One backward-then-forward justification pass.

    Interior jobs are pushed right up to their successor's start, project
    completions stay put, then everything is re-left-justified. The caller
    compares objectives and keeps the better schedule.
    """
    rem = compiled.caps.copy()
    for job_id, start in starts.items():
        _place(rem, compiled.demands[job_id], start, compiled.durations[job_id], +1)
    current = dict(starts)

    def move(job_id: int, lo: int, hi: int, prefer_latest: bool) -> None:
        duration = compiled.durations[job_id]
        _place(rem, compiled.demands[job_id], current[job_id], duration, -1)
        feasible = _window_feasible(rem, compiled.demands[job_id], duration, compiled.horizon)
        lo = max(lo, 0)
        hi = min(hi, compiled.horizon - duration)
        span = feasible[lo : hi + 1]
        indices = np.flatnonzero(span)
        target = current[job_id]
        if indices.size:
            target = lo + int(indices[-1] if prefer_latest else indices[0])
        current[job_id] = target
        _place(rem, compiled.demands[job_id], target, duration, +1)

    successor = {j: None for j in compiled.durations}
    for j, preds in compiled.preds.items():
        for i in preds:
            successor[i] = j

    backward = sorted(
        compiled.durations, key=lambda j: (current[j] + compiled.durations[j], j), reverse=True
    )
    for job_id in backward:
        succ = successor[job_id]
        if succ is None:
            continue  # keep project completions fixed
        hi = current[succ] - compiled.durations[job_id]
        move(job_id, current[job_id], hi, prefer_latest=True)
    forward = sorted(compiled.durations, key=lambda j: (current[j], j))
    for job_id in forward:
        est = max(
            (current[i] + compiled.durations[i] for i in compiled.preds[job_id]), default=0
        )
        move(job_id, est, current[job_id], prefer_latest=False)
    return current


def solve_heuristic(
    instance: ProblemInstance,
    limits: SolveLimits | None = None,
    warm_start: Schedule | None = None,
) -> SolveResult:
    """Best-of-restarts serial generation with justification.

    ``warm_start`` must be feasible for this instance; it seeds the incumbent
    so the returned objective can only match or improve on it.
    """
    limits = limits or SolveLimits()
    instance.check_structure()
    compiled = _CompiledInstance.build(instance)
    deadline = time.monotonic() + limits.time_limit

    best_starts: dict[int, int] | None = None
    best_obj = _INF
    if warm_start is not None:
        report = validate(instance, warm_start)
        if not report.feasible:
            raise ValueError(
                f"warm start is infeasible: {report.violations[0].message}"
            )
        best_starts = dict(warm_start.starts)
        best_obj = _objective(instance, best_starts)

    rules = list(priority_orders(instance).items())
    rng = random.Random(limits.seed)
    passes = 0
    for index in range(max(limits.restarts, len(rules))):
        if index < len(rules):
            priority = rules[index][1]
        else:
            priority = {j: (rng.random(), j) for j in compiled.durations}
        starts = _serial_generation(compiled, priority)
        passes += 1
        if starts is not None:
            for candidate in (starts, _justify(instance, compiled, starts)):
                obj = _objective(instance, candidate)
                if obj < best_obj:
                    best_obj = obj
                    best_starts = dict(candidate)
        if time.monotonic() > deadline:
            break

    if best_starts is None:
        return SolveResult(None, None, False, False, "no feasible schedule found", passes=passes)
    schedule = Schedule(best_starts)
    return SolveResult(schedule, best_obj, True, False, "heuristic", passes=passes)


# --- exact search ----------------------------------------------------------


def event_point_closure(instance: ProblemInstance) -> list[int]:
    """Start-time candidates: 0 and capacity-change instants, closed under
    adding any single job duration (bounded by the horizon)."""
    caps = instance.capacity_matrix()
    seeds = {0}
    for row in caps:
        seeds.update(int(t) for t in np.nonzero(np.diff(row))[0] + 1)
    durations = sorted({job.duration for job in instance.jobs})
    seen = set(seeds)
    frontier = list(seeds)
    while frontier:
        t = frontier.pop()
        for d in durations:
            nxt = t + d
            if nxt <= instance.horizon and nxt not in seen:
                seen.add(nxt)
                frontier.append(nxt)
    return sorted(seen)


def solve_exact(instance: ProblemInstance, limits: SolveLimits | None = None) -> SolveResult:
    """Optimal weighted tardiness by depth-first branch and bound.

    Enforces a soft cap of {cap} jobs. Returns ``optimal=False`` with the
    best incumbent when a node or time limit interrupts the search.
    """
    limits = limits or SolveLimits()
    instance.check_structure()
    if len(instance.jobs) > EXACT_JOB_CAP:
        raise ValueError(f"exact search is capped at {EXACT_JOB_CAP} jobs")
    compiled = _CompiledInstance.build(instance)
    candidates = event_point_closure(instance)
    deadline = time.monotonic() + limits.time_limit

    roots = [instance.job(r) for r in instance.projects]
    order = compiled.order
    placed: dict[int, int] = {}
    rem = compiled.caps.copy()
    state = {"best_obj": _INF, "best": None, "nodes": 0, "interrupted": False}

    def lower_bound() -> float:
        est_completion: dict[int, int] = {}
        for job_id in order:
            if job_id in placed:
                est_completion[job_id] = placed[job_id] + compiled.durations[job_id]
            else:
                est = max((est_completion[i] for i in compiled.preds[job_id]), default=0)
                est_completion[job_id] = est + compiled.durations[job_id]
        bound = 0.0
        for job in roots:
            if job.due_date is not None and job.weight:
                bound += job.weight * max(0, est_completion[job.id] - job.due_date)
        return bound

    def descend(pos: int) -> None:
        if state["interrupted"]:
            return
        state["nodes"] += 1
        if state["nodes"] > limits.node_limit or (
            state["nodes"] % 4096 == 0 and time.monotonic() > deadline
        ):
            state["interrupted"] = True
            return
        if lower_bound() >= state["best_obj"]:
            return
        if pos == len(order):
            obj = _objective(instance, placed)
            if obj < state["best_obj"]:
                state["best_obj"] = obj
                state["best"] = dict(placed)
            return
        job_id = order[pos]
        duration = compiled.durations[job_id]
        demands = compiled.demands[job_id]
        est = max((placed[i] + compiled.durations[i] for i in compiled.preds[job_id]), default=0)
        for start in candidates:
            if start < est:
                continue
            if start + duration > compiled.horizon:
                break
            ok = True
            for row, qty in demands:
                if rem[row, start : start + duration].min() < qty:
                    ok = False
                    break
            if not ok:
                continue
            placed[job_id] = start
            _place(rem, demands, start, duration, +1)
            descend(pos + 1)
            _place(rem, demands, start, duration, -1)
            del placed[job_id]
            if state["interrupted"]:
                return

    descend(0)
    nodes = state["nodes"]
    if state["best"] is None:
        status = "limit exceeded" if state["interrupted"] else "infeasible"
        return SolveResult(None, None, False, False, status, nodes=nodes)
    schedule = Schedule(state["best"])
    if state["interrupted"]:
        return SolveResult(schedule, state["best_obj"], True, False, "limit exceeded", nodes=nodes)
    return SolveResult(schedule, state["best_obj"], True, True, "optimal", nodes=nodes)


solve_exact.__doc__ = solve_exact.__doc__.format(cap=EXACT_JOB_CAP)


def baseline_schedule(
    instance: ProblemInstance, limits: SolveLimits | None = None
) -> tuple[Schedule, float]:
    """Heuristic schedule plus its objective; raises when none is found."""
    result = solve_heuristic(instance, limits)
    schedule = result.require_schedule()
    total, _ = weighted_tardiness(instance, schedule)
    return schedule, total
