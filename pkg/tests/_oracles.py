"""Independent reference implementations used to compute expected values.

Everything in here is deliberately written from the definitions, without
reusing the package's algorithmic code paths: plain dict/loop bookkeeping,
full-grid search, literal recursions, and naive fixpoints. Keep it slow and
obvious.
"""

from __future__ import annotations

from fractions import Fraction

from schedrelax.model import ProblemInstance, Schedule


# --- timelines and feasibility ------------------------------------------


def timeline_oracle(instance: ProblemInstance, starts: dict[int, int], resource_id: int) -> list[int]:
    load = [0] * instance.horizon
    for job in instance.jobs:
        q = job.consumption.get(resource_id, 0)
        for t in range(starts[job.id], starts[job.id] + job.duration):
            load[t] += q
    return load


def feasible_oracle(instance: ProblemInstance, starts: dict[int, int]) -> bool:
    for job in instance.jobs:
        s = starts[job.id]
        if s < 0 or s + job.duration > instance.horizon:
            return False
    for i, j in instance.precedences:
        if starts[i] + instance.job(i).duration > starts[j]:
            return False
    for res in instance.resources:
        load = timeline_oracle(instance, starts, res.id)
        for t in range(instance.horizon):
            if load[t] > res.capacity_at(t):
                return False
    return True


def objective_oracle(instance: ProblemInstance, starts: dict[int, int]) -> float:
    total = 0.0
    for job in instance.jobs:
        if job.due_date is not None:
            total += job.weight * max(0, starts[job.id] + job.duration - job.due_date)
    return total


# --- full-grid exact optimum ----------------------------------------------


def brute_force_optimum(instance: ProblemInstance) -> tuple[float | None, dict[int, int] | None]:
    """Depth-first search over the full start-time grid.

    Jobs are placed in topological order; every start in
    [latest predecessor completion, horizon - duration] is tried. Partial
    placements are cut only when they already violate capacity or when a
    sound precedence-based bound on the objective cannot beat the incumbent
    (which never removes an optimal completion). Returns (objective, starts),
    or (None, None) when no feasible schedule exists.
    """
    order = instance.topological_order()
    horizon = instance.horizon
    caps = {res.id: [res.capacity_at(t) for t in range(horizon)] for res in instance.resources}
    preds: dict[int, list[int]] = {job.id: [] for job in instance.jobs}
    for i, j in instance.precedences:
        preds[j].append(i)
    roots = set(instance.projects)

    best: dict = {"objective": None, "starts": None}
    load = {res.id: [0] * horizon for res in instance.resources}
    placed: dict[int, int] = {}

    def lower_bound() -> float:
        # Tardiness of placed projects plus precedence-only bounds for the rest.
        est_completion: dict[int, int] = {}
        for job_id in order:
            if job_id in placed:
                est_completion[job_id] = placed[job_id] + instance.job(job_id).duration
            else:
                est = 0
                for p in preds[job_id]:
                    est = max(est, est_completion[p])
                est_completion[job_id] = est + instance.job(job_id).duration
        bound = 0.0
        for root in roots:
            job = instance.job(root)
            if job.due_date is not None:
                bound += job.weight * max(0, est_completion[root] - job.due_date)
        return bound

    def place(pos: int) -> None:
        if best["objective"] is not None and lower_bound() >= best["objective"]:
            return
        if pos == len(order):
            obj = objective_oracle(instance, placed)
            if best["objective"] is None or obj < best["objective"]:
                best["objective"] = obj
                best["starts"] = dict(placed)
            return
        job = instance.job(order[pos])
        est = 0
        for p in preds[job.id]:
            est = max(est, placed[p] + instance.job(p).duration)
        for s in range(est, horizon - job.duration + 1):
            ok = True
            for res_id, q in job.consumption.items():
                if q == 0:
                    continue
                for t in range(s, s + job.duration):
                    if load[res_id][t] + q > caps[res_id][t]:
                        ok = False
                        break
                if not ok:
                    break
            if not ok:
                continue
            for res_id, q in job.consumption.items():
                for t in range(s, s + job.duration):
                    load[res_id][t] += q
            placed[job.id] = s
            place(pos + 1)
            del placed[job.id]
            for res_id, q in job.consumption.items():
                for t in range(s, s + job.duration):
                    load[res_id][t] -= q

    place(0)
    return best["objective"], best["starts"]


# --- indicator formulas ----------------------------------------------------


def active_periods_oracle(
    instance: ProblemInstance, starts: dict[int, int], resource_id: int
) -> list[tuple[int, int]]:
    load = timeline_oracle(instance, starts, resource_id)
    periods = []
    t = 0
    while t < len(load):
        if load[t] > 0:
            begin = t
            while t < len(load) and load[t] > 0:
                t += 1
            periods.append((begin, t))
        else:
            t += 1
    return periods


def mrur_oracle(instance: ProblemInstance, starts: dict[int, int], resource_id: int) -> Fraction:
    c_max = max(starts[j.id] + j.duration for j in instance.jobs)
    numerator = sum(j.duration * j.consumption.get(resource_id, 0) for j in instance.jobs)
    denominator = sum(instance.resource(resource_id).capacity_at(t) for t in range(c_max))
    if denominator == 0:
        return Fraction(0)
    return Fraction(numerator, denominator)


def pru_oracle(
    instance: ProblemInstance, starts: dict[int, int], resource_id: int, period: tuple[int, int]
) -> Fraction:
    begin, end = period
    numerator = 0
    for job in instance.jobs:
        q = job.consumption.get(resource_id, 0)
        if q > 0 and begin <= starts[job.id] < end:
            numerator += job.duration * q
    denominator = sum(instance.resource(resource_id).capacity_at(t) for t in range(begin, end))
    return Fraction(numerator, denominator)


def auau_oracle(instance: ProblemInstance, starts: dict[int, int], resource_id: int) -> Fraction:
    periods = active_periods_oracle(instance, starts, resource_id)
    if not periods:
        return Fraction(0)
    return sum(
        (pru_oracle(instance, starts, resource_id, p) for p in periods), Fraction(0)
    ) / len(periods)


# --- suffix-relaxed schedules and left-shift closures ----------------------


def suffix_relaxed_oracle(
    instance: ProblemInstance, starts: dict[int, int], t: int
) -> dict[int, int]:
    """Literal recursion: keep starts <= t, relax the rest onto predecessors."""
    relaxed: dict[int, int] = {}

    def value(job_id: int) -> int:
        if job_id in relaxed:
            return relaxed[job_id]
        if starts[job_id] <= t:
            relaxed[job_id] = starts[job_id]
        else:
            candidates = [
                value(i) + instance.job(i).duration
                for i, j in instance.precedences
                if j == job_id
            ]
            relaxed[job_id] = max(candidates, default=0)
        return relaxed[job_id]

    for job in instance.jobs:
        value(job.id)
    return relaxed


def availability_intervals_oracle(
    instance: ProblemInstance, resource_id: int
) -> list[tuple[int, int]]:
    res = instance.resource(resource_id)
    intervals = []
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


def left_shift_closure_oracle(
    instance: ProblemInstance, starts: dict[int, int], job_id: int
) -> set[int]:
    """Naive fixpoint over the three closure rules, rescanning until stable."""
    closure = {job_id}
    intervals = {res.id: availability_intervals_oracle(instance, res.id) for res in instance.resources}
    changed = True
    while changed:
        changed = False
        for x in list(closure):
            sx = starts[x]
            x_job = instance.job(x)
            for i, j in instance.precedences:
                if j == x and starts[i] + instance.job(i).duration == sx and i not in closure:
                    closure.add(i)
                    changed = True
            for other in instance.jobs:
                if other.id == x or other.id in closure:
                    continue
                shares = any(
                    q > 0 and x_job.consumption.get(k, 0) > 0
                    for k, q in other.consumption.items()
                )
                if shares and starts[other.id] + other.duration == sx:
                    closure.add(other.id)
                    changed = True
            for res_id, q in x_job.consumption.items():
                if q <= 0:
                    continue
                ivals = intervals[res_id]
                for idx, (begin, _end) in enumerate(ivals):
                    if sx == begin and idx > 0:
                        prev_end = ivals[idx - 1][1]
                        for other in instance.jobs:
                            if (
                                other.consumption.get(res_id, 0) > 0
                                and starts[other.id] + other.duration == prev_end
                                and other.id not in closure
                            ):
                                closure.add(other.id)
                                changed = True
    return closure


# --- capacity change reconstruction ----------------------------------------


def reconstruct_capacities(
    instance: ProblemInstance,
    additions: list[tuple[int, int, int, int]],
    migrations: list[tuple[int, int, int, int, int]],
) -> dict[int, list[int]]:
    """Apply (k,s,e,c) additions and (from,to,s,e,c) migrations to capacities."""
    caps = {
        res.id: [res.capacity_at(t) for t in range(instance.horizon)]
        for res in instance.resources
    }
    for k, s, e, c in additions:
        for t in range(s, e):
            caps[k][t] += c
    for k_from, k_to, s, e, c in migrations:
        for t in range(s, e):
            caps[k_from][t] -= c
            caps[k_to][t] += c
    return caps
