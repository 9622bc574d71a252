"""Turning raw capacity relaxations into additions and migrations.

After a relaxed instance is re-solved, its capacity increases are first
*reduced* to the amounts the new schedule actually consumes above the
original capacities. The per-resource difference profile is then decomposed
into maximal rectangles (level by level, stacking identical runs), and each
rectangle is funded by a donor resource with enough idle capacity over the
rectangle's span (a migration) or, failing that, booked as an addition.
Migrations are preferred; donors are picked by largest remaining slack with
ties toward the lowest id, and their slack is debited so later rectangles
cannot reuse it.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import ProblemInstance, Schedule, consumption_timeline


@dataclass(frozen=True)
class CapacityAddition:
    """Extra capacity c on resource k over the half-open span [start, end)."""

    resource: int
    start: int
    end: int
    amount: int


@dataclass(frozen=True)
class CapacityMigration:
    """Capacity c moved from donor to recipient over [start, end)."""

    donor: int
    recipient: int
    start: int
    end: int
    amount: int


def reduce_capacity_changes(
    original: ProblemInstance, modified: ProblemInstance, schedule: Schedule
) -> ProblemInstance:
    """Keep only the capacity increases the schedule consumes.

    Reduced capacity is original + max(0, consumption - original) pointwise,
    which is the smallest pointwise enlargement of the original capacities
    that keeps the schedule feasible.
    """
    original_caps = original.capacity_matrix()
    modified_caps = modified.capacity_matrix()
    if (modified_caps < original_caps).any():
        raise AssertionError("modified capacities must dominate the original")
    deltas: dict[tuple[int, int], int] = {}
    for idx, res in enumerate(original.resources):
        load = consumption_timeline(modified, schedule, res.id)
        excess = np.maximum(load - original_caps[idx], 0)
        if (load > modified_caps[idx]).any():
            raise AssertionError("schedule must be feasible for the modified instance")
        for t in np.nonzero(excess)[0]:
            deltas[(res.id, int(t))] = int(excess[t])
    return original.with_overlay_deltas(deltas)


def _rectangles(diff: np.ndarray) -> list[tuple[int, int, int]]:
    """Decompose a non-negative profile into (start, end, height) rectangles.

    Slab decomposition: for each level take the maximal runs where the
    profile reaches that level, then merge runs with identical spans across
    consecutive levels into taller rectangles. Deterministic: rectangles come
    out sorted by start, then end, then base level.
    """
    rects: list[tuple[int, int, int, int]] = []  # (start, end, base_level, height)
    max_level = int(diff.max()) if diff.size else 0
    open_runs: dict[tuple[int, int], int] = {}
    for level in range(1, max_level + 1):
        mask = diff >= level
        runs = []
        t = 0
        while t < len(mask):
            if mask[t]:
                begin = t
                while t < len(mask) and mask[t]:
                    t += 1
                runs.append((begin, t))
            else:
                t += 1
        next_open: dict[tuple[int, int], int] = {}
        for span in runs:
            if span in open_runs:
                next_open[span] = open_runs.pop(span)
            else:
                next_open[span] = level
        for (begin, end), base in open_runs.items():
            rects.append((begin, end, base, level - base))
        open_runs = next_open
    for (begin, end), base in open_runs.items():
        rects.append((begin, end, base, max_level + 1 - base))
    rects.sort(key=lambda r: (r[0], r[1], r[2]))
    return [(begin, end, height) for begin, end, _base, height in rects]


def extract_changes(
    original: ProblemInstance, reduced: ProblemInstance, schedule: Schedule
) -> tuple[list[CapacityAddition], list[CapacityMigration]]:
    """Express reduced-minus-original capacity as additions and migrations."""
    original_caps = original.capacity_matrix()
    reduced_caps = reduced.capacity_matrix()
    if (reduced_caps < original_caps).any():
        raise AssertionError("reduced capacities must dominate the original")
    # Donor slack: original capacity minus consumption, debited as used.
    slack = original_caps.astype(np.int64).copy()
    for idx, res in enumerate(original.resources):
        slack[idx] -= consumption_timeline(original, schedule, res.id)
    row_of = {res.id: idx for idx, res in enumerate(original.resources)}

    additions: list[CapacityAddition] = []
    migrations: list[CapacityMigration] = []
    for res in original.resources:
        idx = row_of[res.id]
        diff = reduced_caps[idx] - original_caps[idx]
        for begin, end, height in _rectangles(diff):
            donor_id = None
            donor_slack = 0
            for other in original.resources:
                if other.id == res.id:
                    continue
                available = int(slack[row_of[other.id], begin:end].min())
                if available >= height and available > donor_slack:
                    donor_id = other.id
                    donor_slack = available
            if donor_id is None:
                additions.append(CapacityAddition(res.id, begin, end, height))
            else:
                migrations.append(CapacityMigration(donor_id, res.id, begin, end, height))
                slack[row_of[donor_id], begin:end] -= height
    return additions, migrations


def apply_changes(
    original: ProblemInstance,
    additions: list[CapacityAddition],
    migrations: list[CapacityMigration],
) -> ProblemInstance:
    """Instance obtained by applying the changes to the original capacities."""
    deltas: dict[tuple[int, int], int] = {}

    def bump(resource: int, start: int, end: int, amount: int) -> None:
        for t in range(start, end):
            key = (resource, t)
            deltas[key] = deltas.get(key, 0) + amount

    for add in additions:
        bump(add.resource, add.start, add.end, add.amount)
    for mig in migrations:
        bump(mig.recipient, mig.start, mig.end, mig.amount)
        bump(mig.donor, mig.start, mig.end, -mig.amount)
    return original.with_overlay_deltas(deltas)


def verify_change_accounting(
    original: ProblemInstance,
    reduced: ProblemInstance,
    proposed: ProblemInstance,
    schedule: Schedule,
) -> None:
    """Assert the accounting invariants on one proposal.

    Recomposing the changes onto the original must reproduce the reduced
    capacities wherever capacity was added, donors may only dip into idle
    capacity (never below their consumption), and the reduction must be
    pointwise minimal for the schedule.
    """
    original_caps = original.capacity_matrix()
    reduced_caps = reduced.capacity_matrix()
    proposed_caps = proposed.capacity_matrix()
    if not np.array_equal(np.maximum(proposed_caps, original_caps), reduced_caps):
        raise AssertionError("changes do not recompose into the reduced capacities")
    for idx, res in enumerate(original.resources):
        load = consumption_timeline(original, schedule, res.id)
        if (load > proposed_caps[idx]).any():
            raise AssertionError(f"donor {res.id} dips below its consumption")
        expected = original_caps[idx] + np.maximum(load - original_caps[idx], 0)
        if not np.array_equal(reduced_caps[idx], expected):
            raise AssertionError("reduction is not pointwise minimal")
