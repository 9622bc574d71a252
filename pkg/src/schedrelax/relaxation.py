"""Shared plumbing for relaxation runs: proposals, metrics, and the
solve-reduce-extract step both algorithms perform each iteration."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any

from .accounting import (
    CapacityAddition,
    CapacityMigration,
    apply_changes,
    extract_changes,
    reduce_capacity_changes,
    verify_change_accounting,
)
from .formats import instance_to_dict, schedule_to_dict
from .model import ProblemInstance, Schedule, tardiness, weighted_tardiness


@dataclass
class RelaxationProposal:
    """One iteration's outcome: the consumed capacity changes applied to the
    original instance, the schedule that justifies them, and its metrics."""

    instance: ProblemInstance
    schedule: Schedule
    additions: list[CapacityAddition]
    migrations: list[CapacityMigration]
    delta_tardiness: int
    delta_completion_sum: int
    iteration: int

    @property
    def is_identity(self) -> bool:
        return not self.additions and not self.migrations


@dataclass
class RelaxationRun:
    """Proposal sequence produced by a relaxation algorithm, oldest first."""

    proposals: list[RelaxationProposal]
    baseline_schedule: Schedule
    target: int

    @property
    def final(self) -> RelaxationProposal:
        return self.proposals[-1]


def completion_difference(
    original: ProblemInstance, before: Schedule, after: Schedule
) -> int:
    """Sum over jobs of the absolute completion-time change."""
    total = 0
    for job in original.jobs:
        total += abs(
            (before.starts[job.id] + job.duration) - (after.starts[job.id] + job.duration)
        )
    return total


def proposal_metrics(
    original: ProblemInstance,
    baseline: Schedule,
    proposed: Schedule,
    target: int,
) -> tuple[int, int]:
    """(target tardiness improvement, completion-time difference)."""
    delta_t = tardiness(original, baseline, target) - tardiness(original, proposed, target)
    return delta_t, completion_difference(original, baseline, proposed)


def build_proposal(
    original: ProblemInstance,
    baseline: Schedule,
    working: ProblemInstance,
    schedule: Schedule,
    target: int,
    iteration: int,
) -> RelaxationProposal:
    """Reduce the working instance's extra capacity to what the schedule
    consumes, express it as changes, and package everything with metrics.
    The accounting invariants are asserted on every proposal built."""
    reduced = reduce_capacity_changes(original, working, schedule)
    additions, migrations = extract_changes(original, reduced, schedule)
    proposed_instance = apply_changes(original, additions, migrations)
    verify_change_accounting(original, reduced, proposed_instance, schedule)
    delta_t, delta_c = proposal_metrics(original, baseline, schedule, target)
    return RelaxationProposal(
        instance=proposed_instance,
        schedule=schedule.copy(),
        additions=additions,
        migrations=migrations,
        delta_tardiness=delta_t,
        delta_completion_sum=delta_c,
        iteration=iteration,
    )


def identity_proposal(
    original: ProblemInstance, baseline: Schedule, target: int
) -> RelaxationProposal:
    return RelaxationProposal(
        instance=original,
        schedule=baseline.copy(),
        additions=[],
        migrations=[],
        delta_tardiness=0,
        delta_completion_sum=0,
        iteration=0,
    )


def default_target(instance: ProblemInstance, schedule: Schedule) -> int:
    """Project with the largest weighted tardiness; ties to the lowest id."""
    _, per_project = weighted_tardiness(instance, schedule)
    return max(sorted(per_project), key=lambda p: per_project[p])


def proposal_to_dict(proposal: RelaxationProposal) -> dict[str, Any]:
    return {
        "instance": instance_to_dict(proposal.instance),
        "schedule": schedule_to_dict(proposal.schedule),
        "additions": [
            {"k": a.resource, "s": a.start, "e": a.end, "c": a.amount}
            for a in proposal.additions
        ],
        "migrations": [
            {"from": m.donor, "to": m.recipient, "s": m.start, "e": m.end, "c": m.amount}
            for m in proposal.migrations
        ],
        "metrics": {
            "delta_tardiness": proposal.delta_tardiness,
            "delta_completion_sum": proposal.delta_completion_sum,
        },
        "iteration": proposal.iteration,
    }
