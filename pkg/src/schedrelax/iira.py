"""Untargeted capacity relaxation driven by bottleneck indicators.

Each iteration scores every resource with the configured indicator, picks
the top one, computes its granular utilization, convolves that with a
smoothing kernel to spread load information into neighboring blocks, raises
the capacity of the highest-potential blocks, and re-solves with the current
schedule as a warm start. Capacity raises accumulate across iterations on a
working copy; the reported proposal is always reduced against the original
instance.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .indicators import rank_resources
from .model import ProblemInstance, Schedule, consumption_timeline, tardiness, validate
from .relaxation import (
    RelaxationProposal,
    RelaxationRun,
    build_proposal,
    identity_proposal,
)
from .solver import SolveLimits, solve_heuristic

KERNEL_FAMILIES = ("uniform", "triangular")


@dataclass(frozen=True)
class Kernel:
    """Symmetric convolution kernel with non-negative weights summing to 1."""

    family: str
    half_width: int

    def __post_init__(self) -> None:
        if self.family not in KERNEL_FAMILIES:
            raise ValueError(f"kernel family must be one of {KERNEL_FAMILIES}")
        if self.half_width < 0:
            raise ValueError("kernel half-width must be non-negative")

    def weights(self) -> list[Fraction]:
        w = self.half_width
        if self.family == "uniform":
            return [Fraction(1, 2 * w + 1)] * (2 * w + 1)
        raw = [w + 1 - abs(offset) for offset in range(-w, w + 1)]
        total = sum(raw)
        return [Fraction(r, total) for r in raw]

    @property
    def label(self) -> str:
        return f"{self.family}{self.half_width}"


IDENTITY_KERNEL = Kernel("uniform", 0)


@dataclass
class IiraParams:
    indicator: str = "MRUR"  # MRUR or AUAU
    kernel: Kernel = IDENTITY_KERNEL
    granularity: int = 1
    periods_limit: int = 1  # granular blocks relaxed per iteration
    iterations_limit: int = 1
    capacity_step: int = 1  # capacity added to each selected block

    def __post_init__(self) -> None:
        if self.indicator.upper() not in ("MRUR", "AUAU"):
            raise ValueError("indicator must be MRUR or AUAU")
        if self.granularity < 1:
            raise ValueError("granularity must be at least 1")
        if self.periods_limit < 1 or self.iterations_limit < 1:
            raise ValueError("periods and iterations limits must be at least 1")
        if self.capacity_step < 1:
            raise ValueError("capacity step must be at least 1")

    @property
    def label(self) -> str:
        return (
            f"indicator={self.indicator.upper()};kernel={self.kernel.label};"
            f"G={self.granularity};P={self.periods_limit};I={self.iterations_limit};"
            f"step={self.capacity_step}"
        )

    def to_dict(self) -> dict:
        return {
            "indicator": self.indicator.upper(),
            "kernel": {"family": self.kernel.family, "half_width": self.kernel.half_width},
            "granularity": self.granularity,
            "periods_limit": self.periods_limit,
            "iterations_limit": self.iterations_limit,
            "capacity_step": self.capacity_step,
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "IiraParams":
        kernel = doc.get("kernel", {})
        return cls(
            indicator=doc.get("indicator", "MRUR"),
            kernel=Kernel(kernel.get("family", "uniform"), int(kernel.get("half_width", 0))),
            granularity=int(doc.get("granularity", 1)),
            periods_limit=int(doc.get("periods_limit", 1)),
            iterations_limit=int(doc.get("iterations_limit", 1)),
            capacity_step=int(doc.get("capacity_step", 1)),
        )


def granular_load(
    instance: ProblemInstance, schedule: Schedule, resource_id: int, granularity: int
) -> list[Fraction]:
    """Utilization ratio (consumed over available) per granular block.

    Blocks cover ``granularity`` periods each, the last one possibly fewer.
    Blocks without capacity map to zero so off-shift blocks stay comparable.
    """
    load = consumption_timeline(instance, schedule, resource_id)
    capacity = instance.capacity_profile(resource_id)
    blocks = -(-instance.horizon // granularity)
    values: list[Fraction] = []
    for b in range(blocks):
        lo = b * granularity
        hi = min(lo + granularity, instance.horizon)
        available = int(capacity[lo:hi].sum())
        consumed = int(load[lo:hi].sum())
        values.append(Fraction(consumed, available) if available else Fraction(0))
    return values


def improvement_potential(load: list[Fraction], kernel: Kernel) -> list[Fraction]:
    """Discrete convolution with zero padding; output length matches input."""
    weights = kernel.weights()
    w = kernel.half_width
    out: list[Fraction] = []
    for i in range(len(load)):
        acc = Fraction(0)
        for offset in range(-w, w + 1):
            j = i + offset
            if 0 <= j < len(load):
                acc += weights[offset + w] * load[j]
        out.append(acc)
    return out


def select_blocks(potential: list[Fraction], count: int) -> list[int]:
    """Indices of the highest-potential blocks; ties go to the earliest."""
    ranked = sorted(range(len(potential)), key=lambda i: (-potential[i], i))
    return sorted(ranked[:count])


def run_iira(
    instance: ProblemInstance,
    schedule: Schedule,
    params: IiraParams,
    target: int,
    limits: SolveLimits | None = None,
) -> RelaxationRun:
    """Iterate indicator-guided capacity raises from a feasible schedule.

    The target project is used only for metric reporting; the relaxation
    itself is untargeted. The adopted schedule never worsens the total
    objective or the target's tardiness across iterations.
    """
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
        ranking = rank_resources(working, current, params.indicator)
        bottleneck = ranking[0].resource
        load = granular_load(working, current, bottleneck, params.granularity)
        potential = improvement_potential(load, params.kernel)
        blocks = select_blocks(potential, params.periods_limit)
        deltas: dict[tuple[int, int], int] = {}
        for b in blocks:
            lo = b * params.granularity
            hi = min(lo + params.granularity, working.horizon)
            for t in range(lo, hi):
                deltas[(bottleneck, t)] = params.capacity_step
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
