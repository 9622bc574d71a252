"""Benchmark instance construction from single-mode project networks.

Pipeline: a raw activity network (parsed from an .sm file or synthesized) is
reduced to an in-forest by dropping surplus outgoing edges, working shifts
are laid over the flat resource capacities, durations/consumptions are scaled
down until the heuristic solver finds a feasible schedule, and finally each
project root receives a due date proportional to its critical path.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, replace

from .model import PERIODS_PER_DAY, Job, ProblemInstance, Resource
from .psplib import RawJob, RawNetwork
from .solver import SolveLimits, solve_heuristic

SHIFT_WINDOWS = {8: (6, 14), 16: (6, 22), 24: (0, 24)}


class GenerationError(RuntimeError):
    """Instance cannot be made feasible within the scaling policy."""


@dataclass
class GenerationConfig:
    """Knobs for instance modification and benchmark generation.

    ``alpha`` scales project due dates relative to the critical path;
    ``shift_hours`` assigns one shift pattern (8, 16, or 24 on-hours) per
    resource, cycling when shorter than the resource list. A fixed ``seed``
    makes every generated byte reproducible.
    """

    alpha: float = 1.0
    shift_hours: tuple[int, ...] = (24,)
    seed: int = 42
    max_scaling_rounds: int = 8
    solve_restarts: int = 6

    def __post_init__(self) -> None:
        if self.alpha <= 0:
            raise ValueError("alpha must be positive")
        for hours in self.shift_hours:
            if hours not in SHIFT_WINDOWS:
                raise ValueError(f"unsupported shift length {hours}")


@dataclass
class GroupRecipe:
    """One benchmark group: a network family plus modification settings."""

    name: str
    family: str  # "serial" (chain-heavy) or "parallel" (wide)
    alpha: float
    shift_hours: tuple[int, ...]


DEFAULT_GROUPS: tuple[GroupRecipe, ...] = (
    GroupRecipe("g1", "serial", 1.0, (24,)),
    GroupRecipe("g2", "serial", 1.0, (8, 16, 24, 16)),
    GroupRecipe("g3", "serial", 0.8, (24,)),
    GroupRecipe("g4", "serial", 0.8, (8, 16, 24, 16)),
    GroupRecipe("g5", "parallel", 1.0, (24,)),
    GroupRecipe("g6", "parallel", 1.0, (8, 16, 24, 16)),
    GroupRecipe("g7", "parallel", 0.8, (24,)),
    GroupRecipe("g8", "parallel", 0.8, (8, 16, 24, 16)),
)

INSTANCES_PER_GROUP = 5


# --- in-forest reduction ----------------------------------------------------


def to_inforest(network: RawNetwork) -> RawNetwork:
    """Cap every node's out-degree at one.

    For a node with several successors, the edge toward the successor with
    the longest downstream duration-weighted path survives (ties: lowest
    successor id); the rest are dropped, splitting the graph into in-trees
    whose roots become projects.
    """
    durations = {job.id: job.duration for job in network.jobs}
    depth: dict[int, int] = {}

    def downstream(job_id: int) -> int:
        if job_id not in depth:
            succs = network.successors.get(job_id, [])
            depth[job_id] = durations[job_id] + max((downstream(s) for s in succs), default=0)
        return depth[job_id]

    successors: dict[int, list[int]] = {}
    for job in network.jobs:
        succs = network.successors.get(job.id, [])
        if len(succs) <= 1:
            successors[job.id] = list(succs)
        else:
            keep = max(succs, key=lambda s: (downstream(s), -s))
            successors[job.id] = [keep]
    return RawNetwork(
        jobs=[RawJob(j.id, j.duration, list(j.requests)) for j in network.jobs],
        successors=successors,
        capacities=list(network.capacities),
        name=network.name,
    )


def inforest_edges(network: RawNetwork) -> list[tuple[int, int]]:
    return sorted((i, succs[0]) for i, succs in network.successors.items() if succs)


# --- modifications -----------------------------------------------------------


def _shift_pattern(capacity: int, hours: int) -> list[int]:
    begin, end = SHIFT_WINDOWS[hours]
    return [capacity if begin <= h < end else 0 for h in range(PERIODS_PER_DAY)]


def _critical_paths(instance_jobs: list[Job], edges: list[tuple[int, int]]) -> dict[int, int]:
    """Longest duration-weighted path ending at each in-tree root."""
    duration = {job.id: job.duration for job in instance_jobs}
    successor = {i: j for i, j in edges}
    tails: dict[int, int] = {}

    def tail(job_id: int) -> int:
        if job_id not in tails:
            succ = successor.get(job_id)
            tails[job_id] = duration[job_id] + (tail(succ) if succ is not None else 0)
        return tails[job_id]

    roots = {job.id for job in instance_jobs} - set(successor)
    critical = {root: 0 for root in roots}
    for job in instance_jobs:
        root = job.id
        while root in successor:
            root = successor[root]
        critical[root] = max(critical[root], tail(job.id))
    return critical


def apply_modifications(network: RawNetwork, config: GenerationConfig) -> ProblemInstance:
    """Turn an in-forest network into a shift-calendared, due-dated instance.

    The horizon is fixed from the unscaled workload; if no feasible schedule
    exists within it, durations are halved (rounding up), then consumptions
    decremented toward one, until the heuristic solver succeeds. Due dates
    are set after scaling so the tightness factor keeps its meaning.
    """
    for succs in network.successors.values():
        if len(succs) > 1:
            raise ValueError("apply_modifications requires an in-forest network")
    edges = inforest_edges(network)
    m = len(network.capacities)
    resources = [
        Resource(k, _shift_pattern(network.capacities[k - 1], config.shift_hours[(k - 1) % len(config.shift_hours)]))
        for k in range(1, m + 1)
    ]

    durations = {job.id: job.duration for job in network.jobs}
    requests = {job.id: list(job.requests) for job in network.jobs}

    def build(with_due_dates: bool) -> ProblemInstance:
        jobs = [
            Job(
                j,
                durations[j],
                consumption={k + 1: q for k, q in enumerate(requests[j]) if q > 0},
            )
            for j in sorted(durations)
        ]
        if with_due_dates:
            critical = _critical_paths(jobs, edges)
            rng = random.Random(config.seed * 7919 + len(jobs))
            for job in jobs:
                if job.id in critical:
                    job.due_date = max(1, round(config.alpha * critical[job.id]))
                    job.weight = float(rng.randint(1, 3))
        return ProblemInstance(jobs, edges, resources, horizon)

    # Horizon from the unscaled workload, aligned to whole days.
    first_critical = _critical_paths(
        [Job(j, durations[j]) for j in sorted(durations)], edges
    )
    workload = sum(durations.values())
    max_due = max(
        (round(config.alpha * c) for c in first_critical.values()), default=0
    )
    horizon = PERIODS_PER_DAY * -(-(workload + max_due) // PERIODS_PER_DAY)
    horizon = max(horizon, PERIODS_PER_DAY)

    limits = SolveLimits(restarts=config.solve_restarts, seed=config.seed)
    for round_no in range(config.max_scaling_rounds + 1):
        candidate = build(with_due_dates=False)
        candidate.check_structure()
        if solve_heuristic(candidate, limits).feasible:
            instance = build(with_due_dates=True)
            instance.check_structure()
            return instance
        halved = {j: -(-d // 2) for j, d in durations.items()}
        if halved != durations:
            durations = halved
            continue
        reduced = {j: [max(1, q - 1) if q > 1 else q for q in reqs] for j, reqs in requests.items()}
        if reduced == requests:
            break
        requests = reduced
    raise GenerationError("instance cannot be scaled into feasibility within the horizon")


# --- synthetic networks ------------------------------------------------------


def synthesize_network(
    rng: random.Random,
    family: str,
    jobs: int = 30,
    resources: int = 4,
) -> RawNetwork:
    """Random single-mode network in the style of the standard benchmarks.

    ``serial`` wires long feeding chains (deep trees after reduction);
    ``parallel`` spreads many short chains (wide forests).
    """
    capacities = [rng.randint(8, 12) for _ in range(resources)]
    raw_jobs = [RawJob(j, rng.randint(1, 8), [0] * resources) for j in range(1, jobs + 1)]
    for job in raw_jobs:
        used = rng.sample(range(resources), rng.randint(1, 2))
        for k in used:
            job.requests[k] = rng.randint(1, max(1, capacities[k] // 2))
    successors: dict[int, list[int]] = {j: [] for j in range(1, jobs + 1)}
    window = 3 if family == "serial" else 10
    link_chance = 0.9 if family == "serial" else 0.55
    for j in range(1, jobs):
        if rng.random() < link_chance:
            hi = min(jobs, j + window)
            successors[j].append(rng.randint(j + 1, hi))
        if family == "serial" and rng.random() < 0.25:
            hi = min(jobs, j + window * 2)
            extra = rng.randint(j + 1, hi)
            if extra not in successors[j]:
                successors[j].append(extra)
    return RawNetwork(jobs=raw_jobs, successors=successors, capacities=capacities)


def generate_group(recipe: GroupRecipe, config: GenerationConfig) -> list[ProblemInstance]:
    instances = []
    for index in range(INSTANCES_PER_GROUP):
        rng = random.Random(f"{config.seed}:{recipe.name}:{index}")
        network = to_inforest(synthesize_network(rng, recipe.family))
        instance_config = replace(
            config,
            alpha=recipe.alpha,
            shift_hours=recipe.shift_hours,
            seed=rng.randint(0, 2**30),
        )
        instances.append(apply_modifications(network, instance_config))
    return instances


def generate_benchmark(
    config: GenerationConfig | None = None,
    groups: tuple[GroupRecipe, ...] = DEFAULT_GROUPS,
) -> dict[str, list[ProblemInstance]]:
    """All benchmark groups, keyed by group name, deterministic per seed."""
    config = config or GenerationConfig()
    return {recipe.name: generate_group(recipe, config) for recipe in groups}
