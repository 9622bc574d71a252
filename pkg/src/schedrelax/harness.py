"""Batch evaluation of relaxation algorithms over parameter grids.

Every (instance, parameter combination) pair gets one evaluation record with
the target project's tardiness improvement and the schedule difference. The
summary counts, per algorithm, on how many instances it improved the target,
on how many it was the only one to do so, and on how many its best
improvement was unbeaten.
"""

from __future__ import annotations

import csv
import io
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Sequence

from .iira import IiraParams, Kernel, run_iira
from .model import ProblemInstance, Schedule
from .relaxation import default_target, proposal_metrics
from .solver import SolveLimits, solve_heuristic
from .ssira import SsiraParams, run_ssira

ALGORITHMS = ("iira", "ssira")


@dataclass(frozen=True)
class GridCombo:
    algorithm: str
    index: int
    params: IiraParams | SsiraParams

    @property
    def label(self) -> str:
        return self.params.label


@dataclass
class EvaluationRecord:
    instance_id: str
    algorithm: str
    combo_index: int
    combo: str
    target: int
    delta_tardiness: int
    delta_completion_sum: int
    iterations: int
    wall_time: float  # informative only; kept out of the deterministic outputs


# --- parameter grids --------------------------------------------------------

DEFAULT_GRID: dict[str, dict[str, Any]] = {
    "iira": {
        "indicators": ["MRUR", "AUAU"],
        "kernels": [
            ["uniform", 1],
            ["uniform", 2],
            ["uniform", 3],
            ["triangular", 1],
            ["triangular", 2],
            ["triangular", 3],
        ],
        "granularities": [1, 2, 4],
        "periods_limits": [1, 2],
        "iterations_limits": [1, 2],
        "capacity_steps": [1, 2],
    },
    "ssira": {
        "sort_keys": ["earliest_start", "smallest_shift"],
        "intervals_limits": [1, 2, 4],
        "iterations_limits": [1, 2, 3, 4, 5, 6],
    },
}

REDUCED_GRID: dict[str, dict[str, Any]] = {
    "iira": {
        "indicators": ["MRUR", "AUAU"],
        "kernels": [["uniform", 1], ["uniform", 3], ["triangular", 2]],
        "granularities": [1, 2],
        "periods_limits": [2],
        "iterations_limits": [2],
        "capacity_steps": [1, 2],
    },
    "ssira": {
        "sort_keys": ["earliest_start", "smallest_shift"],
        "intervals_limits": [1, 2],
        "iterations_limits": [1, 2, 3],
    },
}

GRID_PRESETS = {"default": DEFAULT_GRID, "reduced": REDUCED_GRID}


def expand_grid(config: dict[str, dict[str, Any]], algorithm: str) -> list[GridCombo]:
    combos: list[GridCombo] = []
    if algorithm == "iira":
        section = config["iira"]
        index = 0
        for indicator in section["indicators"]:
            for family, half_width in section["kernels"]:
                for granularity in section["granularities"]:
                    for periods in section["periods_limits"]:
                        for iterations in section["iterations_limits"]:
                            for step in section["capacity_steps"]:
                                combos.append(
                                    GridCombo(
                                        "iira",
                                        index,
                                        IiraParams(
                                            indicator=indicator,
                                            kernel=Kernel(family, int(half_width)),
                                            granularity=granularity,
                                            periods_limit=periods,
                                            iterations_limit=iterations,
                                            capacity_step=step,
                                        ),
                                    )
                                )
                                index += 1
    elif algorithm == "ssira":
        section = config["ssira"]
        index = 0
        for sort_key in section["sort_keys"]:
            for intervals in section["intervals_limits"]:
                for iterations in section["iterations_limits"]:
                    combos.append(
                        GridCombo(
                            "ssira",
                            index,
                            SsiraParams(
                                iterations_limit=iterations,
                                intervals_limit=intervals,
                                sort_key=sort_key,
                            ),
                        )
                    )
                    index += 1
    else:
        raise ValueError(f"unknown algorithm {algorithm!r}")
    return combos


# --- evaluation --------------------------------------------------------------


def metrics(
    original: ProblemInstance,
    baseline: Schedule,
    proposal_schedule: Schedule,
    target: int,
) -> tuple[int, int]:
    """Target tardiness improvement and summed completion-time difference."""
    return proposal_metrics(original, baseline, proposal_schedule, target)


def evaluate_instance(
    instance_id: str,
    instance: ProblemInstance,
    combos: Sequence[GridCombo],
    limits: SolveLimits,
    target: int | None = None,
) -> list[EvaluationRecord]:
    """Run every combination against one instance with a shared baseline."""
    baseline = solve_heuristic(instance, limits).require_schedule()
    chosen = default_target(instance, baseline) if target is None else target
    records: list[EvaluationRecord] = []
    for combo in combos:
        begin = time.perf_counter()
        if combo.algorithm == "iira":
            run = run_iira(instance, baseline, combo.params, chosen, limits)
        else:
            run = run_ssira(instance, baseline, combo.params, chosen, limits)
        elapsed = time.perf_counter() - begin
        final = run.final
        records.append(
            EvaluationRecord(
                instance_id=instance_id,
                algorithm=combo.algorithm,
                combo_index=combo.index,
                combo=combo.label,
                target=chosen,
                delta_tardiness=final.delta_tardiness,
                delta_completion_sum=final.delta_completion_sum,
                iterations=len(run.proposals),
                wall_time=elapsed,
            )
        )
    return records


def _evaluate_task(args) -> list[EvaluationRecord]:
    return evaluate_instance(*args)


def run_grid(
    instances: Sequence[tuple[str, ProblemInstance]],
    algorithms: Sequence[str],
    grid: dict[str, dict[str, Any]] | None = None,
    limits: SolveLimits | None = None,
    jobs: int = 1,
) -> list[EvaluationRecord]:
    """Evaluate every combination on every instance.

    Instance evaluations are independent and may run in parallel; results
    are merged in a fixed order (instance id, algorithm, combination index)
    so the output never depends on scheduling.
    """
    grid = grid or DEFAULT_GRID
    limits = limits or SolveLimits()
    combos: list[GridCombo] = []
    for algorithm in algorithms:
        combos.extend(expand_grid(grid, algorithm))
    tasks = [(instance_id, instance, combos, limits) for instance_id, instance in instances]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            chunks = list(pool.map(_evaluate_task, tasks))
    else:
        chunks = [_evaluate_task(task) for task in tasks]
    records = [record for chunk in chunks for record in chunk]
    records.sort(key=lambda r: (r.instance_id, r.algorithm, r.combo_index))
    return records


# --- summary and outputs ------------------------------------------------------


def best_by_instance(
    records: Sequence[EvaluationRecord], algorithm: str
) -> dict[str, EvaluationRecord]:
    """Best combination per instance: most improvement, then least change."""
    best: dict[str, EvaluationRecord] = {}
    for record in records:
        if record.algorithm != algorithm:
            continue
        cur = best.get(record.instance_id)
        if cur is None or (
            (-record.delta_tardiness, record.delta_completion_sum, record.combo_index)
            < (-cur.delta_tardiness, cur.delta_completion_sum, cur.combo_index)
        ):
            best[record.instance_id] = record
    return best


def summarize(records: Sequence[EvaluationRecord]) -> dict[str, dict[str, int]]:
    """Improving / Unique / Best counts per algorithm over all instances."""
    present = [a for a in ALGORITHMS if any(r.algorithm == a for r in records)]
    best = {a: best_by_instance(records, a) for a in present}
    instance_ids = sorted({r.instance_id for r in records})
    summary: dict[str, dict[str, int]] = {}
    for algorithm in present:
        others = [a for a in present if a != algorithm]
        improving = unique = top = 0
        for instance_id in instance_ids:
            mine = best[algorithm].get(instance_id)
            delta = mine.delta_tardiness if mine else 0
            other_delta = max(
                (
                    best[a][instance_id].delta_tardiness
                    for a in others
                    if instance_id in best[a]
                ),
                default=0,
            )
            if delta > 0:
                improving += 1
                if other_delta <= 0:
                    unique += 1
                if delta >= other_delta:
                    top += 1
        summary[algorithm] = {"improving": improving, "unique": unique, "best": top}
    return summary


def render_summary(records: Sequence[EvaluationRecord]) -> str:
    instance_count = len({r.instance_id for r in records})
    summary = summarize(records)
    lines = [f"{'Algorithm':<10}{'Criteria':<12}{'Solutions':>9}  % (of {instance_count})"]
    for algorithm, counts in summary.items():
        for criteria, key in (("Improving", "improving"), ("Unique", "unique"), ("Best", "best")):
            count = counts[key]
            pct = 100.0 * count / instance_count if instance_count else 0.0
            lines.append(f"{algorithm.upper():<10}{criteria:<12}{count:>9}  {pct:.1f}%")
    return "\n".join(lines) + "\n"


RECORD_COLUMNS = (
    "instance",
    "algorithm",
    "combo_index",
    "combo",
    "target",
    "delta_tardiness",
    "delta_completion_sum",
    "iterations",
)


def records_csv(records: Sequence[EvaluationRecord]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(RECORD_COLUMNS)
    for r in records:
        writer.writerow(
            [
                r.instance_id,
                r.algorithm,
                r.combo_index,
                r.combo,
                r.target,
                r.delta_tardiness,
                r.delta_completion_sum,
                r.iterations,
            ]
        )
    return buffer.getvalue()


def plotdata_csv(records: Sequence[EvaluationRecord]) -> str:
    """Improvement-versus-difference points: the best combination of each
    algorithm on each instance."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["instance", "algorithm", "combo", "delta_completion_sum", "delta_tardiness"])
    present = [a for a in ALGORITHMS if any(r.algorithm == a for r in records)]
    best = {a: best_by_instance(records, a) for a in present}
    for instance_id in sorted({r.instance_id for r in records}):
        for algorithm in present:
            record = best[algorithm].get(instance_id)
            if record is not None:
                writer.writerow(
                    [
                        instance_id,
                        algorithm,
                        record.combo,
                        record.delta_completion_sum,
                        record.delta_tardiness,
                    ]
                )
    return buffer.getvalue()


def timings_csv(records: Sequence[EvaluationRecord]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["instance", "algorithm", "combo_index", "wall_time_s"])
    for r in records:
        writer.writerow([r.instance_id, r.algorithm, r.combo_index, f"{r.wall_time:.4f}"])
    return buffer.getvalue()


def emit_outputs(records: Sequence[EvaluationRecord], out_dir: str | Path) -> dict[str, Path]:
    """Write records.csv, summary.txt, and plotdata.csv (all deterministic),
    plus timings.csv (wall-clock, excluded from reproducibility checks)."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = {
        "records": out / "records.csv",
        "summary": out / "summary.txt",
        "plotdata": out / "plotdata.csv",
        "timings": out / "timings.csv",
    }
    paths["records"].write_text(records_csv(records), encoding="utf-8")
    paths["summary"].write_text(render_summary(records), encoding="utf-8")
    paths["plotdata"].write_text(plotdata_csv(records), encoding="utf-8")
    paths["timings"].write_text(timings_csv(records), encoding="utf-8")
    return paths
