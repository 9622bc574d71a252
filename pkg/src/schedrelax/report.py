"""Figure rendering for evaluation outputs and schedule comparisons.

Renders PNG files next to the delimited outputs: an improvement-versus-
difference scatter from plotdata.csv, and a two-pane original/relaxed view
of a proposal (job bars per project above stacked consumption/capacity
step profiles, with capacity changes highlighted).
"""

from __future__ import annotations

import csv
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .model import ProblemInstance, Schedule, consumption_timeline
from .relaxation import RelaxationProposal

ALGORITHM_COLORS = {"iira": "tab:blue", "ssira": "tab:orange"}


def render_improvement_scatter(plotdata_path: str | Path, out_path: str | Path) -> Path:
    """Scatter of schedule difference against achieved improvement."""
    rows = list(csv.DictReader(Path(plotdata_path).open()))
    fig, ax = plt.subplots(figsize=(6, 4.5))
    for algorithm in sorted({row["algorithm"] for row in rows}):
        xs = [int(r["delta_completion_sum"]) for r in rows if r["algorithm"] == algorithm]
        ys = [int(r["delta_tardiness"]) for r in rows if r["algorithm"] == algorithm]
        ax.scatter(
            xs,
            ys,
            s=28,
            alpha=0.75,
            label=algorithm.upper(),
            color=ALGORITHM_COLORS.get(algorithm, "tab:gray"),
        )
    ax.set_xlabel("schedule difference (sum of completion shifts)")
    ax.set_ylabel("target tardiness improvement")
    ax.legend(loc="best")
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    out = Path(out_path)
    fig.savefig(out, dpi=150)
    plt.close(fig)
    return out


def _draw_schedule(ax_jobs, ax_loads, instance: ProblemInstance, schedule: Schedule,
                   original: ProblemInstance | None = None, t_max: int | None = None) -> None:
    roots = {job_id: idx for idx, job_id in enumerate(instance.projects)}

    def project_of(job_id: int) -> int:
        while instance.successor_of(job_id) is not None:
            job_id = instance.successor_of(job_id)
        return job_id

    cmap = plt.get_cmap("tab10")
    lanes: dict[int, int] = {}
    for job in sorted(instance.jobs, key=lambda j: (roots[project_of(j.id)], schedule.starts[j.id], j.id)):
        lanes[job.id] = len(lanes)
        ax_jobs.barh(
            lanes[job.id],
            job.duration,
            left=schedule.starts[job.id],
            height=0.8,
            color=cmap(roots[project_of(job.id)] % 10),
            edgecolor="black",
            linewidth=0.3,
        )
        ax_jobs.text(
            schedule.starts[job.id] + job.duration / 2,
            lanes[job.id],
            str(job.id),
            ha="center",
            va="center",
            fontsize=7,
        )
    ax_jobs.set_yticks([])
    ax_jobs.set_xlim(0, t_max)
    ax_jobs.invert_yaxis()

    horizon = t_max or instance.horizon
    t = np.arange(horizon)
    bottom = np.zeros(horizon)
    for res in instance.resources:
        load = consumption_timeline(instance, schedule, res.id)[:horizon]
        ax_loads.bar(t, load, bottom=bottom, width=1.0, align="edge", alpha=0.55,
                     label=f"load R{res.id}")
        bottom = bottom + load
        caps = instance.capacity_profile(res.id)[:horizon]
        ax_loads.step(np.append(t, horizon), np.append(caps, caps[-1]), where="post",
                      linewidth=1.2, label=f"capacity R{res.id}")
        if original is not None:
            orig_caps = original.capacity_profile(res.id)[:horizon]
            changed = caps != orig_caps
            if changed.any():
                ax_loads.fill_between(
                    np.append(t, horizon),
                    np.append(np.minimum(caps, orig_caps), 0),
                    np.append(np.maximum(caps, orig_caps), 0),
                    where=np.append(changed, False),
                    step="post",
                    color="tab:red",
                    alpha=0.35,
                )
    ax_loads.set_xlim(0, t_max)
    ax_loads.legend(loc="upper right", fontsize=7, ncol=2)


def render_proposal(
    original: ProblemInstance,
    baseline: Schedule,
    proposal: RelaxationProposal,
    out_path: str | Path,
) -> Path:
    """Original schedule above the relaxed one, capacity edits highlighted."""
    t_max = max(
        max(baseline.starts[j.id] + j.duration for j in original.jobs),
        max(proposal.schedule.starts[j.id] + j.duration for j in original.jobs),
    ) + 2
    fig, axes = plt.subplots(4, 1, figsize=(9, 8), sharex=True,
                             gridspec_kw={"height_ratios": [2, 1, 2, 1]})
    fig.suptitle("original vs relaxed schedule")
    axes[0].set_title("original: jobs", fontsize=9)
    axes[1].set_title("original: resource load", fontsize=9)
    _draw_schedule(axes[0], axes[1], original, baseline, t_max=t_max)
    axes[2].set_title("relaxed: jobs", fontsize=9)
    axes[3].set_title("relaxed: resource load (capacity changes shaded)", fontsize=9)
    _draw_schedule(axes[2], axes[3], proposal.instance, proposal.schedule,
                   original=original, t_max=t_max)
    axes[3].set_xlabel("time period")
    fig.tight_layout()
    out = Path(out_path)
    fig.savefig(out, dpi=150)
    plt.close(fig)
    return out


def render_outputs(out_dir: str | Path) -> list[Path]:
    """Render figures for an evaluation output directory in place."""
    out = Path(out_dir)
    produced = []
    plotdata = out / "plotdata.csv"
    if plotdata.exists():
        produced.append(render_improvement_scatter(plotdata, out / "improvement_vs_difference.png"))
    return produced
