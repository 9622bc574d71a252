"""Command-line interface.

Subcommands: generate, convert, solve, indicators, relax, evaluate, report,
serve. All outputs are deterministic for a fixed --seed (timings.csv and
rendered figures excepted).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import formats
from .generate import (
    DEFAULT_GROUPS,
    GenerationConfig,
    GroupRecipe,
    apply_modifications,
    generate_benchmark,
    to_inforest,
)
from .harness import GRID_PRESETS, emit_outputs, run_grid
from .indicators import INDICATOR_NAMES, rank_resources
from .iira import IiraParams, Kernel, run_iira
from .psplib import parse_psplib
from .relaxation import default_target, proposal_to_dict
from .solver import SolveLimits, solve_exact, solve_heuristic
from .ssira import SsiraParams, run_ssira


def _parse_shifts(text: str) -> tuple[int, ...]:
    if text == "all24":
        return (24,)
    if text == "mixed":
        return (8, 16, 24, 16)
    return tuple(int(part) for part in text.split(","))


def _limits(args) -> SolveLimits:
    return SolveLimits(
        time_limit=args.time_limit, restarts=args.restarts, seed=args.seed
    )


def _add_solver_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--time-limit", type=float, default=10.0)
    parser.add_argument("--restarts", type=int, default=12)


def _write_or_print(text: str, out: str | None) -> None:
    if out:
        Path(out).parent.mkdir(parents=True, exist_ok=True)
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def cmd_generate(args) -> int:
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    groups = DEFAULT_GROUPS
    if args.alpha is not None or args.shifts is not None:
        groups = tuple(
            GroupRecipe(
                recipe.name,
                recipe.family,
                args.alpha if args.alpha is not None else recipe.alpha,
                _parse_shifts(args.shifts) if args.shifts is not None else recipe.shift_hours,
            )
            for recipe in DEFAULT_GROUPS
        )
    benchmark = generate_benchmark(GenerationConfig(seed=args.seed), groups)
    manifest = {}
    for name, instances in benchmark.items():
        recipe = next(g for g in groups if g.name == name)
        manifest[name] = {
            "family": recipe.family,
            "alpha": recipe.alpha,
            "shift_hours": list(recipe.shift_hours),
            "instances": [],
        }
        for index, instance in enumerate(instances, start=1):
            filename = f"{name}_{index:02d}.json"
            formats.write_instance(instance, out_dir / filename)
            manifest[name]["instances"].append(filename)
    (out_dir / "benchmark.json").write_text(
        formats.dumps_canonical(manifest), encoding="utf-8"
    )
    print(f"wrote {sum(len(v) for v in benchmark.values())} instances to {out_dir}")
    return 0


def cmd_convert(args) -> int:
    network = to_inforest(parse_psplib(Path(args.input).read_text(encoding="utf-8")))
    config = GenerationConfig(
        alpha=args.alpha, shift_hours=_parse_shifts(args.shifts), seed=args.seed
    )
    instance = apply_modifications(network, config)
    _write_or_print(
        formats.dumps_canonical(formats.instance_to_dict(instance)), args.out
    )
    return 0


def cmd_solve(args) -> int:
    instance = formats.read_instance(args.instance)
    if args.exact:
        result = solve_exact(instance, SolveLimits(time_limit=args.time_limit, seed=args.seed))
    else:
        result = solve_heuristic(instance, _limits(args))
    doc = {
        "feasible": result.feasible,
        "optimal": result.optimal,
        "status": result.status,
        "objective": result.objective,
        "schedule": formats.schedule_to_dict(result.schedule) if result.schedule else None,
    }
    _write_or_print(formats.dumps_canonical(doc), args.out)
    return 0 if result.feasible else 1


def cmd_indicators(args) -> int:
    instance = formats.read_instance(args.instance)
    schedule = solve_heuristic(instance, _limits(args)).require_schedule()
    names = INDICATOR_NAMES if args.indicator == "all" else (args.indicator.upper(),)
    lines = ["resource,indicator,score,defined"]
    for name in names:
        for score in sorted(rank_resources(instance, schedule, name), key=lambda s: s.resource):
            lines.append(f"{score.resource},{name},{float(score.score)!r},{str(score.defined).lower()}")
    _write_or_print("\n".join(lines) + "\n", args.out)
    return 0


def cmd_relax(args) -> int:
    instance = formats.read_instance(args.instance)
    limits = _limits(args)
    baseline = solve_heuristic(instance, limits).require_schedule()
    target = args.target if args.target is not None else default_target(instance, baseline)
    if args.algorithm == "iira":
        params = IiraParams(
            indicator=args.indicator,
            kernel=Kernel(*_parse_kernel(args.kernel)),
            granularity=args.granularity,
            periods_limit=args.periods_limit,
            iterations_limit=args.iterations_limit,
            capacity_step=args.capacity_step,
        )
        run = run_iira(instance, baseline, params, target, limits)
    else:
        params = SsiraParams(
            iterations_limit=args.iterations_limit,
            intervals_limit=args.intervals_limit,
            sort_key=args.sort_key,
        )
        run = run_ssira(instance, baseline, params, target, limits)
    doc = {
        "algorithm": args.algorithm,
        "params": params.to_dict(),
        "target": target,
        "seed": args.seed,
        "baseline_schedule": formats.schedule_to_dict(baseline),
        **proposal_to_dict(run.final),
    }
    if args.all_iterations:
        doc["iterations_log"] = [proposal_to_dict(p) for p in run.proposals]
    _write_or_print(formats.dumps_canonical(doc), args.out)
    return 0


def _parse_kernel(text: str) -> tuple[str, int]:
    family, _, width = text.partition(":")
    return family, int(width or 0)


def cmd_evaluate(args) -> int:
    instances_dir = Path(args.instances_dir)
    paths = sorted(p for p in instances_dir.glob("*.json") if p.name != "benchmark.json")
    if not paths:
        print(f"no instance files in {instances_dir}", file=sys.stderr)
        return 1
    instances = [(p.stem, formats.read_instance(p)) for p in paths]
    if args.grid in GRID_PRESETS:
        grid = GRID_PRESETS[args.grid]
    else:
        grid = json.loads(Path(args.grid).read_text(encoding="utf-8"))
    algorithms = ("iira", "ssira") if args.algorithm == "both" else (args.algorithm,)
    records = run_grid(instances, algorithms, grid, _limits(args), jobs=args.jobs)
    paths_out = emit_outputs(records, args.out_dir)
    if args.render:
        from .report import render_outputs

        render_outputs(args.out_dir)
    print(f"wrote {len(records)} records to {paths_out['records']}")
    return 0


def cmd_report(args) -> int:
    from .report import render_improvement_scatter, render_proposal

    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    produced = []
    if args.plotdata:
        produced.append(
            render_improvement_scatter(args.plotdata, out_dir / "improvement_vs_difference.png")
        )
    if args.instance and args.proposal:
        instance = formats.read_instance(args.instance)
        doc = json.loads(Path(args.proposal).read_text(encoding="utf-8"))
        from .accounting import CapacityAddition, CapacityMigration
        from .relaxation import RelaxationProposal

        proposal = RelaxationProposal(
            instance=formats.instance_from_dict(doc["instance"]),
            schedule=formats.schedule_from_dict(doc["schedule"]),
            additions=[
                CapacityAddition(a["k"], a["s"], a["e"], a["c"]) for a in doc["additions"]
            ],
            migrations=[
                CapacityMigration(m["from"], m["to"], m["s"], m["e"], m["c"])
                for m in doc["migrations"]
            ],
            delta_tardiness=doc["metrics"]["delta_tardiness"],
            delta_completion_sum=doc["metrics"]["delta_completion_sum"],
            iteration=doc["iteration"],
        )
        baseline = formats.schedule_from_dict(doc["baseline_schedule"])
        produced.append(
            render_proposal(instance, baseline, proposal, out_dir / "schedule_comparison.png")
        )
    for path in produced:
        print(f"wrote {path}")
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    app = create_app(
        data_dir=args.data_dir,
        limits=SolveLimits(time_limit=args.time_limit, restarts=args.restarts, seed=args.seed),
        ui_dir=args.ui_dir,
    )
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="schedrelax",
        description="Bottleneck identification and capacity relaxation for project schedules",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="generate the benchmark instance groups")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--out-dir", required=True)
    p.add_argument("--alpha", type=float, default=None, help="override group due-date tightness")
    p.add_argument("--shifts", default=None, help="all24, mixed, or comma-separated hours")
    p.set_defaults(fn=cmd_generate)

    p = sub.add_parser("convert", help="convert a single-mode .sm file to the instance format")
    p.add_argument("--input", required=True)
    p.add_argument("--out", default=None)
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--shifts", default="all24")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(fn=cmd_convert)

    p = sub.add_parser("solve", help="solve an instance")
    p.add_argument("--instance", required=True)
    p.add_argument("--exact", action="store_true")
    p.add_argument("--out", default=None)
    _add_solver_flags(p)
    p.set_defaults(fn=cmd_solve)

    p = sub.add_parser("indicators", help="score resources on the baseline schedule")
    p.add_argument("--instance", required=True)
    p.add_argument("--indicator", default="all", help="MRUR, AUAU, MUR, AUAD, or all")
    p.add_argument("--out", default=None)
    _add_solver_flags(p)
    p.set_defaults(fn=cmd_indicators)

    p = sub.add_parser("relax", help="propose capacity relaxations")
    p.add_argument("--algorithm", choices=("iira", "ssira"), required=True)
    p.add_argument("--instance", required=True)
    p.add_argument("--target", type=int, default=None)
    p.add_argument("--out", default=None)
    p.add_argument("--all-iterations", action="store_true")
    p.add_argument("--indicator", default="MRUR")
    p.add_argument("--kernel", default="uniform:0", help="family:half_width")
    p.add_argument("--granularity", type=int, default=1)
    p.add_argument("--periods-limit", type=int, default=1)
    p.add_argument("--iterations-limit", type=int, default=1)
    p.add_argument("--capacity-step", type=int, default=1)
    p.add_argument("--intervals-limit", type=int, default=1)
    p.add_argument("--sort-key", choices=("earliest_start", "smallest_shift"), default="earliest_start")
    _add_solver_flags(p)
    p.set_defaults(fn=cmd_relax)

    p = sub.add_parser("evaluate", help="run a parameter grid over an instance directory")
    p.add_argument("--instances-dir", required=True)
    p.add_argument("--algorithm", choices=("iira", "ssira", "both"), default="both")
    p.add_argument("--grid", default="default", help="default, reduced, or a JSON grid file")
    p.add_argument("--out-dir", required=True)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--render", action="store_true", help="also render figures")
    _add_solver_flags(p)
    p.set_defaults(fn=cmd_evaluate)

    p = sub.add_parser("report", help="render figures from evaluation or proposal files")
    p.add_argument("--plotdata", default=None)
    p.add_argument("--instance", default=None)
    p.add_argument("--proposal", default=None)
    p.add_argument("--out-dir", required=True)
    p.set_defaults(fn=cmd_report)

    p = sub.add_parser("serve", help="run the planner HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--data-dir", required=True)
    p.add_argument("--ui-dir", default=None, help="directory with the static planner UI")
    _add_solver_flags(p)
    p.set_defaults(fn=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
