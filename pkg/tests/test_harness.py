from __future__ import annotations

from dataclasses import replace

import pytest

from schedrelax.harness import (
    DEFAULT_GRID,
    EvaluationRecord,
    REDUCED_GRID,
    best_by_instance,
    emit_outputs,
    evaluate_instance,
    expand_grid,
    metrics,
    plotdata_csv,
    records_csv,
    render_summary,
    run_grid,
    summarize,
)
from schedrelax.model import Schedule
from schedrelax.solver import SolveLimits, solve_heuristic

from conftest import make_tiny1


def _record(instance_id, algorithm, delta_t, delta_c=0, combo_index=0):
    return EvaluationRecord(
        instance_id=instance_id,
        algorithm=algorithm,
        combo_index=combo_index,
        combo="combo",
        target=1,
        delta_tardiness=delta_t,
        delta_completion_sum=delta_c,
        iterations=1,
        wall_time=0.0,
    )


class TestGrids:
    def test_default_sizes_match_the_experiment_scale(self):
        assert len(expand_grid(DEFAULT_GRID, "iira")) == 288
        assert len(expand_grid(DEFAULT_GRID, "ssira")) == 36

    def test_reduced_sizes(self):
        assert len(expand_grid(REDUCED_GRID, "iira")) == 24
        assert len(expand_grid(REDUCED_GRID, "ssira")) == 12

    def test_combo_labels_unique(self):
        for grid in (DEFAULT_GRID, REDUCED_GRID):
            for algorithm in ("iira", "ssira"):
                combos = expand_grid(grid, algorithm)
                assert len({c.label for c in combos}) == len(combos)

    def test_unknown_algorithm_rejected(self):
        with pytest.raises(ValueError):
            expand_grid(DEFAULT_GRID, "other")


class TestMetrics:
    def test_tiny1_improvement(self, tiny1, tiny1_schedule):
        proposed = Schedule({1: 0, 2: 0, 3: 3})
        delta_t, delta_c = metrics(tiny1, tiny1_schedule, proposed, 3)
        assert delta_t == 2
        assert delta_c == 3 + 0 + 2  # completions 5,3,6 -> 2,3,4

    def test_identity_proposal_scores_zero(self, tiny1, tiny1_schedule):
        assert metrics(tiny1, tiny1_schedule, tiny1_schedule, 3) == (0, 0)

    def test_single_shift_counts_once(self, tiny1, tiny1_schedule):
        proposed = Schedule({1: 3, 2: 0, 3: 8})
        delta_t, delta_c = metrics(tiny1, tiny1_schedule, proposed, 3)
        assert delta_c == 3
        assert delta_t == -3  # later completion: negative improvement


class TestSummary:
    def test_counts_and_symmetry(self):
        records = [
            _record("a", "iira", 2),
            _record("a", "ssira", 1),
            _record("b", "iira", 0),
            _record("b", "ssira", 3),
            _record("c", "iira", 0),
            _record("c", "ssira", 0),
        ]
        summary = summarize(records)
        assert summary["iira"] == {"improving": 1, "unique": 0, "best": 1}
        # ssira improves a and b, is alone on b, but loses a to iira's 2 > 1.
        assert summary["ssira"] == {"improving": 2, "unique": 1, "best": 1}

    def test_tie_credits_both_as_best(self):
        records = [_record("a", "iira", 2), _record("a", "ssira", 2)]
        summary = summarize(records)
        assert summary["iira"]["best"] == 1
        assert summary["ssira"]["best"] == 1

    def test_best_combo_prefers_improvement_then_small_difference(self):
        records = [
            _record("a", "iira", 1, delta_c=10, combo_index=0),
            _record("a", "iira", 2, delta_c=50, combo_index=1),
            _record("a", "iira", 2, delta_c=20, combo_index=2),
        ]
        best = best_by_instance(records, "iira")
        assert best["a"].combo_index == 2

    def test_render_summary_shape(self):
        records = [
            _record("a", "iira", 1),
            _record("a", "ssira", 0),
            _record("b", "iira", 0),
            _record("b", "ssira", 2),
        ]
        text = render_summary(records)
        lines = text.strip().splitlines()
        assert len(lines) == 1 + 6  # header + 3 criteria x 2 algorithms
        assert "% (of 2)" in lines[0]
        assert any("IIRA" in line and "Improving" in line and "50.0%" in line for line in lines)


class TestEvaluateAndEmit:
    def test_single_instance_single_combo(self, tiny1):
        combos = expand_grid(
            {"ssira": {"sort_keys": ["earliest_start"], "intervals_limits": [2], "iterations_limits": [1]}},
            "ssira",
        )
        records = evaluate_instance("tiny1", tiny1, combos, SolveLimits(seed=0))
        assert len(records) == 1
        assert records[0].delta_tardiness == 2
        assert records[0].target == 3

    def test_default_target_is_heaviest_tardy_project(self, tiny1):
        combos = expand_grid(REDUCED_GRID, "ssira")[:1]
        records = evaluate_instance("tiny1", tiny1, combos, SolveLimits(seed=0))
        assert records[0].target == 3

    def test_emit_outputs_files(self, tiny1, tmp_path):
        records = run_grid(
            [("tiny1", tiny1)],
            ("iira", "ssira"),
            REDUCED_GRID,
            SolveLimits(restarts=4, seed=0),
        )
        paths = emit_outputs(records, tmp_path)
        for key in ("records", "summary", "plotdata", "timings"):
            assert paths[key].exists()
        body = paths["records"].read_text()
        assert body.splitlines()[0] == (
            "instance,algorithm,combo_index,combo,target,"
            "delta_tardiness,delta_completion_sum,iterations"
        )
        assert len(body.splitlines()) == 1 + 24 + 12

    def test_records_csv_deterministic_across_runs(self, tiny1, tmp_path):
        first = run_grid([("tiny1", tiny1)], ("ssira",), REDUCED_GRID, SolveLimits(seed=1))
        second = run_grid(
            [("tiny1", make_tiny1())], ("ssira",), REDUCED_GRID, SolveLimits(seed=1)
        )
        assert records_csv(first) == records_csv(second)
        assert plotdata_csv(first) == plotdata_csv(second)

    def test_parallel_merge_matches_serial(self, tiny1, tiny2):
        instances = [("a_tiny1", tiny1), ("b_tiny2", tiny2)]
        limits = SolveLimits(restarts=4, seed=2)
        serial = run_grid(instances, ("ssira",), REDUCED_GRID, limits, jobs=1)
        parallel = run_grid(instances, ("ssira",), REDUCED_GRID, limits, jobs=2)
        assert records_csv(serial) == records_csv(parallel)

    def test_empty_records_give_headers_only(self, tmp_path):
        paths = emit_outputs([], tmp_path)
        assert paths["records"].read_text().startswith("instance,")
        assert len(paths["records"].read_text().splitlines()) == 1
        assert len(paths["plotdata"].read_text().splitlines()) == 1
