"""HTTP JSON API for the interactive what-if planning loop.

Instances and proposals are persisted as one JSON document each under the
data directory, content-addressed by a short digest of their creation
content. Baseline schedules are solved on demand and cached per (instance,
solver limits). Mutations on a given document are serialized through
per-id locks; reads work on immutable snapshots.

Endpoints:
    POST /api/instances                     upload an instance -> {id}
    GET  /api/instances                     list instance ids
    GET  /api/instances/{id}                instance document
    GET  /api/instances/{id}/schedule       baseline schedule (cached)
    GET  /api/instances/{id}/indicators     per-resource scores
    POST /api/instances/{id}/proposals      run iira/ssira -> proposal record
    GET  /api/proposals/{id}                proposal record
    POST /api/proposals/{id}/augment        re-solve with capacity edits
    POST /api/proposals/{id}/accept         promote to a new baseline instance
    POST /api/proposals/{id}/reject         discard
"""

from __future__ import annotations

import hashlib
import json
import threading
from pathlib import Path
from typing import Any

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, Field

from . import formats
from .indicators import INDICATOR_NAMES, rank_resources
from .iira import IiraParams, run_iira
from .model import InstanceError, ProblemInstance, Schedule, validate, weighted_tardiness
from .relaxation import (
    RelaxationProposal,
    build_proposal,
    default_target,
    proposal_to_dict,
)
from .solver import SolveLimits, solve_heuristic
from .ssira import SsiraParams, run_ssira


class ProposalRequest(BaseModel):
    algorithm: str
    params: dict[str, Any] = Field(default_factory=dict)
    target: int | None = None


class CapacityEdit(BaseModel):
    k: int
    t: int
    delta: int


class AugmentRequest(BaseModel):
    capacity_edits: list[CapacityEdit]


class DocumentStore:
    """One JSON file per document, ids derived from creation content."""

    def __init__(self, root: Path) -> None:
        self.root = root
        (root / "instances").mkdir(parents=True, exist_ok=True)
        (root / "proposals").mkdir(parents=True, exist_ok=True)
        (root / "schedules").mkdir(parents=True, exist_ok=True)
        self._locks: dict[str, threading.Lock] = {}
        self._locks_guard = threading.Lock()

    def lock(self, doc_id: str) -> threading.Lock:
        with self._locks_guard:
            return self._locks.setdefault(doc_id, threading.Lock())

    @staticmethod
    def digest(text: str) -> str:
        return hashlib.sha256(text.encode("utf-8")).hexdigest()[:12]

    def save_instance(self, instance: ProblemInstance) -> str:
        text = formats.dumps_canonical(formats.instance_to_dict(instance))
        doc_id = self.digest(text)
        (self.root / "instances" / f"{doc_id}.json").write_text(text, encoding="utf-8")
        return doc_id

    def load_instance(self, doc_id: str) -> ProblemInstance:
        path = self.root / "instances" / f"{doc_id}.json"
        if not path.exists():
            raise HTTPException(404, f"unknown instance {doc_id}")
        return formats.instance_from_dict(json.loads(path.read_text(encoding="utf-8")))

    def list_instances(self) -> list[str]:
        return sorted(p.stem for p in (self.root / "instances").glob("*.json"))

    def save_proposal(self, doc: dict[str, Any]) -> str:
        body = formats.dumps_canonical({k: v for k, v in doc.items() if k != "id"})
        doc_id = self.digest(body)
        doc = {"id": doc_id, **doc}
        path = self.root / "proposals" / f"{doc_id}.json"
        path.write_text(formats.dumps_canonical(doc), encoding="utf-8")
        return doc_id

    def load_proposal(self, doc_id: str) -> dict[str, Any]:
        path = self.root / "proposals" / f"{doc_id}.json"
        if not path.exists():
            raise HTTPException(404, f"unknown proposal {doc_id}")
        return json.loads(path.read_text(encoding="utf-8"))

    def update_proposal(self, doc: dict[str, Any]) -> None:
        path = self.root / "proposals" / f"{doc['id']}.json"
        path.write_text(formats.dumps_canonical(doc), encoding="utf-8")

    def schedule_cache_path(self, instance_id: str, limits: SolveLimits) -> Path:
        key = f"{instance_id}__s{limits.seed}_r{limits.restarts}_t{limits.time_limit:g}"
        return self.root / "schedules" / f"{key}.json"


def create_app(
    data_dir: str | Path,
    limits: SolveLimits | None = None,
    ui_dir: str | Path | None = None,
) -> FastAPI:
    store = DocumentStore(Path(data_dir))
    limits = limits or SolveLimits()
    app = FastAPI(title="schedrelax planner service")

    def baseline_for(instance_id: str, instance: ProblemInstance) -> Schedule:
        cache = store.schedule_cache_path(instance_id, limits)
        if cache.exists():
            return formats.schedule_from_dict(json.loads(cache.read_text(encoding="utf-8")))
        result = solve_heuristic(instance, limits)
        if not result.feasible:
            raise HTTPException(422, "no feasible baseline schedule found")
        schedule = result.schedule
        cache.write_text(
            formats.dumps_canonical(formats.schedule_to_dict(schedule)), encoding="utf-8"
        )
        return schedule

    def schedule_payload(instance: ProblemInstance, schedule: Schedule) -> dict[str, Any]:
        total, per_project = weighted_tardiness(instance, schedule)
        return {
            **formats.schedule_to_dict(schedule),
            "objective": total,
            "per_project_weighted_tardiness": {str(k): v for k, v in sorted(per_project.items())},
        }

    @app.post("/api/instances")
    def upload_instance(body: dict[str, Any]):
        try:
            instance = formats.instance_from_dict(body)
            instance.check_structure()
        except (InstanceError, KeyError, TypeError, ValueError) as exc:
            raise HTTPException(422, f"invalid instance: {exc}")
        return {"id": store.save_instance(instance)}

    @app.get("/api/instances")
    def list_instances():
        return {"instances": store.list_instances()}

    @app.get("/api/instances/{instance_id}")
    def get_instance(instance_id: str):
        return formats.instance_to_dict(store.load_instance(instance_id))

    @app.get("/api/instances/{instance_id}/schedule")
    def get_schedule(instance_id: str):
        instance = store.load_instance(instance_id)
        with store.lock(instance_id):
            schedule = baseline_for(instance_id, instance)
        return schedule_payload(instance, schedule)

    @app.get("/api/instances/{instance_id}/indicators")
    def get_indicators(instance_id: str, indicator: str = "MRUR"):
        if indicator.upper() not in INDICATOR_NAMES:
            raise HTTPException(422, f"unknown indicator {indicator!r}")
        instance = store.load_instance(instance_id)
        with store.lock(instance_id):
            schedule = baseline_for(instance_id, instance)
        scores = rank_resources(instance, schedule, indicator)
        return {
            "indicator": indicator.upper(),
            "scores": [
                {"resource": s.resource, "score": float(s.score), "defined": s.defined}
                for s in scores
            ],
        }

    def proposal_record(
        base_id: str,
        algorithm: str,
        params_doc: dict[str, Any],
        target: int,
        baseline: Schedule,
        proposal: RelaxationProposal,
    ) -> dict[str, Any]:
        doc = {
            "base_instance": base_id,
            "algorithm": algorithm,
            "params": params_doc,
            "target": target,
            "seed": limits.seed,
            "status": "pending",
            "accepted_instance": None,
            "baseline_schedule": formats.schedule_to_dict(baseline),
            **proposal_to_dict(proposal),
        }
        doc_id = store.save_proposal(doc)
        return store.load_proposal(doc_id)

    @app.post("/api/instances/{instance_id}/proposals")
    def create_proposal(instance_id: str, body: ProposalRequest):
        instance = store.load_instance(instance_id)
        with store.lock(instance_id):
            baseline = baseline_for(instance_id, instance)
        try:
            if body.algorithm == "iira":
                params = IiraParams.from_dict(body.params)
            elif body.algorithm == "ssira":
                params = SsiraParams.from_dict(body.params)
            else:
                raise ValueError(f"unknown algorithm {body.algorithm!r}")
            target = body.target if body.target is not None else default_target(instance, baseline)
            if body.algorithm == "iira":
                run = run_iira(instance, baseline, params, target, limits)
            else:
                run = run_ssira(instance, baseline, params, target, limits)
        except ValueError as exc:
            raise HTTPException(422, str(exc))
        return proposal_record(
            instance_id, body.algorithm, params.to_dict(), target, baseline, run.final
        )

    @app.get("/api/proposals/{proposal_id}")
    def get_proposal(proposal_id: str):
        return store.load_proposal(proposal_id)

    @app.post("/api/proposals/{proposal_id}/augment")
    def augment_proposal(proposal_id: str, body: AugmentRequest):
        parent = store.load_proposal(proposal_id)
        base = store.load_instance(parent["base_instance"])
        proposal_instance = formats.instance_from_dict(parent["instance"])
        deltas: dict[tuple[int, int], int] = {}
        for edit in body.capacity_edits:
            key = (edit.k, edit.t)
            deltas[key] = deltas.get(key, 0) + edit.delta
        edited = proposal_instance.with_overlay_deltas(deltas)
        try:
            edited.check_structure()
        except InstanceError as exc:
            raise HTTPException(422, f"edits make the instance invalid: {exc}")
        previous = formats.schedule_from_dict(parent["schedule"])
        warm = previous if validate(edited, previous).feasible else None
        result = solve_heuristic(edited, limits, warm_start=warm)
        if not result.feasible:
            report = validate(edited, previous)
            raise HTTPException(
                422,
                {
                    "message": "no feasible schedule after the edits",
                    "violations": [v.message for v in report.violations],
                },
            )
        baseline = formats.schedule_from_dict(parent["baseline_schedule"])
        # Negative edits may dip below the base capacities; the accounting
        # works on the pointwise max so reduction sees a dominating instance.
        base_caps = base.capacity_matrix()
        edited_caps = edited.capacity_matrix()
        lift = {
            (res.id, int(t)): int(base_caps[idx, t] - edited_caps[idx, t])
            for idx, res in enumerate(base.resources)
            for t in (edited_caps[idx] < base_caps[idx]).nonzero()[0]
        }
        dominating = edited.with_overlay_deltas(lift)
        proposal = build_proposal(
            base, baseline, dominating, result.schedule, parent["target"], parent["iteration"] + 1
        )
        return proposal_record(
            parent["base_instance"],
            "augment",
            {
                "parent": proposal_id,
                "capacity_edits": [edit.model_dump() for edit in body.capacity_edits],
            },
            parent["target"],
            baseline,
            proposal,
        )

    def transition(proposal_id: str, new_status: str) -> dict[str, Any]:
        with store.lock(proposal_id):
            doc = store.load_proposal(proposal_id)
            if doc["status"] != "pending":
                raise HTTPException(
                    409, f"proposal is {doc['status']}; only pending proposals can change"
                )
            doc["status"] = new_status
            if new_status == "accepted":
                instance = formats.instance_from_dict(doc["instance"])
                doc["accepted_instance"] = store.save_instance(instance)
            store.update_proposal(doc)
            return doc

    @app.post("/api/proposals/{proposal_id}/accept")
    def accept_proposal(proposal_id: str):
        doc = transition(proposal_id, "accepted")
        return {"new_instance_id": doc["accepted_instance"]}

    @app.post("/api/proposals/{proposal_id}/reject")
    def reject_proposal(proposal_id: str):
        doc = transition(proposal_id, "rejected")
        return {"status": doc["status"]}

    if ui_dir is not None:
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=str(ui_dir), html=True), name="ui")

    return app
