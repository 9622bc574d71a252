"""Reading and writing the extended instance format and proposal documents.

The instance document is JSON with fields {jobs, precedences, resources,
horizon}. A null due date encodes +infinity. Serialization is canonical
(fixed field order, sorted integer keys, two-space indent, trailing newline)
so that writing a parsed document reproduces it byte for byte.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

from .model import Job, ProblemInstance, Resource, Schedule


def instance_to_dict(instance: ProblemInstance) -> dict[str, Any]:
    return {
        "jobs": [
            {
                "id": job.id,
                "duration": job.duration,
                "due_date": job.due_date,
                "weight": job.weight,
                "consumption": {
                    str(k): q for k, q in sorted(job.consumption.items()) if q != 0
                },
            }
            for job in sorted(instance.jobs, key=lambda j: j.id)
        ],
        "precedences": sorted([list(edge) for edge in instance.precedences]),
        "resources": [
            {
                "id": res.id,
                "base_pattern": list(res.base_pattern),
                "overlay": {
                    str(t): d for t, d in sorted(res.overlay.items()) if d != 0
                },
            }
            for res in sorted(instance.resources, key=lambda r: r.id)
        ],
        "horizon": instance.horizon,
    }


def instance_from_dict(doc: dict[str, Any]) -> ProblemInstance:
    jobs = [
        Job(
            id=int(j["id"]),
            duration=int(j["duration"]),
            due_date=None if j.get("due_date") is None else int(j["due_date"]),
            weight=float(j.get("weight", 0.0)),
            consumption={int(k): int(q) for k, q in j.get("consumption", {}).items()},
        )
        for j in doc["jobs"]
    ]
    resources = [
        Resource(
            id=int(r["id"]),
            base_pattern=[int(c) for c in r["base_pattern"]],
            overlay={int(t): int(d) for t, d in r.get("overlay", {}).items()},
        )
        for r in doc["resources"]
    ]
    precedences = [(int(i), int(j)) for i, j in doc["precedences"]]
    return ProblemInstance(
        jobs=jobs, precedences=precedences, resources=resources, horizon=int(doc["horizon"])
    )


def dumps_canonical(doc: Any) -> str:
    """Deterministic JSON text: 2-space indent, preserved key order, newline."""
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def write_instance(instance: ProblemInstance, path: str | Path) -> None:
    Path(path).write_text(dumps_canonical(instance_to_dict(instance)), encoding="utf-8")


def read_instance(path: str | Path) -> ProblemInstance:
    return instance_from_dict(json.loads(Path(path).read_text(encoding="utf-8")))


def schedule_to_dict(schedule: Schedule) -> dict[str, Any]:
    return {"starts": {str(j): s for j, s in sorted(schedule.starts.items())}}


def schedule_from_dict(doc: dict[str, Any]) -> Schedule:
    return Schedule({int(j): int(s) for j, s in doc["starts"].items()})
