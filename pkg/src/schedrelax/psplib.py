"""Parsing and writing of single-mode project scheduling files (.sm).

The parser accepts the standard benchmark layout: a star-framed header, a
PRECEDENCE RELATIONS section, a REQUESTS/DURATIONS section, and a
RESOURCEAVAILABILITIES section. The dummy source (first) and sink (last)
jobs are stripped and real jobs renumbered 1..n-2.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field


class PsplibParseError(ValueError):
    """Malformed .sm content; the message names the offending line."""

    def __init__(self, line_no: int, message: str) -> None:
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


@dataclass
class RawJob:
    id: int
    duration: int
    requests: list[int]  # one entry per renewable resource


@dataclass
class RawNetwork:
    """A parsed activity-on-node project network (dummies removed)."""

    jobs: list[RawJob]
    successors: dict[int, list[int]]
    capacities: list[int]
    name: str = ""

    def predecessors(self) -> dict[int, list[int]]:
        preds: dict[int, list[int]] = {job.id: [] for job in self.jobs}
        for i, succs in self.successors.items():
            for j in succs:
                preds[j].append(i)
        for p in preds.values():
            p.sort()
        return preds


def _ints(line: str, line_no: int) -> list[int]:
    try:
        return [int(tok) for tok in line.split()]
    except ValueError as exc:
        raise PsplibParseError(line_no, f"non-integer field in {line.strip()!r}") from exc


def parse_psplib(text: str) -> RawNetwork:
    lines = text.splitlines()

    def find(pattern: str, description: str) -> int:
        for idx, line in enumerate(lines):
            if re.search(pattern, line):
                return idx
        raise PsplibParseError(len(lines), f"missing section header: {description}")

    jobs_line = find(r"jobs\s*\(incl\.", "job count")
    match = re.search(r":\s*(\d+)\s*$", lines[jobs_line])
    if not match:
        raise PsplibParseError(jobs_line + 1, "unreadable job count")
    n_total = int(match.group(1))
    if n_total < 3:
        raise PsplibParseError(jobs_line + 1, "need at least source, one job, and sink")

    renew_line = find(r"-\s*renewable", "renewable resource count")
    match = re.search(r":\s*(\d+)", lines[renew_line])
    if not match:
        raise PsplibParseError(renew_line + 1, "unreadable renewable resource count")
    m = int(match.group(1))

    # Successor lists (dummy jobs included at this point).
    prec_header = find(r"PRECEDENCE RELATIONS", "PRECEDENCE RELATIONS")
    successors_all: dict[int, list[int]] = {}
    modes: dict[int, int] = {}
    idx = prec_header + 2  # skip the column headings line
    parsed = 0
    while parsed < n_total:
        if idx >= len(lines):
            raise PsplibParseError(len(lines), "precedence section truncated")
        line = lines[idx]
        if line.strip().startswith("*"):
            raise PsplibParseError(idx + 1, "precedence section truncated")
        values = _ints(line, idx + 1)
        if len(values) < 3:
            raise PsplibParseError(idx + 1, "precedence row needs jobnr, #modes, #successors")
        job_id, n_modes, n_succ = values[0], values[1], values[2]
        if len(values) != 3 + n_succ:
            raise PsplibParseError(idx + 1, f"expected {n_succ} successors")
        successors_all[job_id] = values[3:]
        modes[job_id] = n_modes
        parsed += 1
        idx += 1
    if sorted(successors_all) != list(range(1, n_total + 1)):
        raise PsplibParseError(idx, "precedence rows do not cover jobs 1..n exactly")
    if any(n_modes != 1 for n_modes in modes.values()):
        raise PsplibParseError(idx, "multi-mode jobs are not supported")

    # Durations and per-resource requests.
    req_header = find(r"REQUESTS/DURATIONS", "REQUESTS/DURATIONS")
    durations: dict[int, int] = {}
    requests: dict[int, list[int]] = {}
    idx = req_header + 1
    parsed = 0
    while parsed < n_total:
        if idx >= len(lines):
            raise PsplibParseError(len(lines), "requests/durations section truncated")
        line = lines[idx]
        if line.strip().startswith("*"):
            raise PsplibParseError(idx + 1, "requests/durations section truncated")
        if not line.strip() or set(line.strip()) <= {"-"} or re.search(r"[A-Za-z]", line):
            idx += 1  # column headings or separator rule
            continue
        values = _ints(line, idx + 1)
        if len(values) != 3 + m:
            raise PsplibParseError(idx + 1, f"expected jobnr, mode, duration and {m} requests")
        durations[values[0]] = values[2]
        requests[values[0]] = values[3:]
        parsed += 1
        idx += 1
    if sorted(durations) != list(range(1, n_total + 1)):
        raise PsplibParseError(idx, "requests/durations rows do not cover jobs 1..n exactly")

    # Capacities.
    avail_header = find(r"RESOURCEAVAILABILITIES", "RESOURCEAVAILABILITIES")
    capacities: list[int] | None = None
    for idx in range(avail_header + 1, len(lines)):
        line = lines[idx]
        if not line.strip() or re.search(r"[A-Za-z*]", line):
            continue
        values = _ints(line, idx + 1)
        if len(values) != m:
            raise PsplibParseError(idx + 1, f"expected {m} capacities")
        capacities = values
        break
    if capacities is None:
        raise PsplibParseError(len(lines), "resource availabilities missing")

    # Strip the dummy source (job 1) and sink (job n), renumber to 1..n-2.
    source, sink = 1, n_total
    if durations[source] != 0 or durations[sink] != 0:
        raise PsplibParseError(idx + 1, "dummy source/sink must have zero duration")
    real = list(range(2, n_total))
    renumber = {old: new for new, old in enumerate(real, start=1)}
    jobs = [RawJob(renumber[j], durations[j], requests[j]) for j in real]
    successors = {
        renumber[j]: sorted(renumber[s] for s in successors_all[j] if s != sink)
        for j in real
    }
    return RawNetwork(jobs=jobs, successors=successors, capacities=capacities)


def write_psplib(network: RawNetwork, name: str = "synthetic") -> str:
    """Render a network back to .sm text (dummies re-added)."""
    n_total = len(network.jobs) + 2
    m = len(network.capacities)
    sink = n_total
    preds = network.predecessors()
    sources = [job.id for job in network.jobs if not preds[job.id]]

    bar = "*" * 72
    out: list[str] = []
    out.append(bar)
    out.append(f"file with basedata            : {name}")
    out.append("initial value random generator: 0")
    out.append(bar)
    out.append("projects                      :  1")
    out.append(f"jobs (incl. supersource/sink ):  {n_total}")
    horizon_guess = sum(job.duration for job in network.jobs)
    out.append(f"horizon                       :  {horizon_guess}")
    out.append("RESOURCES")
    out.append(f"  - renewable                 :  {m}   R")
    out.append("  - nonrenewable              :  0   N")
    out.append("  - doubly constrained        :  0   D")
    out.append(bar)
    out.append("PROJECT INFORMATION:")
    out.append("pronr.  #jobs rel.date duedate tardcost  MPM-Time")
    out.append(f"    1     {len(network.jobs)}      0       {horizon_guess}       1       {horizon_guess}")
    out.append(bar)
    out.append("PRECEDENCE RELATIONS:")
    out.append("jobnr.    #modes  #successors   successors")

    def prec_row(job_id: int, succs: list[int]) -> str:
        succ_txt = "  ".join(str(s) for s in succs)
        return f"   {job_id}        1          {len(succs)}           {succ_txt}".rstrip()

    out.append(prec_row(1, [j + 1 for j in sources]))
    for job in network.jobs:
        succs = [s + 1 for s in network.successors.get(job.id, [])] or [sink]
        out.append(prec_row(job.id + 1, succs))
    out.append(prec_row(sink, []))
    out.append(bar)
    out.append("REQUESTS/DURATIONS:")
    header = "jobnr. mode duration  " + "  ".join(f"R {k}" for k in range(1, m + 1))
    out.append(header)
    out.append("-" * 72)

    def req_row(job_id: int, duration: int, requests: list[int]) -> str:
        req_txt = "    ".join(str(q) for q in requests)
        return f"  {job_id}      1     {duration}       {req_txt}"

    out.append(req_row(1, 0, [0] * m))
    for job in network.jobs:
        out.append(req_row(job.id + 1, job.duration, job.requests))
    out.append(req_row(sink, 0, [0] * m))
    out.append(bar)
    out.append("RESOURCEAVAILABILITIES:")
    out.append("  " + "  ".join(f"R {k}" for k in range(1, m + 1)))
    out.append("   " + "   ".join(str(c) for c in network.capacities))
    out.append(bar)
    return "\n".join(out) + "\n"
