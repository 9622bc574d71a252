// Pure view-model derivations from server documents. Everything here is
// display math over data the service already computed; no scheduling.

import type {
  AdditionDoc,
  InstanceDoc,
  JobDoc,
  MigrationDoc,
  ProposalRecord,
  ScheduleDoc,
} from "./types.js";

export const PERIODS_PER_DAY = 24;

export function starts(schedule: ScheduleDoc): Map<number, number> {
  return new Map(
    Object.entries(schedule.starts).map(([job, start]) => [Number(job), start]),
  );
}

export function completion(job: JobDoc, schedule: ScheduleDoc): number {
  return (schedule.starts[String(job.id)] ?? 0) + job.duration;
}

/** Root of the in-tree containing the job: the project it belongs to. */
export function projectOf(instance: InstanceDoc, jobId: number): number {
  const successor = new Map(instance.precedences.map(([i, j]) => [i, j]));
  let current = jobId;
  const seen = new Set<number>();
  while (successor.has(current) && !seen.has(current)) {
    seen.add(current);
    current = successor.get(current)!;
  }
  return current;
}

export function projects(instance: InstanceDoc): number[] {
  const withSuccessor = new Set(instance.precedences.map(([i]) => i));
  return instance.jobs.filter((j) => !withSuccessor.has(j.id)).map((j) => j.id);
}

export function tardiness(job: JobDoc, schedule: ScheduleDoc): number {
  if (job.due_date === null) return 0;
  return Math.max(0, completion(job, schedule) - job.due_date);
}

export interface ProjectBadge {
  project: number;
  dueDate: number | null;
  completion: number;
  tardiness: number;
  weightedTardiness: number;
}

export function projectBadges(
  instance: InstanceDoc,
  schedule: ScheduleDoc,
): ProjectBadge[] {
  return projects(instance)
    .map((id) => instance.jobs.find((j) => j.id === id)!)
    .map((job) => ({
      project: job.id,
      dueDate: job.due_date,
      completion: completion(job, schedule),
      tardiness: tardiness(job, schedule),
      weightedTardiness: job.weight * tardiness(job, schedule),
    }))
    .sort((a, b) => a.project - b.project);
}

/** Effective capacity of one resource over [0, horizon). */
export function capacityProfile(
  instance: InstanceDoc,
  resourceId: number,
): number[] {
  const resource = instance.resources.find((r) => r.id === resourceId);
  if (!resource) throw new Error(`unknown resource ${resourceId}`);
  const profile: number[] = [];
  for (let t = 0; t < instance.horizon; t += 1) {
    profile.push(
      (resource.base_pattern[t % PERIODS_PER_DAY] ?? 0) +
        (resource.overlay[String(t)] ?? 0),
    );
  }
  return profile;
}

/** Total demand on one resource per time period under a schedule. */
export function consumptionProfile(
  instance: InstanceDoc,
  schedule: ScheduleDoc,
  resourceId: number,
): number[] {
  const load = new Array<number>(instance.horizon).fill(0);
  for (const job of instance.jobs) {
    const qty = job.consumption[String(resourceId)] ?? 0;
    if (!qty) continue;
    const start = schedule.starts[String(job.id)] ?? 0;
    for (let t = start; t < start + job.duration && t < instance.horizon; t += 1) {
      load[t] = (load[t] ?? 0) + qty;
    }
  }
  return load;
}

export interface GanttBar {
  job: number;
  project: number;
  lane: number;
  start: number;
  duration: number;
  shifted: boolean;
}

/** Job bars grouped by project (one lane per job, projects contiguous). */
export function ganttBars(
  instance: InstanceDoc,
  schedule: ScheduleDoc,
  reference?: ScheduleDoc,
): GanttBar[] {
  const byProject = new Map<number, JobDoc[]>();
  for (const job of instance.jobs) {
    const project = projectOf(instance, job.id);
    if (!byProject.has(project)) byProject.set(project, []);
    byProject.get(project)!.push(job);
  }
  const bars: GanttBar[] = [];
  let lane = 0;
  for (const project of [...byProject.keys()].sort((a, b) => a - b)) {
    const jobs = byProject
      .get(project)!
      .sort(
        (a, b) =>
          (schedule.starts[String(a.id)] ?? 0) - (schedule.starts[String(b.id)] ?? 0) ||
          a.id - b.id,
      );
    for (const job of jobs) {
      const start = schedule.starts[String(job.id)] ?? 0;
      bars.push({
        job: job.id,
        project,
        lane,
        start,
        duration: job.duration,
        shifted:
          reference !== undefined &&
          (reference.starts[String(job.id)] ?? 0) !== start,
      });
      lane += 1;
    }
  }
  return bars;
}

/** Jobs whose completion moved between two schedules, with the shift. */
export function jobShifts(
  instance: InstanceDoc,
  before: ScheduleDoc,
  after: ScheduleDoc,
): { job: number; from: number; to: number }[] {
  const shifts: { job: number; from: number; to: number }[] = [];
  for (const job of instance.jobs) {
    const from = completion(job, before);
    const to = completion(job, after);
    if (from !== to) shifts.push({ job: job.id, from, to });
  }
  return shifts.sort((a, b) => a.job - b.job);
}

export interface CapacityChangeCell {
  resource: number;
  t: number;
  delta: number;
  kind: "addition" | "migration-in" | "migration-out";
}

/** Per-period capacity deltas implied by a proposal's changes. */
export function changeCells(
  additions: AdditionDoc[],
  migrations: MigrationDoc[],
): CapacityChangeCell[] {
  const cells: CapacityChangeCell[] = [];
  for (const a of additions) {
    for (let t = a.s; t < a.e; t += 1) {
      cells.push({ resource: a.k, t, delta: a.c, kind: "addition" });
    }
  }
  for (const m of migrations) {
    for (let t = m.s; t < m.e; t += 1) {
      cells.push({ resource: m.to, t, delta: m.c, kind: "migration-in" });
      cells.push({ resource: m.from, t, delta: -m.c, kind: "migration-out" });
    }
  }
  return cells.sort((a, b) => a.resource - b.resource || a.t - b.t);
}

/** Compact human label for a proposal's changes. */
export function changeSummary(proposal: ProposalRecord): string {
  const parts: string[] = [];
  for (const a of proposal.additions) {
    parts.push(`+${a.c} on R${a.k} over [${a.s},${a.e})`);
  }
  for (const m of proposal.migrations) {
    parts.push(`${m.c} from R${m.from} to R${m.to} over [${m.s},${m.e})`);
  }
  return parts.length ? parts.join("; ") : "no capacity changes";
}

/** Last period worth drawing: max completion plus a margin, capped. */
export function viewHorizon(
  instance: InstanceDoc,
  ...schedules: ScheduleDoc[]
): number {
  let latest = 1;
  for (const schedule of schedules) {
    for (const job of instance.jobs) {
      latest = Math.max(latest, completion(job, schedule));
    }
  }
  return Math.min(instance.horizon, latest + 2);
}
