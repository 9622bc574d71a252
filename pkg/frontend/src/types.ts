// Document shapes exchanged with the planner service. These mirror the
// JSON schemas the service reads and writes; the client never derives
// schedules itself, only renders what the server returned.

export interface JobDoc {
  id: number;
  duration: number;
  due_date: number | null;
  weight: number;
  consumption: Record<string, number>;
}

export interface ResourceDoc {
  id: number;
  base_pattern: number[];
  overlay: Record<string, number>;
}

export interface InstanceDoc {
  jobs: JobDoc[];
  precedences: [number, number][];
  resources: ResourceDoc[];
  horizon: number;
}

export interface ScheduleDoc {
  starts: Record<string, number>;
}

export interface SchedulePayload extends ScheduleDoc {
  objective: number;
  per_project_weighted_tardiness: Record<string, number>;
}

export interface IndicatorScore {
  resource: number;
  score: number;
  defined: boolean;
}

export interface IndicatorsPayload {
  indicator: string;
  scores: IndicatorScore[];
}

export interface AdditionDoc {
  k: number;
  s: number;
  e: number;
  c: number;
}

export interface MigrationDoc {
  from: number;
  to: number;
  s: number;
  e: number;
  c: number;
}

export interface ProposalMetrics {
  delta_tardiness: number;
  delta_completion_sum: number;
}

export type ProposalStatus = "pending" | "accepted" | "rejected";

export interface ProposalRecord {
  id: string;
  base_instance: string;
  algorithm: string;
  params: Record<string, unknown>;
  target: number;
  seed: number;
  status: ProposalStatus;
  accepted_instance: string | null;
  baseline_schedule: ScheduleDoc;
  instance: InstanceDoc;
  schedule: ScheduleDoc;
  additions: AdditionDoc[];
  migrations: MigrationDoc[];
  metrics: ProposalMetrics;
  iteration: number;
}

export interface CapacityEdit {
  k: number;
  t: number;
  delta: number;
}

export interface IiraParamsDoc {
  indicator: "MRUR" | "AUAU";
  kernel: { family: "uniform" | "triangular"; half_width: number };
  granularity: number;
  periods_limit: number;
  iterations_limit: number;
  capacity_step: number;
}

export interface SsiraParamsDoc {
  sort_key: "earliest_start" | "smallest_shift";
  intervals_limit: number;
  iterations_limit: number;
}
