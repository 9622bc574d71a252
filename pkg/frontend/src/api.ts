// Typed client for the planner service. One function per documented
// endpoint; errors carry the server's detail payload verbatim so the UI
// can surface violation reports unchanged.

import type {
  CapacityEdit,
  IndicatorsPayload,
  InstanceDoc,
  ProposalRecord,
  SchedulePayload,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    public status: number,
    public detail: unknown,
  ) {
    super(typeof detail === "string" ? detail : JSON.stringify(detail));
  }
}

async function request<T>(
  base: string,
  method: string,
  path: string,
  body?: unknown,
): Promise<T> {
  const response = await fetch(base + path, {
    method,
    headers: body === undefined ? {} : { "Content-Type": "application/json" },
    body: body === undefined ? undefined : JSON.stringify(body),
  });
  if (!response.ok) {
    let detail: unknown = response.statusText;
    try {
      const parsed = (await response.json()) as { detail?: unknown };
      detail = parsed.detail ?? parsed;
    } catch {
      // non-JSON error body: keep the status text
    }
    throw new ApiError(response.status, detail);
  }
  return (await response.json()) as T;
}

export class PlannerApi {
  constructor(public base: string = "") {}

  uploadInstance(doc: InstanceDoc): Promise<{ id: string }> {
    return request(this.base, "POST", "/api/instances", doc);
  }

  listInstances(): Promise<{ instances: string[] }> {
    return request(this.base, "GET", "/api/instances");
  }

  getInstance(id: string): Promise<InstanceDoc> {
    return request(this.base, "GET", `/api/instances/${id}`);
  }

  getSchedule(id: string): Promise<SchedulePayload> {
    return request(this.base, "GET", `/api/instances/${id}/schedule`);
  }

  getIndicators(id: string, indicator: string): Promise<IndicatorsPayload> {
    return request(
      this.base,
      "GET",
      `/api/instances/${id}/indicators?indicator=${encodeURIComponent(indicator)}`,
    );
  }

  createProposal(
    id: string,
    algorithm: "iira" | "ssira",
    params: Record<string, unknown>,
    target: number | null,
  ): Promise<ProposalRecord> {
    return request(this.base, "POST", `/api/instances/${id}/proposals`, {
      algorithm,
      params,
      target,
    });
  }

  getProposal(id: string): Promise<ProposalRecord> {
    return request(this.base, "GET", `/api/proposals/${id}`);
  }

  augmentProposal(id: string, edits: CapacityEdit[]): Promise<ProposalRecord> {
    return request(this.base, "POST", `/api/proposals/${id}/augment`, {
      capacity_edits: edits,
    });
  }

  acceptProposal(id: string): Promise<{ new_instance_id: string }> {
    return request(this.base, "POST", `/api/proposals/${id}/accept`);
  }

  rejectProposal(id: string): Promise<{ status: string }> {
    return request(this.base, "POST", `/api/proposals/${id}/reject`);
  }
}
