// Planner session replay against a real service instance: upload the tiny
// fixture, read its baseline, request a targeted proposal, augment it with
// one capacity edit, accept, and confirm the new baseline is no longer
// tardy. Spawns the Python service on a scratch data directory.

import { spawn, type ChildProcess } from "node:child_process";
import { mkdtempSync, rmSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { PlannerApi } from "../src/api.js";
import type { InstanceDoc } from "../src/types.js";

const PORT = 18650 + (process.pid % 1000);
const BASE = `http://127.0.0.1:${PORT}`;

const tiny1: InstanceDoc = {
  jobs: [
    { id: 1, duration: 2, due_date: null, weight: 0, consumption: { "1": 1 } },
    { id: 2, duration: 3, due_date: null, weight: 0, consumption: { "1": 2 } },
    { id: 3, duration: 1, due_date: 4, weight: 1, consumption: { "1": 1 } },
  ],
  precedences: [
    [1, 3],
    [2, 3],
  ],
  resources: [{ id: 1, base_pattern: new Array(24).fill(2), overlay: {} }],
  horizon: 24,
};

let service: ChildProcess;
let dataDir: string;

beforeAll(async () => {
  dataDir = mkdtempSync(join(tmpdir(), "schedrelax-ui-"));
  service = spawn(
    "python3",
    ["-m", "schedrelax.cli", "serve", "--port", String(PORT), "--data-dir", dataDir, "--restarts", "8"],
    { stdio: "ignore" },
  );
  for (let attempt = 0; attempt < 100; attempt += 1) {
    await new Promise((resolve) => setTimeout(resolve, 150));
    try {
      const response = await fetch(`${BASE}/api/instances`);
      if (response.ok) return;
    } catch {
      // not up yet
    }
  }
  throw new Error("service did not come up");
}, 30000);

afterAll(() => {
  service?.kill();
  rmSync(dataDir, { recursive: true, force: true });
});

describe("planner session replay", () => {
  it("upload -> solve -> propose -> augment -> accept ends with zero tardiness", async () => {
    const api = new PlannerApi(BASE);

    const { id } = await api.uploadInstance(tiny1);
    const baseline = await api.getSchedule(id);
    expect(baseline.objective).toBe(2);
    expect(baseline.starts).toEqual({ "1": 3, "2": 0, "3": 5 });

    const proposal = await api.createProposal(id, "ssira", { intervals_limit: 2 }, 3);
    expect(proposal.status).toBe("pending");
    expect(proposal.metrics.delta_tardiness).toBe(2);
    expect(proposal.additions).toEqual([{ k: 1, s: 0, e: 2, c: 1 }]);

    const augmented = await api.augmentProposal(proposal.id, [{ k: 1, t: 6, delta: 1 }]);
    expect(augmented.id).not.toBe(proposal.id);
    expect(augmented.base_instance).toBe(id);
    expect(augmented.metrics.delta_tardiness).toBe(2);

    const { new_instance_id } = await api.acceptProposal(augmented.id);
    const finalBaseline = await api.getSchedule(new_instance_id);
    expect(finalBaseline.objective).toBe(0);

    // The replayed session left the original proposal still pending and the
    // accepted one terminal: a second accept must conflict.
    await expect(api.acceptProposal(augmented.id)).rejects.toMatchObject({ status: 409 });
  }, 60000);

  it("rejecting a proposal leaves the baseline unchanged", async () => {
    const api = new PlannerApi(BASE);
    const { id } = await api.uploadInstance(tiny1);
    const before = await api.getSchedule(id);
    const proposal = await api.createProposal(id, "iira", { granularity: 2 }, 3);
    await api.rejectProposal(proposal.id);
    const after = await api.getSchedule(id);
    expect(after).toEqual(before);
    await expect(api.acceptProposal(proposal.id)).rejects.toMatchObject({ status: 409 });
  }, 60000);
});
