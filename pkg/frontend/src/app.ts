// Planner console wiring: instance upload/selection, baseline inspection,
// proposal requests, original-vs-relaxed comparison, capacity-edit
// augmentation, and accept/reject. The server is authoritative: every
// state change round-trips through the API and re-renders from responses.

import { ApiError, PlannerApi } from "./api.js";
import { parsePlotData } from "./csv.js";
import { renderSchedulePane, renderScatter } from "./render.js";
import type {
  CapacityEdit,
  IiraParamsDoc,
  InstanceDoc,
  ProposalRecord,
  SchedulePayload,
  SsiraParamsDoc,
} from "./types.js";
import { changeCells, changeSummary, projectBadges, projects, viewHorizon } from "./viewmodel.js";

interface AppState {
  instanceId: string | null;
  instance: InstanceDoc | null;
  baseline: SchedulePayload | null;
  proposal: ProposalRecord | null;
  pendingEdits: CapacityEdit[];
}

export class PlannerApp {
  state: AppState = {
    instanceId: null,
    instance: null,
    baseline: null,
    proposal: null,
    pendingEdits: [],
  };

  constructor(
    private api: PlannerApi,
    private root: HTMLElement,
  ) {}

  element<T extends HTMLElement>(selector: string): T {
    const found = this.root.querySelector<T>(selector);
    if (!found) throw new Error(`missing element ${selector}`);
    return found;
  }

  async start(): Promise<void> {
    this.bindControls();
    await this.refreshInstanceList();
  }

  private bindControls(): void {
    this.element<HTMLButtonElement>("#upload-button").addEventListener("click", () =>
      this.withErrors(async () => {
        const text = this.element<HTMLTextAreaElement>("#instance-input").value;
        const { id } = await this.api.uploadInstance(JSON.parse(text) as InstanceDoc);
        await this.refreshInstanceList(id);
        await this.loadInstance(id);
      }),
    );
    this.element<HTMLSelectElement>("#instance-select").addEventListener("change", (event) =>
      this.withErrors(async () => {
        const id = (event.target as HTMLSelectElement).value;
        if (id) await this.loadInstance(id);
      }),
    );
    this.element<HTMLSelectElement>("#algorithm-select").addEventListener("change", () =>
      this.toggleParamForms(),
    );
    this.element<HTMLButtonElement>("#propose-button").addEventListener("click", () =>
      this.withErrors(() => this.requestProposal()),
    );
    this.element<HTMLButtonElement>("#accept-button").addEventListener("click", () =>
      this.withErrors(() => this.acceptProposal()),
    );
    this.element<HTMLButtonElement>("#reject-button").addEventListener("click", () =>
      this.withErrors(() => this.rejectProposal()),
    );
    this.element<HTMLButtonElement>("#augment-button").addEventListener("click", () =>
      this.withErrors(() => this.applyAugment()),
    );
    this.element<HTMLButtonElement>("#clear-edits-button").addEventListener("click", () => {
      this.state.pendingEdits = [];
      this.renderEdits();
    });
    this.element<HTMLInputElement>("#plotdata-input").addEventListener("change", (event) => {
      const file = (event.target as HTMLInputElement).files?.[0];
      if (!file) return;
      void file.text().then((text) => {
        renderScatter(this.element("#scatter-pane"), parsePlotData(text));
      });
    });
    this.toggleParamForms();
  }

  private toggleParamForms(): void {
    const algorithm = this.element<HTMLSelectElement>("#algorithm-select").value;
    this.element("#iira-params").style.display = algorithm === "iira" ? "" : "none";
    this.element("#ssira-params").style.display = algorithm === "ssira" ? "" : "none";
  }

  private async withErrors(action: () => Promise<void> | void): Promise<void> {
    const box = this.element("#error-box");
    box.textContent = "";
    box.style.display = "none";
    try {
      await action();
    } catch (error) {
      box.style.display = "";
      if (error instanceof ApiError) {
        box.textContent = `server rejected the request (${error.status}): ${error.message}`;
      } else {
        box.textContent = String(error);
      }
    }
  }

  async refreshInstanceList(selected?: string): Promise<void> {
    const { instances } = await this.api.listInstances();
    const select = this.element<HTMLSelectElement>("#instance-select");
    select.replaceChildren(
      new Option("choose an instance...", ""),
      ...instances.map((id) => new Option(id, id, false, id === selected)),
    );
  }

  async loadInstance(id: string): Promise<void> {
    const instance = await this.api.getInstance(id);
    const baseline = await this.api.getSchedule(id);
    this.state = {
      instanceId: id,
      instance,
      baseline,
      proposal: null,
      pendingEdits: [],
    };
    const targetSelect = this.element<HTMLSelectElement>("#target-select");
    targetSelect.replaceChildren(
      new Option("auto (most tardy project)", ""),
      ...projects(instance).map((p) => new Option(`project ${p}`, String(p))),
    );
    this.renderBaseline();
    this.renderProposal();
  }

  private readIiraParams(): IiraParamsDoc {
    return {
      indicator: this.element<HTMLSelectElement>("#iira-indicator").value as
        | "MRUR"
        | "AUAU",
      kernel: {
        family: this.element<HTMLSelectElement>("#iira-kernel-family").value as
          | "uniform"
          | "triangular",
        half_width: Number(this.element<HTMLInputElement>("#iira-kernel-width").value),
      },
      granularity: Number(this.element<HTMLInputElement>("#iira-granularity").value),
      periods_limit: Number(this.element<HTMLInputElement>("#iira-periods").value),
      iterations_limit: Number(this.element<HTMLInputElement>("#iira-iterations").value),
      capacity_step: Number(this.element<HTMLInputElement>("#iira-step").value),
    };
  }

  private readSsiraParams(): SsiraParamsDoc {
    return {
      sort_key: this.element<HTMLSelectElement>("#ssira-sort-key").value as
        | "earliest_start"
        | "smallest_shift",
      intervals_limit: Number(this.element<HTMLInputElement>("#ssira-intervals").value),
      iterations_limit: Number(this.element<HTMLInputElement>("#ssira-iterations").value),
    };
  }

  async requestProposal(): Promise<void> {
    if (!this.state.instanceId) throw new Error("load an instance first");
    const algorithm = this.element<HTMLSelectElement>("#algorithm-select").value as
      | "iira"
      | "ssira";
    const params = algorithm === "iira" ? this.readIiraParams() : this.readSsiraParams();
    const targetRaw = this.element<HTMLSelectElement>("#target-select").value;
    const target = targetRaw === "" ? null : Number(targetRaw);
    const proposal = await this.api.createProposal(
      this.state.instanceId,
      algorithm,
      params as unknown as Record<string, unknown>,
      target,
    );
    this.state.proposal = proposal;
    this.state.pendingEdits = [];
    this.renderProposal();
  }

  async acceptProposal(): Promise<void> {
    if (!this.state.proposal) throw new Error("no proposal to accept");
    const { new_instance_id } = await this.api.acceptProposal(this.state.proposal.id);
    await this.refreshInstanceList(new_instance_id);
    await this.loadInstance(new_instance_id);
  }

  async rejectProposal(): Promise<void> {
    if (!this.state.proposal) throw new Error("no proposal to reject");
    await this.api.rejectProposal(this.state.proposal.id);
    this.state.proposal = { ...this.state.proposal, status: "rejected" };
    this.renderProposal();
  }

  async applyAugment(): Promise<void> {
    if (!this.state.proposal) throw new Error("no proposal to augment");
    if (this.state.pendingEdits.length === 0) throw new Error("no capacity edits staged");
    const augmented = await this.api.augmentProposal(
      this.state.proposal.id,
      this.state.pendingEdits,
    );
    this.state.proposal = augmented;
    this.state.pendingEdits = [];
    this.renderProposal();
  }

  stageEdit(edit: CapacityEdit): void {
    this.state.pendingEdits.push(edit);
    this.renderEdits();
  }

  private renderEdits(): void {
    const list = this.element("#edit-list");
    list.replaceChildren(
      ...this.state.pendingEdits.map((edit) => {
        const item = document.createElement("li");
        item.textContent = `R${edit.k} at t=${edit.t}: ${edit.delta > 0 ? "+" : ""}${edit.delta}`;
        return item;
      }),
    );
  }

  renderBaseline(): void {
    const { instance, baseline } = this.state;
    if (!instance || !baseline) return;
    const badges = projectBadges(instance, baseline);
    const tardy = new Set(badges.filter((b) => b.tardiness > 0).map((b) => b.project));
    this.element("#baseline-objective").textContent =
      `total weighted tardiness: ${baseline.objective}`;
    const badgeBox = this.element("#baseline-badges");
    badgeBox.replaceChildren(
      ...badges.map((badge) => {
        const span = document.createElement("span");
        span.className = "badge" + (badge.tardiness > 0 ? " tardy" : "");
        span.textContent = `P${badge.project}: C=${badge.completion}${
          badge.dueDate !== null ? `/due ${badge.dueDate}` : ""
        }${badge.tardiness > 0 ? ` (+${badge.tardiness})` : ""}`;
        return span;
      }),
    );
    renderSchedulePane(this.element("#baseline-pane"), instance, baseline, {
      tardyProjects: tardy,
      horizon: this.paneHorizon(),
    });
  }

  private paneHorizon(): number {
    const { instance, baseline, proposal } = this.state;
    if (!instance || !baseline) return 1;
    const schedules = [baseline, ...(proposal ? [proposal.schedule] : [])];
    return viewHorizon(instance, ...schedules);
  }

  renderProposal(): void {
    const proposal = this.state.proposal;
    const box = this.element("#proposal-box");
    const pane = this.element("#proposal-pane");
    if (!proposal || !this.state.instance || !this.state.baseline) {
      box.style.display = "none";
      pane.replaceChildren();
      this.renderEdits();
      return;
    }
    box.style.display = "";
    this.element("#proposal-status").textContent = proposal.status;
    this.element("#proposal-status").className = `status ${proposal.status}`;
    this.element("#metric-tardiness").textContent =
      `tardiness improvement: ${proposal.metrics.delta_tardiness}`;
    this.element("#metric-difference").textContent =
      `schedule difference: ${proposal.metrics.delta_completion_sum}`;
    this.element("#proposal-changes").textContent = changeSummary(proposal);
    const pending = proposal.status === "pending";
    this.element<HTMLButtonElement>("#accept-button").disabled = !pending;
    this.element<HTMLButtonElement>("#reject-button").disabled = !pending;
    this.element<HTMLButtonElement>("#augment-button").disabled = !pending;
    pane.classList.toggle("rejected", proposal.status === "rejected");
    renderSchedulePane(pane as HTMLElement, proposal.instance, proposal.schedule, {
      reference: this.state.baseline,
      changedCells: changeCells(proposal.additions, proposal.migrations),
      horizon: this.paneHorizon(),
      onCapacityClick: pending ? (edit) => this.stageEdit(edit) : undefined,
    });
    this.renderEdits();
  }
}
