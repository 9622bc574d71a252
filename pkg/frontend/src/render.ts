// SVG rendering for the schedule panes and the evaluation scatter.
// Renderers take server documents plus view-model derivations and draw
// into a container element; interaction is limited to capacity-cell
// clicks reported through a callback (used to collect augment edits).

import type { PlotPoint } from "./csv.js";
import type { CapacityEdit, InstanceDoc, ScheduleDoc } from "./types.js";
import {
  capacityProfile,
  consumptionProfile,
  ganttBars,
  viewHorizon,
  type CapacityChangeCell,
} from "./viewmodel.js";

const SVG_NS = "http://www.w3.org/2000/svg";
const PROJECT_COLORS = [
  "#4c78a8",
  "#f58518",
  "#54a24b",
  "#b279a2",
  "#e45756",
  "#72b7b2",
  "#eeca3b",
  "#9d755d",
];

function svgElement<K extends keyof SVGElementTagNameMap>(
  tag: K,
  attrs: Record<string, string | number>,
): SVGElementTagNameMap[K] {
  const el = document.createElementNS(SVG_NS, tag);
  for (const [key, value] of Object.entries(attrs)) {
    el.setAttribute(key, String(value));
  }
  return el;
}

export interface PaneOptions {
  reference?: ScheduleDoc; // highlight jobs moved relative to this
  changedCells?: CapacityChangeCell[]; // shade relaxed capacity
  tardyProjects?: Set<number>;
  onCapacityClick?: (edit: CapacityEdit) => void;
  horizon?: number;
}

export function renderSchedulePane(
  container: HTMLElement,
  instance: InstanceDoc,
  schedule: ScheduleDoc,
  options: PaneOptions = {},
): void {
  container.replaceChildren();
  const horizon =
    options.horizon ??
    viewHorizon(instance, schedule, ...(options.reference ? [options.reference] : []));
  const cell = Math.max(8, Math.min(22, Math.floor(760 / horizon)));
  const laneHeight = 16;

  // Jobs pane ---------------------------------------------------------
  const bars = ganttBars(instance, schedule, options.reference);
  const ganttHeight = bars.length * laneHeight + 20;
  const gantt = svgElement("svg", {
    width: horizon * cell + 40,
    height: ganttHeight,
    class: "gantt",
  });
  for (let t = 0; t <= horizon; t += Math.max(1, Math.floor(horizon / 24))) {
    gantt.appendChild(
      svgElement("line", {
        x1: 40 + t * cell,
        y1: 0,
        x2: 40 + t * cell,
        y2: ganttHeight,
        class: "grid-line",
      }),
    );
  }
  const projectIndex = new Map<number, number>();
  for (const bar of bars) {
    if (!projectIndex.has(bar.project)) {
      projectIndex.set(bar.project, projectIndex.size);
    }
    const y = bar.lane * laneHeight + 4;
    const rect = svgElement("rect", {
      x: 40 + bar.start * cell,
      y,
      width: bar.duration * cell,
      height: laneHeight - 4,
      rx: 2,
      fill: PROJECT_COLORS[projectIndex.get(bar.project)! % PROJECT_COLORS.length]!,
      class:
        "job-bar" +
        (bar.shifted ? " shifted" : "") +
        (options.tardyProjects?.has(bar.project) && bar.job === bar.project
          ? " tardy"
          : ""),
    });
    rect.appendChild(
      Object.assign(document.createElementNS(SVG_NS, "title"), {
        textContent: `job ${bar.job} (project ${bar.project}): [${bar.start}, ${
          bar.start + bar.duration
        })`,
      }),
    );
    gantt.appendChild(rect);
    gantt.appendChild(
      Object.assign(
        svgElement("text", {
          x: 40 + bar.start * cell + 3,
          y: y + laneHeight - 8,
          class: "job-label",
        }),
        { textContent: String(bar.job) },
      ),
    );
  }
  container.appendChild(gantt);

  // Resource panes ------------------------------------------------------
  const changed = new Map<string, CapacityChangeCell>();
  for (const cellChange of options.changedCells ?? []) {
    changed.set(`${cellChange.resource}:${cellChange.t}`, cellChange);
  }
  for (const resource of instance.resources) {
    const caps = capacityProfile(instance, resource.id).slice(0, horizon);
    const load = consumptionProfile(instance, schedule, resource.id).slice(0, horizon);
    const peak = Math.max(1, ...caps, ...load);
    const unit = Math.max(4, Math.min(12, Math.floor(60 / peak)));
    const height = peak * unit + 18;
    const label = document.createElement("div");
    label.className = "resource-label";
    label.textContent = `Resource ${resource.id}`;
    container.appendChild(label);
    const svg = svgElement("svg", {
      width: horizon * cell + 40,
      height,
      class: "resource",
    });
    for (let t = 0; t < horizon; t += 1) {
      const loadValue = load[t] ?? 0;
      if (loadValue > 0) {
        svg.appendChild(
          svgElement("rect", {
            x: 40 + t * cell,
            y: height - 14 - loadValue * unit,
            width: cell,
            height: loadValue * unit,
            class: "load-cell",
          }),
        );
      }
      const change = changed.get(`${resource.id}:${t}`);
      if (change) {
        svg.appendChild(
          svgElement("rect", {
            x: 40 + t * cell,
            y: 2,
            width: cell,
            height: 6,
            class: `change-cell ${change.kind}`,
          }),
        );
      }
      if (options.onCapacityClick) {
        const hit = svgElement("rect", {
          x: 40 + t * cell,
          y: 0,
          width: cell,
          height,
          class: "capacity-hit",
          "data-resource": resource.id,
          "data-t": t,
        });
        hit.addEventListener("click", (event) => {
          options.onCapacityClick!({
            k: resource.id,
            t,
            delta: (event as MouseEvent).shiftKey ? -1 : 1,
          });
        });
        svg.appendChild(hit);
      }
    }
    // Capacity step line on top of the load cells.
    const points: string[] = [];
    for (let t = 0; t < horizon; t += 1) {
      const y = height - 14 - (caps[t] ?? 0) * unit;
      points.push(`${40 + t * cell},${y}`, `${40 + (t + 1) * cell},${y}`);
    }
    svg.appendChild(
      svgElement("polyline", { points: points.join(" "), class: "capacity-line" }),
    );
    container.appendChild(svg);
  }
}

export function renderScatter(container: HTMLElement, points: PlotPoint[]): void {
  container.replaceChildren();
  const width = 520;
  const height = 320;
  const margin = 40;
  const svg = svgElement("svg", { width, height, class: "scatter" });
  const maxX = Math.max(1, ...points.map((p) => p.deltaCompletionSum));
  const maxY = Math.max(1, ...points.map((p) => p.deltaTardiness));
  const x = (v: number) => margin + (v / maxX) * (width - 2 * margin);
  const y = (v: number) => height - margin - (v / maxY) * (height - 2 * margin);
  svg.appendChild(
    svgElement("line", {
      x1: margin,
      y1: height - margin,
      x2: width - margin,
      y2: height - margin,
      class: "axis",
    }),
  );
  svg.appendChild(
    svgElement("line", { x1: margin, y1: margin, x2: margin, y2: height - margin, class: "axis" }),
  );
  for (const point of points) {
    const dot = svgElement("circle", {
      cx: x(point.deltaCompletionSum),
      cy: y(point.deltaTardiness),
      r: 4,
      class: `dot ${point.algorithm}`,
    });
    dot.appendChild(
      Object.assign(document.createElementNS(SVG_NS, "title"), {
        textContent: `${point.instance} ${point.algorithm} (${point.combo}): dS=${point.deltaCompletionSum}, dT=${point.deltaTardiness}`,
      }),
    );
    svg.appendChild(dot);
  }
  const caption = document.createElement("div");
  caption.className = "scatter-caption";
  caption.textContent = "schedule difference vs tardiness improvement (best combo per instance)";
  container.appendChild(svg);
  container.appendChild(caption);
}
