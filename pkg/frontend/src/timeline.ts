// Year histogram rendered as inline SVG. Bars carry their data in
// attributes so tests (and the range selection handler) read them back
// without reaching into chart internals.

import type { TimelinePoint } from "./types.js";

const SVG_NS = "http://www.w3.org/2000/svg";

export type TimelineCallbacks = {
  onRangeSelected?: (from: number, to: number) => void;
};

const CHART_WIDTH = 800;
const CHART_HEIGHT = 160;
const AXIS_HEIGHT = 20;

export function renderTimeline(
  series: TimelinePoint[],
  undatedDocs: number,
  callbacks: TimelineCallbacks = {},
): HTMLElement {
  const root = document.createElement("section");
  root.className = "timeline";

  if (series.length === 0) {
    const empty = document.createElement("p");
    empty.className = "timeline-empty";
    empty.textContent = "No dated documents.";
    root.appendChild(empty);
    return root;
  }

  const maxCount = Math.max(...series.map((p) => p.count));
  const barWidth = CHART_WIDTH / series.length;
  const plotHeight = CHART_HEIGHT - AXIS_HEIGHT;

  const svg = document.createElementNS(SVG_NS, "svg");
  svg.setAttribute("viewBox", `0 0 ${CHART_WIDTH} ${CHART_HEIGHT}`);
  svg.setAttribute("class", "timeline-chart");
  svg.setAttribute("role", "img");

  let pressedYear: number | null = null;

  for (let i = 0; i < series.length; i++) {
    const point = series[i];
    const height = maxCount > 0 ? (point.count / maxCount) * plotHeight : 0;
    const rect = document.createElementNS(SVG_NS, "rect");
    rect.setAttribute("class", "timeline-bar");
    rect.setAttribute("data-year", String(point.year));
    rect.setAttribute("data-count", String(point.count));
    rect.setAttribute("x", String(i * barWidth + 1));
    rect.setAttribute("y", String(plotHeight - height));
    rect.setAttribute("width", String(Math.max(barWidth - 2, 1)));
    rect.setAttribute("height", String(height));

    const title = document.createElementNS(SVG_NS, "title");
    title.textContent = `${point.year}: ${point.count}`;
    rect.appendChild(title);

    rect.addEventListener("mousedown", () => {
      pressedYear = point.year;
    });
    rect.addEventListener("mouseup", () => {
      const from = pressedYear ?? point.year;
      pressedYear = null;
      callbacks.onRangeSelected?.(Math.min(from, point.year), Math.max(from, point.year));
    });

    svg.appendChild(rect);

    const label = document.createElementNS(SVG_NS, "text");
    label.setAttribute("class", "timeline-label");
    label.setAttribute("x", String(i * barWidth + barWidth / 2));
    label.setAttribute("y", String(CHART_HEIGHT - 4));
    label.setAttribute("text-anchor", "middle");
    label.textContent = String(point.year);
    svg.appendChild(label);
  }

  root.appendChild(svg);

  if (undatedDocs > 0) {
    const note = document.createElement("p");
    note.className = "timeline-undated";
    note.setAttribute("data-undated", String(undatedDocs));
    note.textContent = `${undatedDocs} undated document${undatedDocs === 1 ? "" : "s"} not shown`;
    root.appendChild(note);
  }

  return root;
}
