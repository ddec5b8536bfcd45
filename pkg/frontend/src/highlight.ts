// Page-image overlays and inline text marks. Box coordinates arrive in the
// source page's pixel space; the overlay scales them linearly into the
// displayed image's space.

import type { Annotation, Box } from "./types.js";

export type PageSize = { width: number; height: number };

export function scaleBox(box: Box, page: PageSize, display: PageSize): Box {
  const sx = display.width / page.width;
  const sy = display.height / page.height;
  return {
    page: box.page,
    x: box.x * sx,
    y: box.y * sy,
    w: box.w * sx,
    h: box.h * sy,
  };
}

export function drawOverlay(
  container: HTMLElement,
  boxes: Box[],
  page: PageSize,
  display: PageSize,
): void {
  for (const el of Array.from(container.querySelectorAll(".highlight-box"))) el.remove();
  for (const box of boxes) {
    const scaled = scaleBox(box, page, display);
    const div = document.createElement("div");
    div.className = "highlight-box";
    div.style.position = "absolute";
    div.style.left = `${scaled.x}px`;
    div.style.top = `${scaled.y}px`;
    div.style.width = `${scaled.w}px`;
    div.style.height = `${scaled.h}px`;
    container.appendChild(div);
  }
}

export type TextRun = {
  text: string;
  annotation: Annotation | null;
};

// Split a text slice into plain and annotated runs. Annotation spans are
// document offsets; `base` is the slice's offset so spans can be rebased.
export function segmentRuns(text: string, base: number, annotations: Annotation[]): TextRun[] {
  const inRange = annotations
    .map((a) => ({
      ann: a,
      start: Math.max(a.span[0] - base, 0),
      end: Math.min(a.span[1] - base, text.length),
    }))
    .filter((r) => r.start < r.end)
    .sort((a, b) => a.start - b.start || a.end - b.end);

  const runs: TextRun[] = [];
  let cursor = 0;
  for (const r of inRange) {
    if (r.start < cursor) continue; // overlapping annotation, first one wins
    if (r.start > cursor) runs.push({ text: text.slice(cursor, r.start), annotation: null });
    runs.push({ text: text.slice(r.start, r.end), annotation: r.ann });
    cursor = r.end;
  }
  if (cursor < text.length) runs.push({ text: text.slice(cursor), annotation: null });
  return runs;
}

export function renderRuns(runs: TextRun[]): DocumentFragment {
  const frag = document.createDocumentFragment();
  for (const run of runs) {
    if (run.annotation) {
      const mark = document.createElement("mark");
      mark.className = `ann ann-${run.annotation.kind}`;
      mark.setAttribute("data-kind", run.annotation.kind);
      if (run.annotation.normalized !== null) {
        mark.setAttribute("data-normalized", run.annotation.normalized);
        mark.title = run.annotation.normalized;
      }
      mark.textContent = run.text;
      frag.appendChild(mark);
    } else {
      frag.appendChild(document.createTextNode(run.text));
    }
  }
  return frag;
}
