// DOM factories for each panel. All of them are pure functions of their
// inputs plus callback hooks; counts and labels come from API payloads
// verbatim so the screen never disagrees with the service.

import type {
  ConcordanceResponse,
  DocumentResponse,
  EntityResponse,
  FacetEntry,
  Filter,
  Hit,
  SearchResponse,
} from "./types.js";
import type { YearRange } from "./state.js";
import { renderRuns, segmentRuns } from "./highlight.js";

const FACET_LABELS: Record<string, string> = {
  collection: "Collection",
  year: "Year",
  person: "People",
  place: "Places",
  temporal: "Dates",
};

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

export function renderFacetPanel(
  facets: Record<string, FacetEntry[]>,
  active: Filter[],
  onToggle: (field: string, value: string) => void,
): HTMLElement {
  const panel = el("aside", "facet-panel");
  for (const [field, entries] of Object.entries(facets)) {
    if (entries.length === 0) continue;
    const group = el("section", "facet-group");
    group.setAttribute("data-facet-field", field);
    group.appendChild(el("h3", "facet-title", FACET_LABELS[field] ?? field));
    const list = el("ul", "facet-list");
    for (const entry of entries) {
      const isActive = active.some((f) => f.field === field && f.value === entry.value);
      const item = el("li");
      const button = el("button", isActive ? "facet-value active" : "facet-value");
      button.type = "button";
      button.setAttribute("data-field", field);
      button.setAttribute("data-value", entry.value);
      button.setAttribute("data-count", String(entry.count));
      button.appendChild(el("span", "facet-label", entry.value));
      button.appendChild(el("span", "facet-count", String(entry.count)));
      button.addEventListener("click", () => onToggle(field, entry.value));
      item.appendChild(button);
      list.appendChild(item);
    }
    group.appendChild(list);
    panel.appendChild(group);
  }
  return panel;
}

export function renderChips(
  filters: Filter[],
  yearRange: YearRange | null,
  onRemove: (field: string, value: string) => void,
  onClearYears: () => void,
): HTMLElement {
  const bar = el("div", "chip-bar");
  for (const f of filters) {
    const chip = el("button", "chip");
    chip.type = "button";
    chip.setAttribute("data-field", f.field);
    chip.setAttribute("data-value", f.value);
    chip.textContent = `${f.field}: ${f.value} ×`;
    chip.addEventListener("click", () => onRemove(f.field, f.value));
    bar.appendChild(chip);
  }
  if (yearRange) {
    const chip = el("button", "chip chip-years");
    chip.type = "button";
    const label =
      yearRange.from === yearRange.to
        ? String(yearRange.from)
        : `${yearRange.from}–${yearRange.to}`;
    chip.textContent = `years: ${label} ×`;
    chip.addEventListener("click", onClearYears);
    bar.appendChild(chip);
  }
  return bar;
}

function snippetFragment(hit: Hit): DocumentFragment {
  const frag = document.createDocumentFragment();
  const spans = [...hit.match_spans].sort((a, b) => a[0] - b[0]);
  let cursor = 0;
  for (const [start, end] of spans) {
    const s = Math.max(start - hit.snippet_start, 0);
    const e = Math.min(end - hit.snippet_start, hit.snippet.length);
    if (s >= e || s < cursor) continue;
    if (s > cursor) frag.appendChild(document.createTextNode(hit.snippet.slice(cursor, s)));
    const mark = el("mark", "match", hit.snippet.slice(s, e));
    frag.appendChild(mark);
    cursor = e;
  }
  if (cursor < hit.snippet.length) {
    frag.appendChild(document.createTextNode(hit.snippet.slice(cursor)));
  }
  return frag;
}

export function renderResults(
  response: SearchResponse,
  onOpenDoc: (docId: string) => void,
  onPage: (offset: number) => void,
): HTMLElement {
  const root = el("section", "results");
  const summary = el("p", "results-summary");
  summary.setAttribute("data-total", String(response.total_hits));
  summary.textContent = `${response.total_hits} document${response.total_hits === 1 ? "" : "s"}`;
  root.appendChild(summary);

  const list = el("ol", "hit-list");
  list.start = response.offset + 1;
  for (const hit of response.hits) {
    const item = el("li", "hit");
    item.setAttribute("data-doc-id", hit.doc_id);

    const title = el("a", "hit-title") as HTMLAnchorElement;
    title.href = `#/doc/${encodeURIComponent(hit.doc_id)}`;
    title.textContent = hit.title || hit.doc_id;
    title.addEventListener("click", (ev) => {
      ev.preventDefault();
      onOpenDoc(hit.doc_id);
    });
    item.appendChild(title);

    const meta = el("p", "hit-meta");
    meta.textContent = hit.date ? `${hit.date} · ${hit.score.toFixed(3)}` : hit.score.toFixed(3);
    item.appendChild(meta);

    const snippet = el("p", "hit-snippet");
    snippet.appendChild(snippetFragment(hit));
    item.appendChild(snippet);

    list.appendChild(item);
  }
  root.appendChild(list);

  const pager = el("nav", "pager");
  const prev = el("button", "pager-prev", "Previous");
  prev.type = "button";
  prev.disabled = response.offset === 0;
  prev.addEventListener("click", () => onPage(Math.max(0, response.offset - response.limit)));
  const next = el("button", "pager-next", "Next");
  next.type = "button";
  next.disabled = response.offset + response.limit >= response.total_hits;
  next.addEventListener("click", () => onPage(response.offset + response.limit));
  pager.appendChild(prev);
  pager.appendChild(next);
  root.appendChild(pager);
  return root;
}

export function renderConcordance(response: ConcordanceResponse): HTMLElement {
  const root = el("section", "concordance");
  root.appendChild(el("h2", "panel-title", `Concordance: ${response.term}`));
  const summary = el("p", "concordance-summary");
  summary.setAttribute("data-total", String(response.total));
  summary.textContent = `${response.total} occurrence${response.total === 1 ? "" : "s"}`;
  root.appendChild(summary);

  const table = el("table", "kwic");
  const body = el("tbody");
  for (const row of response.rows) {
    const tr = el("tr", "kwic-row");
    tr.setAttribute("data-doc-id", row.doc_id);
    tr.appendChild(el("td", "kwic-left", row.left));
    tr.appendChild(el("td", "kwic-keyword", row.keyword));
    tr.appendChild(el("td", "kwic-right", row.right));
    const doc = el("td", "kwic-doc", row.doc_id);
    tr.appendChild(doc);
    body.appendChild(tr);
  }
  table.appendChild(body);
  root.appendChild(table);
  return root;
}

export function renderEntityCard(
  response: EntityResponse,
  onOpenDoc: (docId: string) => void,
): HTMLElement {
  const root = el("section", "entity-card");
  root.setAttribute("data-kind", response.kind);
  root.appendChild(el("h2", "entity-name", response.name));

  const stats = el("p", "entity-stats");
  const mentions = el("span", "entity-mentions", String(response.mention_count));
  mentions.setAttribute("data-field", "mention-count");
  const docs = el("span", "entity-docs", String(response.document_count));
  docs.setAttribute("data-field", "document-count");
  stats.appendChild(mentions);
  stats.appendChild(document.createTextNode(" mentions across "));
  stats.appendChild(docs);
  stats.appendChild(document.createTextNode(" documents"));
  root.appendChild(stats);

  const docList = el("ol", "entity-doc-list");
  for (const doc of response.documents) {
    const item = el("li", "entity-doc");
    item.setAttribute("data-doc-id", doc.doc_id);
    const link = el("a", "entity-doc-title") as HTMLAnchorElement;
    link.href = `#/doc/${encodeURIComponent(doc.doc_id)}`;
    link.textContent = doc.title || doc.doc_id;
    link.addEventListener("click", (ev) => {
      ev.preventDefault();
      onOpenDoc(doc.doc_id);
    });
    item.appendChild(link);
    const count = el("span", "entity-doc-mentions", String(doc.mentions));
    count.setAttribute("data-field", "doc-mentions");
    item.appendChild(document.createTextNode(doc.date ? ` (${doc.date}) — ` : " — "));
    item.appendChild(count);
    item.appendChild(document.createTextNode(" mentions"));
    docList.appendChild(item);
  }
  root.appendChild(docList);

  if (response.co_mentions.length > 0) {
    root.appendChild(el("h3", "entity-subtitle", "Appears with"));
    const coList = el("ul", "co-mention-list");
    for (const co of response.co_mentions) {
      const item = el("li", "co-mention");
      item.setAttribute("data-kind", co.kind);
      const link = el("a", "co-mention-name") as HTMLAnchorElement;
      link.href = `#/entity/${encodeURIComponent(co.kind)}/${encodeURIComponent(co.name)}`;
      link.textContent = co.name;
      item.appendChild(link);
      const shared = el("span", "co-mention-shared", String(co.shared_docs));
      shared.setAttribute("data-field", "shared-docs");
      item.appendChild(document.createTextNode(" · "));
      item.appendChild(shared);
      item.appendChild(document.createTextNode(" shared"));
      coList.appendChild(item);
    }
    root.appendChild(coList);
  }
  return root;
}

export function renderDocument(
  doc: DocumentResponse,
  onSpanClick: (start: number, end: number) => void,
): HTMLElement {
  const root = el("article", "document-view");
  root.setAttribute("data-doc-id", doc.doc_id);
  root.appendChild(el("h2", "document-title", doc.title || doc.doc_id));
  if (doc.date) root.appendChild(el("p", "document-date", doc.date));

  for (const section of doc.sections) {
    const sec = el("section", "doc-section");
    sec.setAttribute("data-section-id", section.section_id);
    if (section.title) sec.appendChild(el("h3", "section-title", section.title));
    for (const para of section.paras) {
      const p = el("p", "doc-para");
      const runs = segmentRuns(para.text, para.span[0], doc.annotations);
      p.appendChild(renderRuns(runs));
      for (const mark of Array.from(p.querySelectorAll("mark"))) {
        mark.addEventListener("click", () => {
          const offset = para.text.indexOf(mark.textContent ?? "");
          if (offset >= 0) {
            const start = para.span[0] + offset;
            onSpanClick(start, start + (mark.textContent ?? "").length);
          }
        });
      }
      sec.appendChild(p);
    }
    root.appendChild(sec);
  }
  return root;
}

export function renderError(message: string, onDismiss: () => void): HTMLElement {
  const banner = el("div", "error-banner");
  banner.setAttribute("role", "alert");
  banner.appendChild(el("span", "error-message", message));
  const close = el("button", "error-dismiss", "Dismiss");
  close.type = "button";
  close.addEventListener("click", onDismiss);
  banner.appendChild(close);
  return banner;
}

export function renderLoading(): HTMLElement {
  return el("p", "loading", "Searching…");
}
