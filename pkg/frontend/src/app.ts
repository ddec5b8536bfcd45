// Application shell: owns the state, routes events through the reducer,
// and performs the only side effects (HTTP calls, DOM swaps). Views stay
// pure so the interesting logic is testable without a browser.

import { ApiClient, isAbort } from "./api.js";
import type { AppEvent, SearchState } from "./state.js";
import { buildRequest, initialState, reduce } from "./state.js";
import type { Route } from "./router.js";
import { formatRoute, parseHash } from "./router.js";
import { renderTimeline } from "./timeline.js";
import { drawOverlay, scaleBox } from "./highlight.js";
import {
  renderChips,
  renderConcordance,
  renderDocument,
  renderEntityCard,
  renderError,
  renderFacetPanel,
  renderLoading,
  renderResults,
} from "./views.js";
import type { UiConfig } from "./types.js";

const SEARCH_TRIGGERS = new Set<AppEvent["type"]>([
  "search-submitted",
  "facet-toggled",
  "filter-removed",
  "year-range-selected",
  "year-range-cleared",
  "page-changed",
]);

const DISPLAY_WIDTH = 600;

export class App {
  private stateValue: SearchState = initialState;
  private route: Route = { view: "search" };
  private readonly root: HTMLElement;
  private readonly api: ApiClient;
  private readonly config: UiConfig;
  private queryInput!: HTMLInputElement;
  private chipSlot!: HTMLElement;
  private facetSlot!: HTMLElement;
  private contentSlot!: HTMLElement;
  private errorSlot!: HTMLElement;

  constructor(root: HTMLElement, api: ApiClient, config: UiConfig) {
    this.root = root;
    this.api = api;
    this.config = config;
  }

  get state(): SearchState {
    return this.stateValue;
  }

  init(): void {
    this.buildSkeleton();
    window.addEventListener("hashchange", () => {
      this.setRoute(parseHash(window.location.hash));
    });
    this.setRoute(parseHash(window.location.hash));
  }

  dispatch(event: AppEvent): void {
    this.stateValue = reduce(this.stateValue, event);
    if (SEARCH_TRIGGERS.has(event.type)) this.runSearch();
    this.render();
  }

  navigate(route: Route): void {
    window.location.hash = formatRoute(route);
    // hashchange fires asynchronously; apply the route now for immediacy
    this.setRoute(route);
  }

  private setRoute(route: Route): void {
    this.route = route;
    this.render();
    this.loadRoute(route);
  }

  private runSearch(): void {
    const request = buildRequest(this.stateValue);
    this.dispatch({ type: "search-started", request });
    const requestId = this.stateValue.requestId;
    this.api.search(request).then(
      (response) => this.dispatch({ type: "search-succeeded", requestId, response }),
      (err: unknown) => {
        if (isAbort(err)) return;
        const message = err instanceof Error ? err.message : String(err);
        this.dispatch({ type: "search-failed", requestId, message });
      },
    );
  }

  private buildSkeleton(): void {
    this.root.textContent = "";
    const header = document.createElement("header");
    header.className = "app-header";

    const form = document.createElement("form");
    form.className = "search-form";
    this.queryInput = document.createElement("input");
    this.queryInput.type = "search";
    this.queryInput.name = "q";
    this.queryInput.placeholder = "Search the archive…";
    this.queryInput.addEventListener("input", () => {
      this.dispatch({ type: "query-changed", query: this.queryInput.value });
    });
    const submit = document.createElement("button");
    submit.type = "submit";
    submit.textContent = "Search";
    form.appendChild(this.queryInput);
    form.appendChild(submit);
    form.addEventListener("submit", (ev) => {
      ev.preventDefault();
      this.navigate({ view: "search" });
      this.dispatch({ type: "search-submitted" });
    });
    header.appendChild(form);

    const nav = document.createElement("nav");
    nav.className = "app-nav";
    const timelineLink = document.createElement("a");
    timelineLink.href = "#/timeline";
    timelineLink.textContent = "Timeline";
    nav.appendChild(timelineLink);
    header.appendChild(nav);

    this.errorSlot = document.createElement("div");
    this.errorSlot.className = "error-slot";
    this.chipSlot = document.createElement("div");
    this.chipSlot.className = "chip-slot";

    const layout = document.createElement("div");
    layout.className = "layout";
    this.facetSlot = document.createElement("div");
    this.facetSlot.className = "facet-slot";
    this.contentSlot = document.createElement("main");
    this.contentSlot.className = "content";
    layout.appendChild(this.facetSlot);
    layout.appendChild(this.contentSlot);

    this.root.appendChild(header);
    this.root.appendChild(this.errorSlot);
    this.root.appendChild(this.chipSlot);
    this.root.appendChild(layout);
  }

  private render(): void {
    const s = this.stateValue;
    if (this.queryInput.value !== s.query) this.queryInput.value = s.query;

    this.errorSlot.textContent = "";
    if (s.error !== null) {
      this.errorSlot.appendChild(
        renderError(s.error, () => this.dispatch({ type: "error-dismissed" })),
      );
    }

    this.chipSlot.textContent = "";
    this.chipSlot.appendChild(
      renderChips(
        s.filters,
        s.yearRange,
        (field, value) => this.dispatch({ type: "filter-removed", field, value }),
        () => this.dispatch({ type: "year-range-cleared" }),
      ),
    );

    if (this.route.view !== "search") return;

    this.facetSlot.textContent = "";
    this.contentSlot.textContent = "";
    if (s.status === "loading") {
      this.contentSlot.appendChild(renderLoading());
    }
    if (s.results) {
      this.facetSlot.appendChild(
        renderFacetPanel(s.results.facets, s.filters, (field, value) =>
          this.dispatch({ type: "facet-toggled", field, value }),
        ),
      );
      if (s.status !== "loading") {
        this.contentSlot.appendChild(
          renderResults(
            s.results,
            (docId) => this.navigate({ view: "document", docId }),
            (offset) => this.dispatch({ type: "page-changed", offset }),
          ),
        );
      }
    }
  }

  private loadRoute(route: Route): void {
    switch (route.view) {
      case "search":
        return;
      case "document":
        void this.showDocument(route.docId, route.span);
        return;
      case "entity":
        void this.showEntity(route.kind, route.name);
        return;
      case "concordance":
        void this.showConcordance(route.term);
        return;
      case "timeline":
        void this.showTimeline(route.term);
        return;
    }
  }

  private showFailure(err: unknown): void {
    const message = err instanceof Error ? err.message : String(err);
    this.contentSlot.textContent = "";
    this.contentSlot.appendChild(renderError(message, () => this.setRoute({ view: "search" })));
  }

  private async showDocument(docId: string, span?: { start: number; end: number }): Promise<void> {
    this.facetSlot.textContent = "";
    this.contentSlot.textContent = "";
    this.contentSlot.appendChild(renderLoading());
    try {
      const doc = await this.api.document(docId);
      this.contentSlot.textContent = "";
      const panel = document.createElement("div");
      panel.className = "highlight-panel";
      const view = renderDocument(doc, (start, end) => {
        void this.showHighlights(panel, docId, start, end);
      });
      this.contentSlot.appendChild(view);
      this.contentSlot.appendChild(panel);
      if (span) void this.showHighlights(panel, docId, span.start, span.end);
    } catch (err) {
      this.showFailure(err);
    }
  }

  private async showHighlights(
    panel: HTMLElement,
    docId: string,
    start: number,
    end: number,
  ): Promise<void> {
    try {
      const res = await this.api.highlights(docId, start, end);
      panel.textContent = "";
      if (res.boxes.length === 0) return;
      const pageSize = { width: this.config.pageWidth, height: this.config.pageHeight };
      const display = {
        width: DISPLAY_WIDTH,
        height: (DISPLAY_WIDTH * pageSize.height) / pageSize.width,
      };
      const page = res.boxes[0].page;
      if (this.config.imageTemplate) {
        const frame = document.createElement("div");
        frame.className = "page-frame";
        frame.style.position = "relative";
        frame.style.width = `${display.width}px`;
        frame.style.height = `${display.height}px`;
        const img = document.createElement("img");
        img.src = this.config.imageTemplate
          .replace("{doc}", encodeURIComponent(docId))
          .replace("{page}", String(page));
        img.width = display.width;
        img.height = display.height;
        frame.appendChild(img);
        drawOverlay(
          frame,
          res.boxes.filter((b) => b.page === page),
          pageSize,
          display,
        );
        panel.appendChild(frame);
      } else {
        const list = document.createElement("ul");
        list.className = "box-list";
        for (const box of res.boxes) {
          const scaled = scaleBox(box, pageSize, display);
          const item = document.createElement("li");
          item.setAttribute("data-page", String(box.page));
          item.textContent =
            `page ${box.page}: ` +
            `${Math.round(scaled.x)},${Math.round(scaled.y)} ` +
            `${Math.round(scaled.w)}×${Math.round(scaled.h)}`;
          list.appendChild(item);
        }
        panel.appendChild(list);
      }
    } catch (err) {
      this.showFailure(err);
    }
  }

  private async showEntity(kind: string, name: string): Promise<void> {
    this.facetSlot.textContent = "";
    this.contentSlot.textContent = "";
    this.contentSlot.appendChild(renderLoading());
    try {
      const card = await this.api.entity(kind, name);
      this.contentSlot.textContent = "";
      this.contentSlot.appendChild(
        renderEntityCard(card, (docId) => this.navigate({ view: "document", docId })),
      );
    } catch (err) {
      this.showFailure(err);
    }
  }

  private async showConcordance(term: string): Promise<void> {
    this.facetSlot.textContent = "";
    this.contentSlot.textContent = "";
    this.contentSlot.appendChild(renderLoading());
    try {
      const res = await this.api.concordance(term);
      this.contentSlot.textContent = "";
      this.contentSlot.appendChild(renderConcordance(res));
    } catch (err) {
      this.showFailure(err);
    }
  }

  private async showTimeline(term?: string): Promise<void> {
    this.facetSlot.textContent = "";
    this.contentSlot.textContent = "";
    this.contentSlot.appendChild(renderLoading());
    try {
      const res = await this.api.timeline(term);
      this.contentSlot.textContent = "";
      this.contentSlot.appendChild(
        renderTimeline(res.series, res.undated_docs, {
          onRangeSelected: (from, to) => {
            this.navigate({ view: "search" });
            this.dispatch({ type: "year-range-selected", from, to });
          },
        }),
      );
    } catch (err) {
      this.showFailure(err);
    }
  }
}
