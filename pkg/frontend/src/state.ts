// The search screen as a pure state machine: every transition is
// reduce(state, event) with no IO, so any recorded event log replays to
// the same state. Effects (issuing requests) live in the app shell.

import type { Filter, SearchResponse } from "./types.js";

export type YearRange = { from: number; to: number };

export type SearchRequest = {
  q: string;
  filters: Filter[];
  facets: string[];
  offset: number;
  limit: number;
};

export type SearchStatus = "idle" | "loading" | "ok" | "error";

export type SearchState = {
  query: string;
  filters: Filter[];
  yearRange: YearRange | null;
  offset: number;
  limit: number;
  status: SearchStatus;
  error: string | null;
  results: SearchResponse | null;
  lastRequest: SearchRequest | null;
  requestId: number;
};

export type AppEvent =
  | { type: "query-changed"; query: string }
  | { type: "search-submitted" }
  | { type: "facet-toggled"; field: string; value: string }
  | { type: "filter-removed"; field: string; value: string }
  | { type: "year-range-selected"; from: number; to: number }
  | { type: "year-range-cleared" }
  | { type: "page-changed"; offset: number }
  | { type: "search-started"; request: SearchRequest }
  | { type: "search-succeeded"; requestId: number; response: SearchResponse }
  | { type: "search-failed"; requestId: number; message: string }
  | { type: "error-dismissed" };

export const FACET_FIELDS = ["collection", "year", "person", "place", "temporal"] as const;

export const initialState: SearchState = {
  query: "",
  filters: [],
  yearRange: null,
  offset: 0,
  limit: 20,
  status: "idle",
  error: null,
  results: null,
  lastRequest: null,
  requestId: 0,
};

const sameFilter = (a: Filter, b: Filter): boolean => a.field === b.field && a.value === b.value;

export function reduce(state: SearchState, event: AppEvent): SearchState {
  switch (event.type) {
    case "query-changed":
      return { ...state, query: event.query };
    case "search-submitted":
      return { ...state, offset: 0 };
    case "facet-toggled": {
      const filter = { field: event.field, value: event.value };
      const present = state.filters.some((f) => sameFilter(f, filter));
      const filters = present
        ? state.filters.filter((f) => !sameFilter(f, filter))
        : [...state.filters, filter];
      return { ...state, filters, offset: 0 };
    }
    case "filter-removed":
      return {
        ...state,
        filters: state.filters.filter((f) => !sameFilter(f, event)),
        offset: 0,
      };
    case "year-range-selected": {
      const from = Math.min(event.from, event.to);
      const to = Math.max(event.from, event.to);
      return { ...state, yearRange: { from, to }, offset: 0 };
    }
    case "year-range-cleared":
      return { ...state, yearRange: null, offset: 0 };
    case "page-changed":
      return { ...state, offset: Math.max(0, event.offset) };
    case "search-started":
      return {
        ...state,
        status: "loading",
        lastRequest: event.request,
        requestId: state.requestId + 1,
      };
    case "search-succeeded":
      if (event.requestId !== state.requestId) return state; // superseded
      return { ...state, status: "ok", results: event.response, error: null };
    case "search-failed":
      if (event.requestId !== state.requestId) return state;
      // previous results stay on screen; the error renders as a banner
      return { ...state, status: "error", error: event.message };
    case "error-dismissed":
      return { ...state, error: null };
  }
}

// A selected year range becomes a query clause rather than a filter chip:
// plain filters are single exact values, OR-ing years needs query syntax.
export function yearClause(range: YearRange | null): string {
  if (!range) return "";
  const years: string[] = [];
  for (let y = range.from; y <= range.to; y++) years.push(`year:${y}`);
  return years.length === 1 ? years[0] : `(${years.join(" OR ")})`;
}

export function buildRequest(state: SearchState): SearchRequest {
  const clause = yearClause(state.yearRange);
  const q = [state.query.trim(), clause].filter(Boolean).join(" ");
  return {
    q,
    filters: state.filters.map((f) => ({ ...f })),
    facets: [...FACET_FIELDS],
    offset: state.offset,
    limit: state.limit,
  };
}

export function replay(events: AppEvent[], from: SearchState = initialState): SearchState {
  return events.reduce(reduce, from);
}
