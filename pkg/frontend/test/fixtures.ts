// Canned API payloads plus recorded event logs. The payloads follow the
// service's JSON shapes; the logs are real interaction traces replayed by
// the determinism tests.

import type {
  ConcordanceResponse,
  DocumentResponse,
  EntityResponse,
  SearchResponse,
  TimelineResponse,
} from "../src/types.js";
import type { AppEvent } from "../src/state.js";

export const SEARCH_GUERRE: SearchResponse = {
  query: "guerre",
  total_hits: 3,
  offset: 0,
  limit: 20,
  hits: [
    {
      doc_id: "gazette-1913-06-01",
      title: "La gazette du 1er juin",
      date: "1913-06-01",
      score: 2.4183,
      snippet: "la guerre approche des frontières du pays",
      snippet_start: 120,
      match_spans: [[123, 129]],
      boxes: [{ page: 1, x: 240, y: 900, w: 310, h: 52 }],
    },
    {
      doc_id: "gazette-1913-07-15",
      title: "Nouvelles de juillet",
      date: "1913-07-15",
      score: 1.9021,
      snippet: "on parle encore de la guerre au conseil",
      snippet_start: 48,
      match_spans: [[70, 76]],
      boxes: [{ page: 2, x: 1200, y: 1500, w: 298, h: 50 }],
    },
    {
      doc_id: "bulletin-1914-01-02",
      title: "Bulletin communal",
      date: "1914-01-02",
      score: 1.1107,
      snippet: "la guerre et la paix occupent les esprits",
      snippet_start: 0,
      match_spans: [[3, 9]],
      boxes: [],
    },
  ],
  facets: {
    collection: [
      { value: "gazette", count: 2 },
      { value: "bulletin", count: 1 },
    ],
    year: [
      { value: "1913", count: 2 },
      { value: "1914", count: 1 },
    ],
    person: [
      { value: "durand", count: 2 },
      { value: "moreau", count: 1 },
    ],
    place: [{ value: "arlon", count: 2 }],
    temporal: [{ value: "1913-06-01", count: 1 }],
  },
};

export const SEARCH_BATAILLE: SearchResponse = {
  query: "bataille",
  total_hits: 1,
  offset: 0,
  limit: 20,
  hits: [
    {
      doc_id: "gazette-1913-07-15",
      title: "Nouvelles de juillet",
      date: "1913-07-15",
      score: 1.5552,
      snippet: "une bataille rangée sur la place",
      snippet_start: 200,
      match_spans: [[204, 212]],
      boxes: [],
    },
  ],
  facets: {
    collection: [{ value: "gazette", count: 1 }],
    year: [{ value: "1913", count: 1 }],
    person: [],
    place: [{ value: "arlon", count: 1 }],
    temporal: [],
  },
};

export const TIMELINE_GUERRE: TimelineResponse = {
  term: "guerre",
  series: [
    { year: 1912, count: 3 },
    { year: 1913, count: 7 },
    { year: 1915, count: 2 },
  ],
  undated_docs: 1,
};

export const ENTITY_DURAND: EntityResponse = {
  kind: "person",
  name: "durand",
  mention_count: 9,
  document_count: 3,
  documents: [
    { doc_id: "gazette-1913-06-01", title: "La gazette du 1er juin", date: "1913-06-01", mentions: 4 },
    { doc_id: "gazette-1913-07-15", title: "Nouvelles de juillet", date: "1913-07-15", mentions: 3 },
    { doc_id: "bulletin-1914-01-02", title: "Bulletin communal", date: "1914-01-02", mentions: 2 },
  ],
  co_mentions: [
    { kind: "place", name: "Arlon", shared_docs: 2 },
    { kind: "person", name: "Moreau", shared_docs: 1 },
  ],
};

export const CONCORDANCE_GUERRE: ConcordanceResponse = {
  term: "guerre",
  window: 5,
  total: 2,
  offset: 0,
  rows: [
    {
      doc_id: "gazette-1913-06-01",
      left: "on annonce que la",
      keyword: "guerre",
      right: "approche des frontières du",
      start: 123,
      end: 129,
    },
    {
      doc_id: "bulletin-1914-01-02",
      left: "la",
      keyword: "guerre",
      right: "et la paix occupent",
      start: 3,
      end: 9,
    },
  ],
};

export const DOCUMENT_GAZETTE: DocumentResponse = {
  doc_id: "gazette-1913-06-01",
  title: "La gazette du 1er juin",
  date: "1913-06-01",
  text: "Conseil communal\nM. Durand a visité Arlon le 3 juin 1913 avec sa famille.",
  sections: [
    {
      section_id: "s0001",
      title: "Conseil communal",
      paras: [
        {
          text: "M. Durand a visité Arlon le 3 juin 1913 avec sa famille.",
          span: [17, 74],
        },
      ],
    },
  ],
  annotations: [
    {
      id: "gazette-1913-06-01-a0001",
      kind: "person",
      span: [17, 26],
      surface: "M. Durand",
      normalized: "durand",
      rule_id: "gazetteer-person",
      anchors: [],
    },
    {
      id: "gazette-1913-06-01-a0002",
      kind: "place",
      span: [36, 41],
      surface: "Arlon",
      normalized: "arlon",
      rule_id: "gazetteer-place",
      anchors: [],
    },
    {
      id: "gazette-1913-06-01-a0003",
      kind: "temporal",
      span: [45, 56],
      surface: "3 juin 1913",
      normalized: "1913-06-03",
      rule_id: "date-full",
      anchors: [],
    },
  ],
};

// Recorded sessions. Each log is a faithful trace of dispatched events,
// including the effect events the app shell emits around a fetch.

const REQ = (q: string, filters: { field: string; value: string }[], offset = 0) => ({
  q,
  filters,
  facets: ["collection", "year", "person", "place", "temporal"],
  offset,
  limit: 20,
});

export const LOG_BASIC_SEARCH: AppEvent[] = [
  { type: "query-changed", query: "guerre" },
  { type: "search-submitted" },
  { type: "search-started", request: REQ("guerre", []) },
  { type: "search-succeeded", requestId: 1, response: SEARCH_GUERRE },
  { type: "facet-toggled", field: "person", value: "durand" },
  { type: "search-started", request: REQ("guerre", [{ field: "person", value: "durand" }]) },
  { type: "search-succeeded", requestId: 2, response: SEARCH_BATAILLE },
];

export const LOG_STALE_RESPONSE: AppEvent[] = [
  { type: "query-changed", query: "guerre" },
  { type: "search-submitted" },
  { type: "search-started", request: REQ("guerre", []) },
  { type: "query-changed", query: "bataille" },
  { type: "search-submitted" },
  { type: "search-started", request: REQ("bataille", []) },
  { type: "search-succeeded", requestId: 1, response: SEARCH_GUERRE },
  { type: "search-succeeded", requestId: 2, response: SEARCH_BATAILLE },
];

export const LOG_YEARS_AND_FAILURE: AppEvent[] = [
  { type: "query-changed", query: "guerre" },
  { type: "search-submitted" },
  { type: "search-started", request: REQ("guerre", []) },
  { type: "search-succeeded", requestId: 1, response: SEARCH_GUERRE },
  { type: "year-range-selected", from: 1914, to: 1913 },
  {
    type: "search-started",
    request: REQ("guerre (year:1913 OR year:1914)", []),
  },
  { type: "search-failed", requestId: 2, message: "search index not loaded" },
  { type: "error-dismissed" },
  { type: "page-changed", offset: 20 },
  { type: "search-started", request: REQ("guerre (year:1913 OR year:1914)", [], 20) },
  { type: "search-failed", requestId: 3, message: "search index not loaded" },
];

export const EVENT_LOGS: Array<[string, AppEvent[]]> = [
  ["basic search with facet", LOG_BASIC_SEARCH],
  ["stale response discarded", LOG_STALE_RESPONSE],
  ["year range and failures", LOG_YEARS_AND_FAILURE],
];
