// Mirrors of the JSON payloads served by the archive-lens HTTP API.

export type Filter = { field: string; value: string };

export type Box = { page: number; x: number; y: number; w: number; h: number };

export type FacetEntry = { value: string; count: number };

export type Hit = {
  doc_id: string;
  title: string;
  date: string;
  score: number;
  snippet: string;
  snippet_start: number;
  match_spans: [number, number][];
  boxes: Box[];
};

export type SearchResponse = {
  query: string;
  total_hits: number;
  offset: number;
  limit: number;
  hits: Hit[];
  facets: Record<string, FacetEntry[]>;
};

export type AnnotationAnchor = { page: string; block: string; line: string; token: number };

export type Annotation = {
  id: string;
  kind: string;
  span: [number, number];
  surface: string;
  normalized: string | null;
  rule_id: string;
  anchors: AnnotationAnchor[];
};

export type DocumentSection = {
  section_id: string;
  title: string | null;
  paras: { text: string; span: [number, number] }[];
};

export type DocumentResponse = {
  doc_id: string;
  title: string;
  date: string | null;
  text: string;
  sections: DocumentSection[];
  annotations: Annotation[];
};

export type HighlightsResponse = {
  doc_id: string;
  span: [number, number];
  boxes: Box[];
};

export type ConcordanceRow = {
  doc_id: string;
  left: string;
  keyword: string;
  right: string;
  start: number;
  end: number;
};

export type ConcordanceResponse = {
  term: string;
  window: number;
  total: number;
  offset: number;
  rows: ConcordanceRow[];
};

export type TimelinePoint = { year: number; count: number };

export type TimelineResponse = {
  term: string;
  series: TimelinePoint[];
  undated_docs: number;
};

export type DocMention = { doc_id: string; title: string; date: string; mentions: number };

export type CoMention = { kind: string; name: string; shared_docs: number };

export type EntityResponse = {
  kind: string;
  name: string;
  mention_count: number;
  document_count: number;
  documents: DocMention[];
  co_mentions: CoMention[];
};

export type HealthResponse = {
  status: string;
  snapshot: boolean;
  documents?: number;
  created?: string;
  detail?: string;
};

// Build-time configuration. pageWidth/pageHeight are the coordinate space
// of the ALTO sources; imageTemplate may contain {doc} and {page}.
export type UiConfig = {
  apiBase: string;
  imageTemplate: string | null;
  pageWidth: number;
  pageHeight: number;
};

export const DEFAULT_CONFIG: UiConfig = {
  apiBase: "http://127.0.0.1:8765",
  imageTemplate: null,
  pageWidth: 2400,
  pageHeight: 3600,
};
