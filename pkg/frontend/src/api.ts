// Thin client over the HTTP API. The fetch implementation is injectable so
// tests can run against canned payloads without a network.

import type {
  ConcordanceResponse,
  DocumentResponse,
  EntityResponse,
  HealthResponse,
  HighlightsResponse,
  SearchResponse,
  TimelineResponse,
} from "./types.js";
import type { SearchRequest } from "./state.js";

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  readonly status: number;
  readonly code: string;

  constructor(status: number, code: string, message: string) {
    super(message);
    this.status = status;
    this.code = code;
  }
}

export function isAbort(err: unknown): boolean {
  return err instanceof DOMException && err.name === "AbortError";
}

async function parseError(res: Response): Promise<ApiError> {
  let code = "http_error";
  let message = `HTTP ${res.status}`;
  try {
    const body = (await res.json()) as { code?: string; message?: string };
    if (body.code) code = body.code;
    if (body.message) message = body.message;
  } catch {
    // non-JSON error body, keep the generic message
  }
  return new ApiError(res.status, code, message);
}

export class ApiClient {
  private readonly base: string;
  private readonly fetchImpl: FetchLike;
  private searchAbort: AbortController | null = null;

  constructor(base: string, fetchImpl?: FetchLike) {
    this.base = base.replace(/\/+$/, "");
    this.fetchImpl = fetchImpl ?? ((url, init) => fetch(url, init));
  }

  private async get<T>(path: string, signal?: AbortSignal): Promise<T> {
    const res = await this.fetchImpl(this.base + path, signal ? { signal } : undefined);
    if (!res.ok) throw await parseError(res);
    return (await res.json()) as T;
  }

  // Only one search is in flight at a time; a new one aborts its predecessor.
  search(req: SearchRequest): Promise<SearchResponse> {
    this.searchAbort?.abort();
    this.searchAbort = new AbortController();
    const params = new URLSearchParams();
    params.set("q", req.q);
    for (const f of req.filters) params.append("filter", `${f.field}:${f.value}`);
    if (req.facets.length > 0) params.set("facets", req.facets.join(","));
    params.set("offset", String(req.offset));
    params.set("limit", String(req.limit));
    return this.get<SearchResponse>(`/search?${params}`, this.searchAbort.signal);
  }

  document(docId: string): Promise<DocumentResponse> {
    return this.get<DocumentResponse>(`/documents/${encodeURIComponent(docId)}`);
  }

  highlights(docId: string, start: number, end: number): Promise<HighlightsResponse> {
    return this.get<HighlightsResponse>(
      `/documents/${encodeURIComponent(docId)}/highlights?span=${start},${end}`,
    );
  }

  concordance(term: string, window = 5, offset = 0, limit = 50): Promise<ConcordanceResponse> {
    const params = new URLSearchParams({
      term,
      window: String(window),
      offset: String(offset),
      limit: String(limit),
    });
    return this.get<ConcordanceResponse>(`/concordance?${params}`);
  }

  timeline(term?: string): Promise<TimelineResponse> {
    const suffix = term ? `?term=${encodeURIComponent(term)}` : "";
    return this.get<TimelineResponse>(`/timeline${suffix}`);
  }

  entity(kind: string, name: string): Promise<EntityResponse> {
    return this.get<EntityResponse>(
      `/entities/${encodeURIComponent(kind)}/${encodeURIComponent(name)}`,
    );
  }

  health(): Promise<HealthResponse> {
    return this.get<HealthResponse>("/health");
  }
}
