// Shared plumbing for tests: a fetch stand-in that serves canned JSON and
// records every URL it was asked for.

import type { FetchLike } from "../src/api.js";

export function jsonResponse(body: unknown, status = 200): Response {
  const res = {
    ok: status >= 200 && status < 300,
    status,
    json: () => Promise.resolve(body),
  };
  return res as unknown as Response;
}

export type FakeFetch = {
  fetchImpl: FetchLike;
  urls: string[];
};

// Routes by substring match, first entry wins. Unmatched URLs get a 404
// in the service's error envelope shape.
export function fakeFetch(routes: Array<[string, unknown]>): FakeFetch {
  const urls: string[] = [];
  const fetchImpl: FetchLike = (url) => {
    urls.push(url);
    for (const [needle, body] of routes) {
      if (url.includes(needle)) return Promise.resolve(jsonResponse(body));
    }
    return Promise.resolve(jsonResponse({ code: "not_found", message: `no route: ${url}` }, 404));
  };
  return { fetchImpl, urls };
}

export function flush(): Promise<void> {
  return new Promise((resolve) => setTimeout(resolve, 0));
}

export function deepFreeze<T>(value: T): T {
  if (value !== null && typeof value === "object" && !Object.isFrozen(value)) {
    Object.freeze(value);
    for (const v of Object.values(value as object)) deepFreeze(v);
  }
  return value;
}
