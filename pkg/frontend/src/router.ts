// Hash-based routing: the page never reloads, the fragment names the view.

export type Route =
  | { view: "search" }
  | { view: "document"; docId: string; span?: { start: number; end: number } }
  | { view: "entity"; kind: string; name: string }
  | { view: "concordance"; term: string }
  | { view: "timeline"; term?: string };

export function parseHash(hash: string): Route {
  const raw = hash.startsWith("#") ? hash.slice(1) : hash;
  const parts = raw.split("/").filter(Boolean).map(decodeURIComponent);
  switch (parts[0]) {
    case "doc": {
      if (!parts[1]) return { view: "search" };
      const m = parts[2] ? /^(\d+),(\d+)$/.exec(parts[2]) : null;
      if (m) {
        return {
          view: "document",
          docId: parts[1],
          span: { start: Number(m[1]), end: Number(m[2]) },
        };
      }
      return { view: "document", docId: parts[1] };
    }
    case "entity":
      if (!parts[1] || !parts[2]) return { view: "search" };
      return { view: "entity", kind: parts[1], name: parts[2] };
    case "concordance":
      if (!parts[1]) return { view: "search" };
      return { view: "concordance", term: parts[1] };
    case "timeline":
      return parts[1] ? { view: "timeline", term: parts[1] } : { view: "timeline" };
    default:
      return { view: "search" };
  }
}

export function formatRoute(route: Route): string {
  const enc = encodeURIComponent;
  switch (route.view) {
    case "search":
      return "#/";
    case "document": {
      const base = `#/doc/${enc(route.docId)}`;
      return route.span ? `${base}/${route.span.start},${route.span.end}` : base;
    }
    case "entity":
      return `#/entity/${enc(route.kind)}/${enc(route.name)}`;
    case "concordance":
      return `#/concordance/${enc(route.term)}`;
    case "timeline":
      return route.term ? `#/timeline/${enc(route.term)}` : "#/timeline";
  }
}
