/**
 * API base URL resolution.
 *
 * Deployments inject the base URL either at build time (replacing the
 * `window.CYPUR_API_BASE` assignment in index.html) or at runtime before
 * the bundle loads. An empty base means same-origin requests.
 */

declare global {
  // eslint-disable-next-line no-var
  var CYPUR_API_BASE: string | undefined;
}

export function apiBase(): string {
  const base = globalThis.CYPUR_API_BASE ?? "";
  return base.endsWith("/") ? base.slice(0, -1) : base;
}

export function apiUrl(path: string): string {
  return `${apiBase()}${path}`;
}
