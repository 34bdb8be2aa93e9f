import { App } from "./app.js";

function baseUrl(): string {
  const fromQuery = new URLSearchParams(window.location.search).get("api");
  if (fromQuery) return fromQuery;
  const injected = (window as unknown as { LPWB_API_BASE?: string })
    .LPWB_API_BASE;
  return injected ?? "http://127.0.0.1:8000";
}

const root = document.getElementById("app");
if (!root) throw new Error("missing #app mount point");

const app = new App({
  root,
  baseUrl: baseUrl(),
  fetchFn: (input, init) => window.fetch(input, init),
});
app.mount();
