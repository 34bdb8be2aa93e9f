/** Drives the app against a real service process: describe a problem,
 * review the cards (with one retype), solve, and check that the browser
 * shows exactly what the service computed. A raw-HTTP replay of the same
 * actions must land on the same model.
 */

import { spawn, type ChildProcess } from "node:child_process";
import { mkdtempSync, rmSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";

import { afterAll, beforeAll, expect, it } from "vitest";

import { FetchLike } from "../src/api.js";
import { App } from "../src/app.js";

const PORT = 8911;
const BASE = `http://127.0.0.1:${PORT}`;

const DESCRIPTION =
  "A shipping company need to transport packages by either truck or car. "
  + "A truck can transport 50 packages per trip while a car can transport "
  + "30 packages per trip. In addition, a truck uses 20 liters of gas per "
  + "trip while a car uses 15 liters of gas per trip. There can be at most "
  + "5 truck trips made and at least 30% of all the trips must be made by "
  + "car. The company needs to transport at least 500 packages. How many "
  + "of each transportation should they use to minimize the total amount "
  + "of gas consumed?";

let child: ChildProcess;
let persistDir: string;

async function waitForService(): Promise<void> {
  const deadline = Date.now() + 30_000;
  let lastError: unknown = null;
  while (Date.now() < deadline) {
    try {
      const res = await fetch(`${BASE}/healthz`);
      if (res.ok) return;
    } catch (error) {
      lastError = error;
    }
    await new Promise((resolve) => setTimeout(resolve, 250));
  }
  throw new Error(`service never came up: ${String(lastError)}`);
}

beforeAll(async () => {
  persistDir = mkdtempSync(join(tmpdir(), "lpwb-webui-"));
  child = spawn(
    "lpwb",
    [
      "serve",
      "--host",
      "127.0.0.1",
      "--port",
      String(PORT),
      "--persist-dir",
      persistDir,
    ],
    { stdio: "ignore" },
  );
  await waitForService();
});

afterAll(() => {
  child.kill();
  rmSync(persistDir, { recursive: true, force: true });
});

async function raw<T>(
  method: string,
  path: string,
  body?: unknown,
): Promise<T> {
  const res = await fetch(BASE + path, {
    method,
    headers:
      body === undefined ? undefined : { "Content-Type": "application/json" },
    body: body === undefined ? undefined : JSON.stringify(body),
  });
  if (res.status === 204) return null as T;
  const payload = (await res.json()) as T;
  if (!res.ok) {
    throw new Error(`${method} ${path} -> ${res.status}: ${JSON.stringify(payload)}`);
  }
  return payload;
}

it("walks describe, review, retype, accept all, solve on a live service", async () => {
  document.body.innerHTML = '<div id="app"></div>';
  const root = document.getElementById("app") as HTMLElement;

  let uiSessionId = "";
  const tappedFetch: FetchLike = async (input, init) => {
    const res = await fetch(input, init);
    if ((init?.method ?? "GET") === "POST" && input.endsWith("/sessions")) {
      const body = (await res.clone().json()) as { session_id: string };
      uiSessionId = body.session_id;
    }
    return res;
  };

  const app = new App({ root, baseUrl: BASE, fetchFn: tappedFetch });
  app.mount();

  await app.describe(DESCRIPTION);
  expect(uiSessionId).not.toBe("");
  expect(root.querySelectorAll(".overlay mark.entity").length)
    .toBeGreaterThan(0);

  // first card: the objective
  const active = () => root.querySelector<HTMLElement>(".card.active");
  expect(active()?.getAttribute("data-index")).toBe("0");
  expect(root.querySelectorAll(".card.active")).toHaveLength(1);
  active()!.querySelector<HTMLButtonElement>(".accept")!.click();
  await app.settled();

  // second card arrives as a plain upper bound on truck trips
  const card1 = () =>
    root.querySelector<HTMLElement>('.card[data-index="1"]')!;
  expect(card1().querySelector(".rendered")?.textContent).toContain(
    "truck <= 5",
  );

  // the sentence talks about a share of all trips, so reread it as a ratio
  const select = card1().querySelector<HTMLSelectElement>("select.retype")!;
  select.value = "RATIO_CONSTRAINT";
  select.dispatchEvent(new Event("change"));
  await app.settled();

  expect(card1().querySelector(".rendered")?.textContent).toContain(
    "0.05 of the total",
  );
  const coefficients = [...card1().querySelectorAll("td.coefficient")].map(
    (cell) => cell.textContent,
  );
  expect(coefficients).toEqual(["0.95", "-0.05"]);
  expect(card1().querySelector("td.rhs")?.textContent).toBe("0");

  // accept everything that is still open
  for (let spins = 0; spins < 10; spins++) {
    const accept = root.querySelector<HTMLButtonElement>(
      ".card.active .accept",
    );
    if (!accept) break;
    accept.click();
    await app.settled();
  }
  expect(root.querySelector(".review-done")).not.toBeNull();
  expect(root.querySelectorAll(".card")).toHaveLength(4);
  expect(
    [...root.querySelectorAll(".status-badge")].map((b) => b.textContent),
  ).toEqual(["accepted", "accepted", "accepted", "accepted"]);

  const solveButton = root.querySelector<HTMLButtonElement>("button.solve")!;
  expect(solveButton.disabled).toBe(false);
  solveButton.click();
  await app.settled();

  const shownObjective = root.querySelector(".objective-value")?.textContent;
  expect(shownObjective).toBeTruthy();
  expect(root.querySelector(".solve-result.optimal")).not.toBeNull();

  // replay the identical action sequence over raw HTTP
  const made = await raw<{ session_id: string }>("POST", "/sessions", {
    description: DESCRIPTION,
  });
  const sid = made.session_id;
  const next = () => raw<unknown>("GET", `/sessions/${sid}/suggestions/next`);
  await next();
  await raw("POST", `/sessions/${sid}/declarations/0/accept`);
  await next();
  await raw("POST", `/sessions/${sid}/declarations/1/retype`, {
    const_type: "RATIO_CONSTRAINT",
  });
  await raw("POST", `/sessions/${sid}/declarations/1/accept`);
  await next();
  await raw("POST", `/sessions/${sid}/declarations/2/accept`);
  await next();
  await raw("POST", `/sessions/${sid}/declarations/3/accept`);
  expect(await next()).toBeNull();

  const solved = await raw<{ status: string; objective_value: number }>(
    "POST",
    `/sessions/${sid}/solve`,
  );
  expect(solved.status).toBe("optimal");

  // what the page shows is the service's number, character for character
  expect(shownObjective).toBe(String(solved.objective_value));
  expect(Number(shownObjective)).toBeCloseTo(245.967742, 6);

  // and both routes into the service left the same model behind
  const uiModel = await raw<Record<string, unknown>>(
    "GET",
    `/sessions/${uiSessionId}`,
  );
  const rawModel = await raw<Record<string, unknown>>(
    "GET",
    `/sessions/${sid}`,
  );
  delete uiModel.session_id;
  delete rawModel.session_id;
  expect(uiModel).toEqual(rawModel);
}, 60_000);
