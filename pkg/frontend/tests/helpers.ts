/** Test doubles: a recording fetch and a small in-memory service stub. */

import {
  EntitySpan,
  FetchLike,
  isFailure,
  SessionModel,
  Slot,
  Suggestion,
} from "../src/api.js";
import { App } from "../src/app.js";

export interface RecordedRequest {
  method: string;
  path: string;
  body: Record<string, unknown> | null;
}

export interface StubReply {
  status?: number;
  body?: unknown;
}

export function fakeResponse(status: number, body: unknown): Response {
  return {
    ok: status >= 200 && status < 300,
    status,
    statusText: String(status),
    json: async () => body,
  } as unknown as Response;
}

/** Serves scripted cards one at a time and records every request. */
export class FakeService {
  requests: RecordedRequest[] = [];
  /** Bodies this stub has served, for provenance sweeps. */
  served: unknown[] = [];
  /** Entities attached when a session is created without an explicit list. */
  autoEntities: EntitySpan[] = [];
  /** Cards handed out by consecutive suggestion pulls, in slot order. */
  cards: Suggestion[] = [];

  onAccept: ((index: number) => StubReply) | null = null;
  onReject: ((index: number) => StubReply) | null = null;
  onEdit:
    | ((index: number, body: Record<string, unknown>) => StubReply)
    | null = null;
  onRetype: ((index: number, kind: string) => StubReply) | null = null;
  onSolve: () => StubReply = () => ({
    status: 409,
    body: { code: "no_objective", message: "accept an objective first" },
  });

  private description = "";
  private entities: EntitySpan[] = [];
  private cursor = 0;
  private sessions = 0;

  readonly fetchFn: FetchLike = async (input, init) => {
    const path = input.replace(/^https?:\/\/[^/]+/, "");
    const method = (init?.method ?? "GET").toUpperCase();
    const body = init?.body
      ? (JSON.parse(String(init.body)) as Record<string, unknown>)
      : null;
    this.requests.push({ method, path, body });
    const reply = this.route(method, path, body);
    const status = reply.status ?? 200;
    if (reply.body !== undefined) this.served.push(reply.body);
    return fakeResponse(status, reply.body ?? null);
  };

  private sessionModel(): SessionModel {
    return {
      session_id: `s-${this.sessions}`,
      description: this.description,
      entities: this.entities,
      cursor: this.cursor,
      declarations: this.cards.filter(
        (card): card is Slot => !isFailure(card),
      ),
    };
  }

  private route(
    method: string,
    path: string,
    body: Record<string, unknown> | null,
  ): StubReply {
    if (method === "POST" && path === "/sessions") {
      this.sessions += 1;
      this.cursor = 0;
      this.description = String(body?.description ?? "");
      this.entities = (body?.entities as EntitySpan[]) ?? this.autoEntities;
      // the live service answers with just the id and the tagged spans
      return {
        status: 201,
        body: { session_id: `s-${this.sessions}`, entities: this.entities },
      };
    }
    if (method === "GET" && /\/suggestions\/next$/.test(path)) {
      if (this.cursor >= this.cards.length) return { status: 204 };
      const card = this.cards[this.cursor];
      this.cursor += 1;
      return { body: card };
    }
    const review = path.match(
      /\/declarations\/(\d+)\/(accept|reject|edit|retype)$/,
    );
    if (method === "POST" && review) {
      const index = Number(review[1]);
      const action = review[2];
      const pos = this.cards.findIndex((c) => c.index === index);
      const card = this.cards[pos] as Slot;
      if (action === "accept") {
        if (this.onAccept) return this.onAccept(index);
        this.cards[pos] = { ...card, status: "accepted" };
        return { body: this.cards[pos] };
      }
      if (action === "reject") {
        if (this.onReject) return this.onReject(index);
        this.cards[pos] = { ...card, status: "rejected" };
        return { body: this.cards[pos] };
      }
      if (action === "edit") {
        if (this.onEdit) return this.onEdit(index, body ?? {});
        this.cards[pos] = { ...card, status: "edited" };
        return { body: this.cards[pos] };
      }
      if (this.onRetype) {
        return this.onRetype(index, String(body?.const_type ?? ""));
      }
      return {
        status: 422,
        body: { code: "bad_retype", message: "cannot retype this card" },
      };
    }
    if (method === "POST" && /\/solve$/.test(path)) return this.onSolve();
    if (method === "GET" && /^\/sessions\/[^/]+$/.test(path)) {
      return { body: this.sessionModel() };
    }
    return {
      status: 500,
      body: { code: "unhandled", message: `${method} ${path}` },
    };
  }
}

export function mountApp(fake: FakeService): { app: App; root: HTMLElement } {
  document.body.innerHTML = '<div id="app"></div>';
  const root = document.getElementById("app") as HTMLElement;
  const app = new App({
    root,
    baseUrl: "http://service.test",
    fetchFn: fake.fetchFn,
  });
  app.mount();
  return { app, root };
}

export function span(
  description: string,
  text: string,
  label: string,
): EntitySpan {
  const start = description.indexOf(text);
  if (start < 0) throw new Error(`"${text}" not in description`);
  return { start, end: start + text.length, label, text };
}

/** Every numeric token somewhere in a served payload, as rendered text. */
export function servedNumberTokens(payloads: unknown[]): Set<string> {
  const tokens = new Set<string>();
  const visit = (value: unknown): void => {
    if (typeof value === "number") {
      tokens.add(String(value));
    } else if (typeof value === "string") {
      for (const match of value.matchAll(/-?\d+(?:\.\d+)?/g)) {
        tokens.add(match[0]);
      }
    } else if (Array.isArray(value)) {
      value.forEach(visit);
    } else if (value && typeof value === "object") {
      Object.values(value).forEach(visit);
    }
  };
  payloads.forEach(visit);
  return tokens;
}

export function domNumberTokens(root: HTMLElement): string[] {
  // tokenize per text node; textContent would glue adjacent cells together
  const tokens: string[] = [];
  const walker = document.createTreeWalker(root, NodeFilter.SHOW_TEXT);
  let node: Node | null;
  while ((node = walker.nextNode())) {
    for (const match of (node.nodeValue ?? "").matchAll(/-?\d+(?:\.\d+)?/g)) {
      tokens.push(match[0]);
    }
  }
  return tokens;
}
