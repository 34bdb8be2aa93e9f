/** Top-level controller: describe, review one card at a time, solve.
 *
 * The app holds service payloads verbatim and re-renders from them; it
 * never derives a number itself. The one string operation on the model
 * is locating user-tagged text inside the description.
 */

import {
  ApiError,
  EntitySpan,
  FetchLike,
  isFailure,
  ServiceClient,
  SolveResult,
  Suggestion,
} from "./api.js";
import { EditError, fieldForTag, PatchField, renderCard } from "./cards.js";
import { clear, el } from "./dom.js";
import { renderOverlay } from "./overlay.js";
import { renderSolve } from "./solve.js";

export interface AppOptions {
  root: HTMLElement;
  baseUrl: string;
  fetchFn: FetchLike;
}

export const ENTITY_LABELS = [
  "VAR",
  "PARAM",
  "LIMIT",
  "CONST_DIR",
  "OBJ_DIR",
  "OBJ_NAME",
];

export class App {
  readonly client: ServiceClient;
  private readonly root: HTMLElement;

  private draft = "";
  private sessionId: string | null = null;
  private description = "";
  private entities: EntitySpan[] = [];
  private suggestions: Suggestion[] = [];
  private reviewDone = false;
  private editErrors = new Map<number, EditError>();
  private solveResult: SolveResult | null = null;
  private toasts: string[] = [];

  private queue: Promise<void> = Promise.resolve();

  constructor(options: AppOptions) {
    this.root = options.root;
    this.client = new ServiceClient(options.baseUrl, options.fetchFn);
  }

  mount(): void {
    this.render();
  }

  /** Resolves once every queued interaction has settled. */
  settled(): Promise<void> {
    return this.queue;
  }

  private run(task: () => Promise<void>): Promise<void> {
    this.queue = this.queue
      .then(task)
      .catch((error) => {
        this.toast(error instanceof Error ? error.message : String(error));
        this.render();
      });
    return this.queue;
  }

  private toast(message: string): void {
    this.toasts.push(message);
  }

  // ------------------------------------------------------------ actions

  describe(text: string): Promise<void> {
    return this.run(async () => {
      const made = await this.client.createSession(text);
      this.sessionId = made.session_id;
      this.description = text;
      this.entities = made.entities ?? [];
      this.suggestions = [];
      this.reviewDone = false;
      this.solveResult = null;
      this.editErrors.clear();
      this.render();
      await this.pullNext();
    });
  }

  /** Tag a piece of the description by hand and restart the review with
   * the amended entity list in the session request. */
  addSpan(text: string, label: string): Promise<void> {
    return this.run(async () => {
      if (!this.sessionId || !text) return;
      const start = this.description.indexOf(text);
      if (start < 0) {
        this.toast(`"${text}" does not occur in the description`);
        this.render();
        return;
      }
      const span: EntitySpan = {
        start,
        end: start + text.length,
        label,
        text,
      };
      // the current list already carries any earlier hand tags
      const entities = [...this.entities, span].sort(
        (a, b) => a.start - b.start || a.end - b.end,
      );
      const made = await this.client.createSession(this.description, entities);
      this.sessionId = made.session_id;
      this.entities = made.entities ?? [];
      this.suggestions = [];
      this.reviewDone = false;
      this.solveResult = null;
      this.editErrors.clear();
      this.render();
      await this.pullNext();
    });
  }

  private async pullNext(): Promise<void> {
    if (!this.sessionId || this.reviewDone) return;
    const item = await this.client.nextSuggestion(this.sessionId);
    if (item === null) {
      this.reviewDone = true;
    } else {
      this.suggestions[item.index] = item;
    }
    this.render();
  }

  private async review(
    index: number,
    call: () => Promise<Suggestion>,
    pullAfter: boolean,
  ): Promise<void> {
    try {
      const slot = await call();
      this.suggestions[index] = slot;
      this.editErrors.delete(index);
    } catch (error) {
      if (error instanceof ApiError) {
        this.toast(error.message);
        this.render();
        return;
      }
      throw error;
    }
    if (pullAfter) await this.pullNext();
    else this.render();
  }

  accept(index: number): Promise<void> {
    return this.run(() =>
      this.review(
        index,
        () => this.client.accept(this.sessionId!, index),
        true,
      ),
    );
  }

  reject(index: number): Promise<void> {
    return this.run(() =>
      this.review(
        index,
        () => this.client.reject(this.sessionId!, index),
        true,
      ),
    );
  }

  retype(index: number, kind: string): Promise<void> {
    return this.run(() =>
      this.review(
        index,
        () => this.client.retype(this.sessionId!, index, kind),
        false,
      ),
    );
  }

  editFields(
    index: number,
    fields: Partial<Record<PatchField, string>>,
  ): Promise<void> {
    return this.run(() => this.edit(index, fields));
  }

  editIr(index: number, ir: string): Promise<void> {
    return this.run(() => this.edit(index, { ir }));
  }

  private async edit(
    index: number,
    payload: Parameters<ServiceClient["edit"]>[2],
  ): Promise<void> {
    try {
      const slot = await this.client.edit(this.sessionId!, index, payload);
      this.suggestions[index] = slot;
      this.editErrors.delete(index);
    } catch (error) {
      if (error instanceof ApiError && error.status === 422) {
        this.editErrors.set(index, {
          message: error.message,
          field: fieldForTag(error.tag),
        });
      } else if (error instanceof ApiError) {
        this.toast(error.message);
      } else {
        throw error;
      }
    }
    this.render();
  }

  solve(): Promise<void> {
    return this.run(async () => {
      try {
        this.solveResult = await this.client.solve(this.sessionId!);
      } catch (error) {
        if (error instanceof ApiError) {
          this.toast(error.message);
          this.render();
          return;
        }
        throw error;
      }
      this.render();
    });
  }

  // ------------------------------------------------------------- state

  private activeIndex(): number | null {
    for (let i = this.suggestions.length - 1; i >= 0; i--) {
      const item = this.suggestions[i];
      if (!item) continue;
      if (
        isFailure(item) ||
        item.status === "suggested" ||
        item.status === "edited"
      ) {
        return i;
      }
      return null; // newest card already reviewed; waiting on the next pull
    }
    return null;
  }

  private hasAcceptedObjective(): boolean {
    return this.suggestions.some(
      (item) =>
        item &&
        !isFailure(item) &&
        item.status === "accepted" &&
        (item.declaration_ir ?? "").includes("<OBJ_DIR>"),
    );
  }

  // ------------------------------------------------------------ render

  private render(): void {
    clear(this.root);
    const app = el("div", { class: "app" });
    app.append(this.renderDescribePanel());
    app.append(this.renderReviewPanel());
    app.append(this.renderSolvePanel());
    app.append(this.renderToasts());
    this.root.append(app);
  }

  private renderDescribePanel(): HTMLElement {
    const panel = el("section", { class: "describe-panel" });
    panel.append(el("h2", {}, "Problem"));
    const input = el("textarea", {
      class: "description-input",
      rows: "6",
      placeholder: "Describe the optimization problem in plain language",
    });
    input.value = this.draft;
    input.addEventListener("input", () => {
      this.draft = input.value;
    });
    const start = el(
      "button",
      { class: "describe", type: "button" },
      "Start review",
    );
    start.addEventListener("click", () => {
      void this.describe(this.draft);
    });
    panel.append(input, start);

    if (this.sessionId) {
      panel.append(
        renderOverlay(
          this.description,
          this.entities,
          this.conflictSentences(),
        ),
      );
      panel.append(this.renderSpanTools());
    } else {
      panel.append(renderOverlay("", []));
    }
    return panel;
  }

  private conflictSentences(): string[] {
    const result = this.solveResult;
    if (!result || result.status !== "infeasible") return [];
    return (result.conflicts ?? []).map((c) => c.source_text);
  }

  private renderSpanTools(): HTMLElement {
    const tools = el("div", { class: "entity-tools" });
    const text = el("input", {
      class: "span-text",
      placeholder: "text to tag",
    });
    const label = el("select", { class: "span-label" });
    for (const name of ENTITY_LABELS) {
      label.append(el("option", { value: name }, name));
    }
    const add = el(
      "button",
      { class: "add-span", type: "button" },
      "Tag it and restart",
    );
    add.addEventListener("click", () => {
      void this.addSpan(text.value.trim(), label.value);
    });
    tools.append(text, label, add);
    return tools;
  }

  private renderReviewPanel(): HTMLElement {
    const panel = el("section", { class: "review-panel" });
    panel.append(el("h2", {}, "Suggested declarations"));
    const cards = el("div", { class: "cards" });
    const active = this.activeIndex();
    for (const item of this.suggestions) {
      if (!item) continue;
      cards.append(
        renderCard(item, {
          active: item.index === active,
          editError: this.editErrors.get(item.index),
          handlers: {
            accept: (i) => void this.accept(i),
            reject: (i) => void this.reject(i),
            retype: (i, kind) => void this.retype(i, kind),
            editFields: (i, fields) => void this.editFields(i, fields),
            editIr: (i, ir) => void this.editIr(i, ir),
          },
        }),
      );
    }
    panel.append(cards);
    if (this.sessionId && this.reviewDone) {
      panel.append(el("p", { class: "review-done" }, "All cards reviewed."));
    }
    return panel;
  }

  private renderSolvePanel(): HTMLElement {
    const panel = el("section", { class: "solve-panel" });
    panel.append(el("h2", {}, "Solve"));
    const button = el("button", { class: "solve", type: "button" }, "Solve");
    if (!this.hasAcceptedObjective()) {
      button.setAttribute("disabled", "disabled");
    }
    button.addEventListener("click", () => {
      void this.solve();
    });
    panel.append(button);
    if (this.solveResult) {
      panel.append(renderSolve(this.solveResult));
    }
    return panel;
  }

  private renderToasts(): HTMLElement {
    const host = el("div", { class: "toasts" });
    for (const message of this.toasts.slice(-3)) {
      host.append(el("div", { class: "toast" }, message));
    }
    return host;
  }
}
