/** Suggestion cards: one per declaration slot, reviewed one at a time. */

import {
  CanonicalRowPreview,
  isFailure,
  Suggestion,
} from "./api.js";
import { el } from "./dom.js";

export const CONSTRAINT_KINDS = [
  "LINEAR_CONSTRAINT",
  "SUM_CONSTRAINT",
  "UPPER_BOUND",
  "LOWER_BOUND",
  "RATIO_CONSTRAINT",
  "XBY_CONSTRAINT",
  "XY_CONSTRAINT",
];

export const PATCH_FIELDS = [
  "limit",
  "operator",
  "const_dir",
  "obj_dir",
  "obj_name",
] as const;

export type PatchField = (typeof PATCH_FIELDS)[number];

/** Parser messages name the offending tag; route it to the matching input. */
const TAG_TO_FIELD: Record<string, PatchField> = {
  LIMIT: "limit",
  OPERATOR: "operator",
  CONST_DIR: "const_dir",
  OBJ_DIR: "obj_dir",
  OBJ_NAME: "obj_name",
};

export function fieldForTag(tag: string | undefined): PatchField | null {
  if (!tag) return null;
  return TAG_TO_FIELD[tag] ?? null;
}

export interface CardHandlers {
  accept(index: number): void;
  reject(index: number): void;
  retype(index: number, kind: string): void;
  editFields(index: number, fields: Partial<Record<PatchField, string>>): void;
  editIr(index: number, ir: string): void;
}

export interface EditError {
  message: string;
  field: PatchField | null;
}

export interface CardOptions {
  active: boolean;
  editError?: EditError;
  handlers: CardHandlers;
}

/** Every cell renders the service's number verbatim. */
export function renderCanonicalRow(row: CanonicalRowPreview): HTMLElement {
  const head = el("tr", {});
  for (const name of row.variables) head.append(el("th", {}, name));
  head.append(el("th", {}, "rhs"));
  const body = el("tr", {});
  for (const value of row.coefficients) {
    body.append(el("td", { class: "coefficient" }, String(value)));
  }
  body.append(el("td", { class: "rhs" }, String(row.rhs)));
  return el("table", { class: "canonical-row" }, head, body);
}

function renderEditForm(
  index: number,
  options: CardOptions,
): HTMLElement {
  const form = el("section", { class: "edit-form" });
  const error = options.editError;
  for (const field of PATCH_FIELDS) {
    const input = el("input", {
      name: field,
      placeholder: field.replace("_", " "),
    });
    const wrap = el("label", { class: "edit-field", "data-field": field },
      el("span", { class: "field-name" }, field.replace("_", " ")),
      input,
    );
    if (error && error.field === field) {
      wrap.append(el("div", { class: "field-error" }, error.message));
    }
    form.append(wrap);
  }
  const applyFields = el("button", { class: "apply-fields", type: "button" },
    "Apply fields");
  applyFields.addEventListener("click", () => {
    const fields: Partial<Record<PatchField, string>> = {};
    for (const field of PATCH_FIELDS) {
      const input = form.querySelector<HTMLInputElement>(
        `input[name="${field}"]`,
      );
      if (input && input.value.trim()) fields[field] = input.value.trim();
    }
    options.handlers.editFields(index, fields);
  });
  form.append(applyFields);

  const irBox = el("textarea", { class: "edit-ir", rows: "4" });
  const applyIr = el("button", { class: "apply-ir", type: "button" },
    "Replace declaration");
  applyIr.addEventListener("click", () => {
    options.handlers.editIr(index, irBox.value);
  });
  form.append(irBox, applyIr);

  if (error && error.field === null) {
    form.append(el("div", { class: "form-error" }, error.message));
  }
  return form;
}

function renderControls(index: number, options: CardOptions): HTMLElement {
  const controls = el("section", { class: "controls" });
  const accept = el("button", { class: "accept", type: "button" }, "Accept");
  accept.addEventListener("click", () => options.handlers.accept(index));
  const reject = el("button", { class: "reject", type: "button" }, "Reject");
  reject.addEventListener("click", () => options.handlers.reject(index));

  const retype = el("select", { class: "retype" });
  retype.append(el("option", { value: "" }, "retype to..."));
  for (const kind of CONSTRAINT_KINDS) {
    retype.append(el("option", { value: kind }, kind));
  }
  retype.addEventListener("change", () => {
    if (retype.value) options.handlers.retype(index, retype.value);
  });

  controls.append(accept, reject, retype);
  controls.append(renderEditForm(index, options));
  return controls;
}

export function renderCard(
  item: Suggestion,
  options: CardOptions,
): HTMLElement {
  const failed = isFailure(item);
  const status = failed ? "failed" : item.status;
  // suggested and edited cards still await a verdict; only a verdict locks
  const locked =
    !failed && item.status !== "suggested" && item.status !== "edited";
  const card = el("article", {
    class: ["card", options.active ? "active" : "", locked ? "locked" : ""]
      .filter(Boolean)
      .join(" "),
    "data-index": String(item.index),
  });
  card.append(
    el("header", {},
      el("span", { class: "card-index" }, `#${item.index}`),
      el("span", { class: "status-badge" }, status),
    ),
  );
  if (item.source_text) {
    card.append(el("p", { class: "source" }, item.source_text));
  }
  if (failed) {
    card.append(
      el("div", { class: "suggestion-error" }, item.error.message),
    );
  } else {
    if (item.rendered) {
      card.append(el("div", { class: "rendered" }, item.rendered));
    }
    if (item.canonical_row) {
      card.append(renderCanonicalRow(item.canonical_row));
    }
  }
  if (options.active && !locked) {
    card.append(renderControls(item.index, options));
  }
  return card;
}
