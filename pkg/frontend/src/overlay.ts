/** Description overlay: the problem text with entity spans marked and,
 * after an infeasible solve, the conflicting source sentences flagged.
 */

import { EntitySpan } from "./api.js";
import { el } from "./dom.js";

interface Range {
  start: number;
  end: number;
}

/** Locate each conflict sentence inside the description. */
export function conflictRanges(
  description: string,
  sentences: string[],
): Range[] {
  const ranges: Range[] = [];
  for (const sentence of new Set(sentences)) {
    const at = description.indexOf(sentence);
    if (at < 0) continue;
    ranges.push({ start: at, end: at + sentence.length });
  }
  ranges.sort((a, b) => a.start - b.start);
  return ranges;
}

function renderSpans(
  target: HTMLElement,
  description: string,
  entities: EntitySpan[],
  from: number,
  to: number,
): void {
  let cursor = from;
  for (const span of entities) {
    if (span.end <= from || span.start >= to) continue;
    const start = Math.max(span.start, from);
    const end = Math.min(span.end, to);
    if (start > cursor) target.append(description.slice(cursor, start));
    target.append(
      el(
        "mark",
        { class: "entity", "data-label": span.label },
        description.slice(start, end),
      ),
    );
    cursor = end;
  }
  if (cursor < to) target.append(description.slice(cursor, to));
}

export function renderOverlay(
  description: string,
  entities: EntitySpan[],
  conflictSentences: string[] = [],
): HTMLElement {
  const root = el("div", { class: "overlay" });
  if (!description) return root;
  const spans = [...entities].sort((a, b) => a.start - b.start);
  const conflicts = conflictRanges(description, conflictSentences);
  let cursor = 0;
  for (const range of conflicts) {
    if (range.start > cursor) {
      renderSpans(root, description, spans, cursor, range.start);
    }
    const marked = el("mark", { class: "conflict" });
    renderSpans(marked, description, spans, range.start, range.end);
    root.append(marked);
    cursor = range.end;
  }
  if (cursor < description.length) {
    renderSpans(root, description, spans, cursor, description.length);
  }
  return root;
}
