/** Solve panel: the service's verdict, rendered verbatim. */

import { SolveResult } from "./api.js";
import { el } from "./dom.js";

export function renderSolve(result: SolveResult): HTMLElement {
  const panel = el("section", { class: `solve-result ${result.status}` });
  if (result.status === "optimal") {
    panel.append(
      el("h3", {},
        `${result.direction} ${result.objective_name}`),
      el("p", { class: "objective-value" },
        String(result.objective_value)),
    );
    const assignment = el("ul", { class: "assignment" });
    for (const name of result.variables) {
      assignment.append(
        el("li", { "data-variable": name },
          `${name} = ${String((result.assignment ?? {})[name])}`),
      );
    }
    panel.append(assignment);
    panel.append(
      el("p", { class: "binding" },
        `binding constraints: ${(result.binding_constraints ?? []).join(", ")}`),
    );
  } else if (result.status === "infeasible") {
    panel.append(
      el("h3", {}, "No feasible point"),
      el("p", {}, "These requirements cannot all hold together:"),
    );
    const list = el("ul", { class: "conflicts" });
    for (const conflict of result.conflicts ?? []) {
      list.append(
        el("li", { "data-declaration": String(conflict.declaration_index) },
          el("span", { class: "conflict-rendered" }, conflict.rendered),
          el("span", { class: "conflict-source" }, conflict.source_text),
        ),
      );
    }
    panel.append(list);
  } else {
    panel.append(
      el("h3", {}, "Unbounded"),
      el("p", { class: "unbounded-note" },
        `The ${result.objective_name || "objective"} can be improved without`
        + " limit; the constraints do not cap it. Add a missing constraint"
        + " and solve again."),
    );
  }
  return panel;
}
