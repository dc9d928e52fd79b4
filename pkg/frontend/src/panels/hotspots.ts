import { el } from "../dom.js";
import { optionValue, seconds } from "../format.js";
import type { OptionHotspotsPayload } from "../types.js";

/** Option-hotspot table: one row per function, ordered by the API
 *  (|delta| descending), with the contributing terms underneath. */
export function renderHotspots(payload: OptionHotspotsPayload): HTMLElement {
  const root = el("section", "panel hotspots");
  root.append(el("h2", undefined, `${payload.from} vs ${payload.to}`));

  if (payload.entries.length === 0) {
    root.append(el("p", "empty-state", "no option hotspots"));
    return root;
  }

  const table = el("table", "hotspot-table");
  for (const entry of payload.entries) {
    const row = el("tr", "hotspot");
    row.append(
      el("td", "function", entry.function),
      el("td", "delta", seconds(entry.delta)),
      el("td", "unit", "s"),
    );
    table.append(row);

    for (const term of entry.terms) {
      const termRow = el("tr", "term");
      const label = term.factors
        .map(([option, value]) => `${option}=${optionValue(value)}`)
        .join(" * ");
      termRow.append(
        el("td", "term-label", label),
        el("td", "delta", seconds(term.delta)),
        el("td", "unit", "s"),
      );
      table.append(termRow);
    }
  }
  root.append(table);

  if (payload.omitted_delta !== 0) {
    const note = el("p", "omitted");
    note.append(
      el("span", undefined, "below threshold: "),
      el("span", "delta", seconds(payload.omitted_delta)),
      el("span", "unit", " s"),
    );
    root.append(note);
  }
  return root;
}
