import { el } from "../dom.js";
import { optionValue, seconds } from "../format.js";
import type { InfluencingOptionsPayload } from "../types.js";

/** Configuration diff: changed options highlighted, influencing options
 *  (with their attributed deltas) below, and changed options without any
 *  performance influence in their own group. */
export function renderConfigDiff(payload: InfluencingOptionsPayload): HTMLElement {
  const root = el("section", "panel config-diff");
  root.append(el("h2", undefined, `${payload.from} vs ${payload.to}`));

  if (payload.changed.length === 0) {
    root.append(el("p", "empty-state", "no differences"));
    return root;
  }

  const table = el("table", "changed-options");
  for (const change of payload.changed) {
    const row = el("tr", "changed");
    row.append(
      el("td", "option-name", change.option),
      el("td", "from-value", optionValue(change.from)),
      el("td", "to-value", optionValue(change.to)),
    );
    table.append(row);
  }
  root.append(table);

  const influences = el("ul", "influences");
  for (const row of payload.influences) {
    const item = el("li", "influence");
    item.append(
      el("span", "options", row.options.join(", ")),
      el("span", "delta", seconds(row.delta)),
      el("span", "unit", "s"),
    );
    influences.append(item);
  }
  root.append(influences);

  if (payload.unexplained_changes.length > 0) {
    const group = el("div", "no-influence");
    group.append(el("h3", undefined, "no performance influence"));
    const list = el("ul");
    for (const name of payload.unexplained_changes) {
      list.append(el("li", "option-name", name));
    }
    group.append(list);
    root.append(group);
  }
  return root;
}
