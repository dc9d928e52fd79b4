import { el } from "../dom.js";
import { seconds } from "../format.js";
import type { ProfileDiffPayload, StackRow } from "../types.js";

const STATUS_LABEL = {
  both: "both",
  only_a: "only in from-config",
  only_b: "only in to-config",
} as const;

function stackList(title: string, rows: StackRow[]): HTMLElement | null {
  if (rows.length === 0) {
    return null;
  }
  const list = el("ul", `stacks ${title}`);
  for (const row of rows) {
    const item = el("li", "stack");
    item.append(
      el("span", "frames", row.stack.join(" ← ")),
      el("span", "time-a", seconds(row.time_a)),
      el("span", "time-b", seconds(row.time_b)),
    );
    list.append(item);
  }
  return list;
}

/** Per-function time comparison of two runs with back-trace details;
 *  methods flagged by the option-hotspot analysis carry a marker badge. */
export function renderProfileDiff(payload: ProfileDiffPayload): HTMLElement {
  const root = el("section", "panel profile-diff");
  const heading = el("h2");
  heading.append(
    el("span", undefined, `${payload.from} (`),
    el("span", "total-a", seconds(payload.total_a)),
    el("span", undefined, ` s) vs ${payload.to} (`),
    el("span", "total-b", seconds(payload.total_b)),
    el("span", undefined, " s)"),
  );
  root.append(heading);

  for (const entry of payload.entries) {
    const row = el("div", `entry status-${entry.status}`);
    if (entry.is_option_hotspot) {
      row.append(el("span", "hotspot-badge", "option hotspot"));
    }
    row.append(
      el("span", "function", entry.function),
      el("span", "time-a", seconds(entry.time_a)),
      el("span", "time-b", seconds(entry.time_b)),
      el("span", "delta", seconds(entry.delta)),
      el("span", "status-badge", STATUS_LABEL[entry.status]),
    );
    for (const [title, rows] of [
      ["shared", entry.stack_diff.shared],
      ["only-a", entry.stack_diff.only_a],
      ["only-b", entry.stack_diff.only_b],
    ] as const) {
      const list = stackList(title, rows);
      if (list) {
        row.append(list);
      }
    }
    root.append(row);
  }
  return root;
}
