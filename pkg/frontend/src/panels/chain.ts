import { el } from "../dom.js";
import type { CauseEffectPayload, MethodRole } from "../types.js";

export const ROLE_COLORS: Record<MethodRole, string> = {
  source: "#2e8b57", // green
  target: "#b22222", // red
  intermediate: "#8b5a2b", // brown
};

const SVG_NS = "http://www.w3.org/2000/svg";
const NODE_W = 150;
const NODE_H = 34;
const COL_GAP = 70;
const ROW_GAP = 18;

// left-to-right by role; position carries no execution-order meaning
const COLUMN: Record<MethodRole, number> = {
  source: 0,
  intermediate: 1,
  target: 2,
};

interface Placed {
  name: string;
  role: MethodRole;
  x: number;
  y: number;
}

function topologicalWithinColumns(payload: CauseEffectPayload): Placed[] {
  // stable topological order of the whole graph, then stacked per column
  const names = payload.method_graph.nodes.map((n) => n.function);
  const indegree = new Map(names.map((n) => [n, 0]));
  for (const edge of payload.method_graph.edges) {
    indegree.set(edge.to, (indegree.get(edge.to) ?? 0) + 1);
  }
  const order: string[] = [];
  const queue = names.filter((n) => indegree.get(n) === 0).sort();
  while (queue.length > 0) {
    const name = queue.shift()!;
    order.push(name);
    for (const edge of payload.method_graph.edges) {
      if (edge.from !== name) {
        continue;
      }
      const d = (indegree.get(edge.to) ?? 0) - 1;
      indegree.set(edge.to, d);
      if (d === 0) {
        queue.push(edge.to);
        queue.sort();
      }
    }
  }
  for (const name of names) {
    if (!order.includes(name)) {
      order.push(name); // cycles fall back to declaration order
    }
  }

  const roleOf = new Map(
    payload.method_graph.nodes.map((n) => [n.function, n.role]),
  );
  const rows: Record<number, number> = {};
  return order.map((name) => {
    const role = roleOf.get(name)!;
    const col = COLUMN[role];
    const row = rows[col] ?? 0;
    rows[col] = row + 1;
    return {
      name,
      role,
      x: col * (NODE_W + COL_GAP),
      y: row * (NODE_H + ROW_GAP),
    };
  });
}

/** Clickable method-level dependence graph: green sources, red targets,
 *  brown intermediates. `onNodeClick` receives the clicked function name. */
export function renderChain(
  payload: CauseEffectPayload,
  onNodeClick: (functionName: string) => void,
): HTMLElement {
  const root = el("section", "panel chain");
  root.append(el("h2", undefined, `${payload.from} vs ${payload.to}`));

  for (const warning of payload.warnings) {
    root.append(el("p", "warning", warning));
  }
  if (payload.nodes.length === 0) {
    root.append(el("p", "empty-state", "no cause-effect path covered"));
    return root;
  }

  const placed = topologicalWithinColumns(payload);
  const byName = new Map(placed.map((p) => [p.name, p]));
  const width = 3 * NODE_W + 2 * COL_GAP;
  const height = Math.max(...placed.map((p) => p.y)) + NODE_H;

  const svg = document.createElementNS(SVG_NS, "svg");
  svg.setAttribute("class", "method-graph");
  svg.setAttribute("viewBox", `0 0 ${width} ${height}`);

  for (const edge of payload.method_graph.edges) {
    const from = byName.get(edge.from);
    const to = byName.get(edge.to);
    if (!from || !to) {
      continue;
    }
    const line = document.createElementNS(SVG_NS, "line");
    line.setAttribute("class", "edge");
    line.setAttribute("x1", String(from.x + NODE_W));
    line.setAttribute("y1", String(from.y + NODE_H / 2));
    line.setAttribute("x2", String(to.x));
    line.setAttribute("y2", String(to.y + NODE_H / 2));
    line.setAttribute("stroke", "#666");
    svg.append(line);
  }

  for (const node of placed) {
    const group = document.createElementNS(SVG_NS, "g");
    group.setAttribute("class", `node role-${node.role}`);
    group.setAttribute("data-function", node.name);
    group.setAttribute("data-role", node.role);

    const rect = document.createElementNS(SVG_NS, "rect");
    rect.setAttribute("x", String(node.x));
    rect.setAttribute("y", String(node.y));
    rect.setAttribute("width", String(NODE_W));
    rect.setAttribute("height", String(NODE_H));
    rect.setAttribute("rx", "4");
    rect.setAttribute("fill", ROLE_COLORS[node.role]);

    const label = document.createElementNS(SVG_NS, "text");
    label.setAttribute("x", String(node.x + NODE_W / 2));
    label.setAttribute("y", String(node.y + NODE_H / 2 + 4));
    label.setAttribute("text-anchor", "middle");
    label.setAttribute("fill", "#fff");
    label.textContent = node.name;

    group.append(rect, label);
    group.addEventListener("click", () => onNodeClick(node.name));
    svg.append(group);
  }

  root.append(svg);
  return root;
}
