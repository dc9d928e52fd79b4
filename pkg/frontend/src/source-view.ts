import { el } from "./dom.js";
import type { SourcePayload } from "./types.js";

/** Source text with highlight spans wrapped in <mark> elements.
 *
 *  The API reports spans as byte offsets into the UTF-8 program text, so the
 *  text is sliced on the byte level and decoded per segment. */
export function renderSource(payload: SourcePayload): HTMLElement {
  const root = el("section", "source-view");
  root.append(el("h3", undefined, payload.file));

  const bytes = new TextEncoder().encode(payload.text);
  const decoder = new TextDecoder();
  const pre = el("pre", "source-text");

  const spans = [...payload.highlights].sort((a, b) => a.start - b.start);
  let cursor = 0;
  for (const span of spans) {
    if (span.start < cursor) {
      continue; // nested within the previous highlight; already shown
    }
    if (span.start > cursor) {
      pre.append(decoder.decode(bytes.slice(cursor, span.start)));
    }
    const mark = el("mark", "highlight");
    mark.dataset.nodeId = String(span.node_id);
    mark.textContent = decoder.decode(bytes.slice(span.start, span.end));
    pre.append(mark);
    cursor = span.end;
  }
  if (cursor < bytes.length) {
    pre.append(decoder.decode(bytes.slice(cursor)));
  }

  root.append(pre);
  return root;
}
