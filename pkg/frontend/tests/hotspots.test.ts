import { describe, expect, it } from "vitest";

import { renderHotspots } from "../src/panels/hotspots.js";
import type { OptionHotspotsPayload } from "../src/types.js";
import { assertNumbersComeFromPayload, loadFixture } from "./helpers.js";

const { raw, data } = loadFixture<OptionHotspotsPayload>("option-hotspots");

describe("option hotspots panel", () => {
  it("keeps the API's |delta|-descending order", () => {
    const panel = renderHotspots(data);
    const names = [...panel.querySelectorAll("tr.hotspot .function")].map(
      (n) => n.textContent,
    );
    expect(names).toEqual(data.entries.map((e) => e.function));
    expect(names[0]).toBe("cursor_put");
  });

  it("renders every delta byte-equal to the payload field", () => {
    const panel = renderHotspots(data);
    const expected =
      data.entries.length +
      data.entries.reduce((n, e) => n + e.terms.length, 0);
    expect(assertNumbersComeFromPayload(panel, ".delta", raw)).toBe(expected);
  });

  it("shows the contributing terms under each function", () => {
    const panel = renderHotspots(data);
    const first = panel.querySelector("tr.term .term-label");
    expect(first?.textContent).toBe("Duplicates=true * Transactions=true");
  });

  it("shows an explicit empty state", () => {
    const panel = renderHotspots({ ...data, entries: [] });
    expect(panel.querySelector(".empty-state")?.textContent).toBe(
      "no option hotspots",
    );
  });
});
