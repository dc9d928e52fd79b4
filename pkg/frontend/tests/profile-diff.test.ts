import { describe, expect, it } from "vitest";

import { renderProfileDiff } from "../src/panels/profile-diff.js";
import type { ProfileDiffPayload } from "../src/types.js";
import { assertNumbersComeFromPayload, loadFixture } from "./helpers.js";

const { raw, data } = loadFixture<ProfileDiffPayload>("profile-diff");

function entryFor(panel: HTMLElement, name: string): Element {
  const entry = [...panel.querySelectorAll(".entry")].find(
    (e) => e.querySelector(".function")?.textContent === name,
  );
  expect(entry).toBeDefined();
  return entry!;
}

describe("profile diff panel", () => {
  it("badges methods present only in the to-configuration", () => {
    const panel = renderProfileDiff(data);
    const fm = entryFor(panel, "file_manager_read");
    expect(fm.classList.contains("status-only_b")).toBe(true);
    expect(fm.querySelector(".status-badge")?.textContent).toBe(
      "only in to-config",
    );
  });

  it("marks option hotspots flagged by the API", () => {
    const panel = renderProfileDiff(data);
    expect(
      entryFor(panel, "cursor_put").querySelector(".hotspot-badge"),
    ).not.toBeNull();
    expect(
      entryFor(panel, "setup").querySelector(".hotspot-badge"),
    ).toBeNull();
  });

  it("renders every time and delta byte-equal to the payload", () => {
    const panel = renderProfileDiff(data);
    for (const selector of [".time-a", ".time-b", ".delta",
                            ".total-a", ".total-b"]) {
      expect(
        assertNumbersComeFromPayload(panel, selector, raw),
      ).toBeGreaterThan(0);
    }
  });

  it("lists back traces per entry", () => {
    const panel = renderProfileDiff(data);
    const fm = entryFor(panel, "file_manager_read");
    const onlyB = fm.querySelector("ul.only-b .frames");
    expect(onlyB?.textContent).toBe(
      "file_manager_read ← open_database ← main",
    );
    expect(fm.querySelector("ul.shared")).toBeNull();
  });
});
