import { beforeEach, describe, expect, it, vi } from "vitest";

import type { ApiClient } from "../src/api.js";
import { App } from "../src/app.js";
import { ViewState } from "../src/state.js";
import type {
  CauseEffectPayload,
  ConfigsPayload,
  InfluencingOptionsPayload,
  OptionHotspotsPayload,
  ProfileDiffPayload,
  SourcePayload,
} from "../src/types.js";
import { loadFixture } from "./helpers.js";

const configs = loadFixture<ConfigsPayload>("configs").data;
const influencing = loadFixture<InfluencingOptionsPayload>(
  "influencing-options",
).data;
const hotspots = loadFixture<OptionHotspotsPayload>("option-hotspots").data;
const profileDiff = loadFixture<ProfileDiffPayload>("profile-diff").data;
const causeEffect = loadFixture<CauseEffectPayload>("cause-effect").data;
const source = loadFixture<SourcePayload>("source").data;

function stubApi() {
  return {
    options: vi.fn(async () => []),
    configs: vi.fn(async () => configs),
    influencingOptions: vi.fn(async () => influencing),
    optionHotspots: vi.fn(async () => hotspots),
    profileDiff: vi.fn(async () => profileDiff),
    causeEffect: vi.fn(async () => causeEffect),
    source: vi.fn(async () => source),
  } as unknown as ApiClient & Record<string, ReturnType<typeof vi.fn>>;
}

async function flush() {
  await new Promise((resolve) => setTimeout(resolve, 0));
}

describe("app wiring", () => {
  let root: HTMLElement;

  beforeEach(() => {
    document.body.innerHTML = '<div id="app"></div>';
    root = document.getElementById("app")!;
  });

  it("starts on the config-diff panel with base as from", async () => {
    const api = stubApi();
    await new App(api, root).init();
    expect(root.querySelector(".config-diff")).not.toBeNull();
    const from = root.querySelector<HTMLSelectElement>(".select-from select");
    expect(from?.value).toBe("default");
    expect(api.influencingOptions).toHaveBeenCalledWith("default", "user");
  });

  it("preserves the from/to selection across panel navigation", async () => {
    const api = stubApi();
    await new App(api, root).init();
    root
      .querySelector<HTMLButtonElement>("button.nav-profile-diff")!
      .click();
    await flush();
    expect(api.profileDiff).toHaveBeenCalledWith("default", "user");
    root.querySelector<HTMLButtonElement>("button.nav-hotspots")!.click();
    await flush();
    expect(api.optionHotspots).toHaveBeenCalledWith("default", "user");
  });

  it("clicking a graph node issues exactly one source request", async () => {
    const api = stubApi();
    await new App(api, root).init();
    root.querySelector<HTMLButtonElement>("button.nav-chain")!.click();
    await flush();
    const node = root.querySelector('g.node[data-function="cursor_put"]');
    expect(node).not.toBeNull();
    node!.dispatchEvent(new MouseEvent("click", { bubbles: true }));
    await flush();
    expect(api.source).toHaveBeenCalledTimes(1);
    expect(api.source).toHaveBeenCalledWith(
      "berkeley_mini.mcf",
      causeEffect.chop_id,
    );
    const marks = root.querySelectorAll(".source-view mark.highlight");
    expect(marks.length).toBeGreaterThan(0);
  });
});

describe("view state invariants", () => {
  it("rejects configurations the API did not return", () => {
    const state = new ViewState(["default", "user"], "default");
    expect(() => state.setTo("nope")).toThrow(/unknown configuration/);
    expect(state.to).toBe("user");
  });

  it("shows the source panel only while a graph node is selected", () => {
    const state = new ViewState(["default", "user"], "default");
    expect(state.sourceVisible).toBe(false);
    expect(() => state.selectGraphNode("main")).toThrow(/chain panel/);
    state.setPanel("chain");
    state.selectGraphNode("main");
    expect(state.sourceVisible).toBe(true);
    state.setPanel("hotspots");
    expect(state.sourceVisible).toBe(false);
  });
});
