import type { ApiClient } from "./api.js";
import { el } from "./dom.js";
import { renderChain } from "./panels/chain.js";
import { renderConfigDiff } from "./panels/config-diff.js";
import { renderHotspots } from "./panels/hotspots.js";
import { renderProfileDiff } from "./panels/profile-diff.js";
import { renderSource } from "./source-view.js";
import { PANELS, Panel, ViewState } from "./state.js";
import type { CauseEffectPayload } from "./types.js";

const PANEL_TITLES: Record<Panel, string> = {
  "config-diff": "Configuration diff",
  hotspots: "Option hotspots",
  "profile-diff": "Profile diff",
  chain: "Cause-effect chain",
};

export class App {
  private state!: ViewState;
  private nav!: HTMLElement;
  private selectors!: HTMLElement;
  private content!: HTMLElement;
  private lastChain: CauseEffectPayload | null = null;
  private fetchToken = 0;

  constructor(
    private api: ApiClient,
    private root: HTMLElement,
  ) {}

  async init(): Promise<void> {
    const configs = await this.api.configs();
    const names = Object.keys(configs.configurations).sort();
    this.state = new ViewState(names, configs.base);
    this.state.generation = configs.generation;

    this.selectors = el("div", "config-selectors");
    this.selectors.append(
      this.configSelect("from", names, this.state.from, (v) =>
        this.state.setFrom(v),
      ),
      this.configSelect("to", names, this.state.to, (v) =>
        this.state.setTo(v),
      ),
    );

    this.nav = el("nav", "panel-nav");
    for (const panel of PANELS) {
      const button = el("button", `nav-${panel}`, PANEL_TITLES[panel]);
      button.addEventListener("click", () => {
        this.state.setPanel(panel);
        void this.render();
      });
      this.nav.append(button);
    }

    this.content = el("main", "panel-content");
    this.root.replaceChildren(this.selectors, this.nav, this.content);
    await this.render();
  }

  private configSelect(
    label: string,
    names: string[],
    selected: string,
    onChange: (value: string) => void,
  ): HTMLElement {
    const wrapper = el("label", `select-${label}`, `${label}: `);
    const select = el("select");
    for (const name of names) {
      const option = el("option", undefined, name);
      option.value = name;
      option.selected = name === selected;
      select.append(option);
    }
    select.addEventListener("change", () => {
      onChange(select.value);
      void this.render();
    });
    wrapper.append(select);
    return wrapper;
  }

  async render(): Promise<void> {
    const token = ++this.fetchToken;
    const { from, to, activePanel } = this.state;
    try {
      const element = await this.panelElement(activePanel, from, to);
      if (token !== this.fetchToken) {
        return; // a newer fetch superseded this one
      }
      this.content.replaceChildren(element);
    } catch (error) {
      if (token !== this.fetchToken) {
        return;
      }
      const message = error instanceof Error ? error.message : String(error);
      this.content.replaceChildren(el("p", "error", message));
    }
  }

  private async panelElement(
    panel: Panel,
    from: string,
    to: string,
  ): Promise<HTMLElement> {
    switch (panel) {
      case "config-diff":
        return renderConfigDiff(await this.api.influencingOptions(from, to));
      case "hotspots":
        return renderHotspots(await this.api.optionHotspots(from, to));
      case "profile-diff":
        return renderProfileDiff(await this.api.profileDiff(from, to));
      case "chain": {
        const payload = await this.api.causeEffect(from, to);
        this.lastChain = payload;
        return renderChain(payload, (name) => void this.onNodeClick(name));
      }
    }
  }

  /** A node click issues exactly one /api/source request and shows the
   *  returned spans next to the graph. */
  private async onNodeClick(functionName: string): Promise<void> {
    if (!this.lastChain) {
      return;
    }
    this.state.selectGraphNode(functionName);
    const files = Object.keys(this.lastChain.highlights);
    if (files.length === 0) {
      return;
    }
    const payload = await this.api.source(files[0], this.lastChain.chop_id);
    const existing = this.content.querySelector(".source-view");
    if (existing) {
      existing.remove();
    }
    if (this.state.sourceVisible) {
      this.content.append(renderSource(payload));
    }
  }
}
