export type Panel = "config-diff" | "hotspots" | "profile-diff" | "chain";

export const PANELS: Panel[] = [
  "config-diff",
  "hotspots",
  "profile-diff",
  "chain",
];

/** UI state with its invariants:
 *  - from/to always reference configurations returned by /api/configs
 *  - a source panel is shown only while a graph node is selected
 *  - switching panels preserves the from/to selection
 */
export class ViewState {
  private fromName: string;
  private toName: string;
  private panel: Panel = "config-diff";
  private selectedNode: string | null = null;
  generation = 0;

  constructor(private configNames: string[], base: string) {
    if (!configNames.includes(base)) {
      throw new Error(`base '${base}' is not a known configuration`);
    }
    this.fromName = base;
    this.toName = configNames.find((n) => n !== base) ?? base;
  }

  get from(): string {
    return this.fromName;
  }

  get to(): string {
    return this.toName;
  }

  get activePanel(): Panel {
    return this.panel;
  }

  get selectedGraphNode(): string | null {
    return this.selectedNode;
  }

  get sourceVisible(): boolean {
    return this.selectedNode !== null;
  }

  setFrom(name: string): void {
    this.assertKnown(name);
    this.fromName = name;
    this.clearSelection();
  }

  setTo(name: string): void {
    this.assertKnown(name);
    this.toName = name;
    this.clearSelection();
  }

  setPanel(panel: Panel): void {
    this.panel = panel;
    if (panel !== "chain") {
      this.clearSelection();
    }
  }

  selectGraphNode(functionName: string): void {
    if (this.panel !== "chain") {
      throw new Error("graph nodes exist only on the chain panel");
    }
    this.selectedNode = functionName;
  }

  clearSelection(): void {
    this.selectedNode = null;
  }

  private assertKnown(name: string): void {
    if (!this.configNames.includes(name)) {
      throw new Error(`unknown configuration '${name}'`);
    }
  }
}
