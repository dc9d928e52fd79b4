// Payload shapes of the workbench HTTP API. The UI never computes analysis
// values; everything rendered comes from these fields.

export type OptionValue = boolean | string;
export type Config = Record<string, OptionValue>;

export interface OptionInfo {
  name: string;
  values: OptionValue[];
  default: OptionValue;
}

export interface ConfigsPayload {
  generation: number;
  base: string;
  configurations: Record<string, Config>;
}

export interface ChangedOption {
  option: string;
  from: OptionValue;
  to: OptionValue;
}

export interface InfluenceRow {
  options: string[];
  delta: number;
}

export interface InfluencingOptionsPayload {
  schema_version: number;
  from_config: Config;
  to_config: Config;
  changed: ChangedOption[];
  influences: InfluenceRow[];
  unexplained_changes: string[];
  from: string;
  to: string;
}

export interface HotspotTerm {
  factors: [string, OptionValue][];
  delta: number;
}

export interface HotspotEntry {
  function: string;
  delta: number;
  terms: HotspotTerm[];
}

export interface OptionHotspotsPayload {
  schema_version: number;
  from_config: Config;
  to_config: Config;
  min_delta: number;
  entries: HotspotEntry[];
  omitted_delta: number;
  from: string;
  to: string;
}

export interface StackRow {
  stack: string[];
  time_a: number;
  time_b: number;
}

export interface StackDiff {
  shared: StackRow[];
  only_a: StackRow[];
  only_b: StackRow[];
}

export type EntryStatus = "both" | "only_a" | "only_b";

export interface ProfileDiffEntry {
  function: string;
  time_a: number;
  time_b: number;
  self_a: number;
  self_b: number;
  delta: number;
  status: EntryStatus;
  is_option_hotspot: boolean;
  stack_diff: StackDiff;
}

export interface ProfileDiffPayload {
  schema_version: number;
  total_a: number;
  total_b: number;
  entries: ProfileDiffEntry[];
  from: string;
  to: string;
}

export type MethodRole = "source" | "target" | "intermediate";

export interface MethodNode {
  function: string;
  role: MethodRole;
}

export interface MethodEdge {
  from: string;
  to: string;
}

export interface HighlightSpan {
  start: number;
  end: number;
  node_id: number;
}

export interface CauseEffectPayload {
  schema_version: number;
  chop_id: string;
  sources: number[];
  targets: number[];
  nodes: number[];
  method_graph: { nodes: MethodNode[]; edges: MethodEdge[] };
  highlights: Record<string, HighlightSpan[]>;
  warnings: string[];
  from: string;
  to: string;
  options: string[];
  hotspots: string[];
}

export interface SourcePayload {
  file: string;
  text: string;
  highlights: HighlightSpan[];
}
