/** Payload types of the coactnet explorer HTTP API. */

export interface DatasetSummary {
  post_count: number;
  user_count: number;
  posts_with_transcript: number;
  posts_with_frames: number;
  posts_with_music_id: number;
  time_range: [number, number];
  duplicate_post_ids: number;
  malformed_lines: number;
}

export interface LayerStats {
  node_count: number;
  edge_count: number;
  component_count: number;
  giant_component_pct: number;
  diameter: number;
  avg_clustering: number;
  transitivity: number;
  density: number;
}

export interface FilterJson {
  variant: string;
  value: number | null;
  label: string;
}

export interface LayerInfo {
  kind: string;
  stats: LayerStats;
  default_filter: FilterJson;
  evidence_complete: boolean;
}

export interface SweepRow extends LayerStats {
  filter: string;
  snapshot_id: string;
  top_component_sizes: number[];
  viable: boolean;
}

export interface SweepReport {
  rows: SweepRow[];
  node_jaccard: Record<string, number>;
}

export interface SnapshotInfo {
  snapshot_id: string;
  kind: string;
  filter: FilterJson;
  stats: LayerStats;
}

export interface ComponentSummary {
  index: number;
  size: number;
  members: string[];
  usernames: string[];
}

export interface ComponentPage {
  total: number;
  offset: number;
  components: ComponentSummary[];
}

export interface EdgeJson {
  user_a: string;
  user_b: string;
  weight: number;
  min_delta_t: number;
}

export interface EvidencePair {
  user_a: string;
  user_b: string;
  post_a: string;
  post_b: string;
  delta_t: number;
  score: number | null;
}

export interface ComponentDetail {
  index: number;
  size: number;
  members: string[];
  usernames: string[];
  edges: EdgeJson[];
  evidence_total: number;
  evidence_offset: number;
  evidence: EvidencePair[];
}

export interface OverlapRow {
  source_layer: string;
  target_layer: string;
  node_overlap: number;
  edge_overlap: number;
}

export interface OverlapPayload {
  snapshots: Record<string, string>;
  rows: OverlapRow[];
}
