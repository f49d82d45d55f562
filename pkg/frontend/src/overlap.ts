/** Chord-view data model built from the /overlap payload.
 *
 * The matrix mirrors the payload exactly (symmetric, zero diagonal); no
 * overlap number is recomputed here, so chord totals always equal what
 * the service reported.
 */

import type { OverlapRow } from "./types.js";

export type OverlapMode = "node_overlap" | "edge_overlap";

export interface ChordData {
  kinds: string[];
  matrix: number[][];
}

export function buildChordMatrix(rows: OverlapRow[], mode: OverlapMode): ChordData {
  const kinds = [...new Set(rows.flatMap((r) => [r.source_layer, r.target_layer]))].sort();
  const index = new Map(kinds.map((k, i) => [k, i]));
  const matrix = kinds.map(() => kinds.map(() => 0));
  for (const row of rows) {
    const i = index.get(row.source_layer)!;
    const j = index.get(row.target_layer)!;
    if (i === j) continue; // self rows carry no cross-layer overlap
    matrix[i][j] = row[mode];
    matrix[j][i] = row[mode];
  }
  return { kinds, matrix };
}

/** Per-layer total overlap, i.e. the arc size of each chord group. */
export function chordTotals(data: ChordData): Record<string, number> {
  const totals: Record<string, number> = {};
  data.kinds.forEach((kind, i) => {
    totals[kind] = data.matrix[i].reduce((acc, v) => acc + v, 0);
  });
  return totals;
}

/** The same totals straight from the payload rows, for cross-checking. */
export function payloadTotals(rows: OverlapRow[], mode: OverlapMode): Record<string, number> {
  const totals: Record<string, number> = {};
  for (const row of rows) {
    if (row.source_layer === row.target_layer) continue;
    totals[row.source_layer] = (totals[row.source_layer] ?? 0) + row[mode];
    totals[row.target_layer] = (totals[row.target_layer] ?? 0) + row[mode];
  }
  return totals;
}
