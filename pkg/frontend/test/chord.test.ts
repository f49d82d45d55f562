import { describe, expect, it } from "vitest";

import { renderChordSvg } from "../src/chord.js";
import { buildChordMatrix, payloadTotals } from "../src/overlap.js";
import type { OverlapPayload } from "../src/types.js";
import { fixture } from "./helpers.js";

const payload = fixture<OverlapPayload>("overlap.json");

describe("renderChordSvg", () => {
  it("draws one group arc per layer", () => {
    const data = buildChordMatrix(payload.rows, "node_overlap");
    const { svg } = renderChordSvg(data);
    expect((svg.match(/class="chord-group"/g) ?? []).length).toBe(data.kinds.length);
    for (const kind of data.kinds) {
      expect(svg).toContain(kind);
    }
  });

  it("group totals equal the payload totals", () => {
    for (const mode of ["node_overlap", "edge_overlap"] as const) {
      const data = buildChordMatrix(payload.rows, mode);
      const { groupTotals } = renderChordSvg(data);
      expect(groupTotals).toEqual(payloadTotals(payload.rows, mode));
    }
  });

  it("labels arcs with the layer name and its total", () => {
    const data = buildChordMatrix(payload.rows, "node_overlap");
    const totals = payloadTotals(payload.rows, "node_overlap");
    const { svg } = renderChordSvg(data);
    for (const kind of data.kinds) {
      expect(svg).toContain(`${kind} (${totals[kind]})`);
    }
  });
});
