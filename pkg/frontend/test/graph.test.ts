import { describe, expect, it } from "vitest";

import { layoutComponent, renderGraphSvg } from "../src/graph.js";
import type { ComponentDetail, EdgeJson } from "../src/types.js";
import { fixture, fixtureNames } from "./helpers.js";

const detailName = fixtureNames().find((n) => n.startsWith("component_detail_"))!;
const detail = fixture<ComponentDetail>(detailName);

describe("layoutComponent", () => {
  it("positions every member inside finite coordinates", () => {
    const layout = layoutComponent(detail.members, detail.usernames, detail.edges);
    expect(layout.nodes.length).toBe(detail.size);
    expect(layout.sampled).toBe(false);
    for (const node of layout.nodes) {
      expect(Number.isFinite(node.x)).toBe(true);
      expect(Number.isFinite(node.y)).toBe(true);
    }
    expect(layout.links.length).toBe(detail.edges.length);
  });

  it("is deterministic", () => {
    const a = layoutComponent(detail.members, detail.usernames, detail.edges);
    const b = layoutComponent(detail.members, detail.usernames, detail.edges);
    expect(a).toEqual(b);
  });

  it("carries degrees and username labels", () => {
    const layout = layoutComponent(detail.members, detail.usernames, detail.edges);
    const byId = new Map(layout.nodes.map((n) => [n.id, n]));
    for (const edge of detail.edges) {
      expect(byId.get(edge.user_a)!.degree).toBeGreaterThan(0);
    }
    expect(byId.get(detail.members[0])!.label).toBe(detail.usernames[0]);
  });

  it("samples oversized components down to the cap and flags it", () => {
    const members = Array.from({ length: 600 }, (_, i) => `u${String(i).padStart(3, "0")}`);
    const usernames = members.map((m) => `name_${m}`);
    // a star around u000 plus a chain, so degrees differ
    const edges: EdgeJson[] = [];
    for (let i = 1; i < 600; i++) {
      edges.push({ user_a: "u000", user_b: members[i], weight: 1, min_delta_t: 0 });
    }
    const layout = layoutComponent(members, usernames, edges, { maxNodes: 500 });
    expect(layout.sampled).toBe(true);
    expect(layout.nodes.length).toBe(500);
    expect(layout.totalNodes).toBe(600);
    // the hub has the highest degree and must survive sampling
    expect(layout.nodes.some((n) => n.id === "u000")).toBe(true);
    // induced links only reference kept nodes
    const keptIds = new Set(layout.nodes.map((n) => n.id));
    for (const link of layout.links) {
      expect(keptIds.has(link.source)).toBe(true);
      expect(keptIds.has(link.target)).toBe(true);
    }
  });
});

describe("renderGraphSvg", () => {
  it("renders one circle per node and one line per link", () => {
    const layout = layoutComponent(detail.members, detail.usernames, detail.edges);
    const svg = renderGraphSvg(layout);
    expect((svg.match(/<circle /g) ?? []).length).toBe(layout.nodes.length);
    expect((svg.match(/<line /g) ?? []).length).toBe(layout.links.length);
    expect(svg).not.toContain("sampling-notice");
  });

  it("includes a sampling notice for truncated components", () => {
    const members = Array.from({ length: 12 }, (_, i) => `u${i}`);
    const layout = layoutComponent(members, members, [], { maxNodes: 5 });
    const svg = renderGraphSvg(layout);
    expect(svg).toContain("sampling-notice");
    expect(svg).toContain("showing 5 of 12 accounts");
  });

  it("escapes markup in usernames", () => {
    const layout = layoutComponent(["u1"], ['<b>"evil"</b>'], []);
    const svg = renderGraphSvg(layout);
    expect(svg).not.toContain("<b>");
    expect(svg).toContain("&lt;b&gt;");
  });
});
