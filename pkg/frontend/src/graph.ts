/** Force-directed layout and SVG rendering for one component subgraph. */

import { forceCenter, forceLink, forceManyBody, forceSimulation } from "d3";

import type { EdgeJson } from "./types.js";

export const MAX_RENDERED_NODES = 500;

export interface LayoutNode {
  id: string;
  label: string;
  degree: number;
  x: number;
  y: number;
}

export interface LayoutLink {
  source: string;
  target: string;
  weight: number;
}

export interface GraphLayout {
  nodes: LayoutNode[];
  links: LayoutLink[];
  sampled: boolean;
  totalNodes: number;
  width: number;
  height: number;
}

export interface LayoutOptions {
  width?: number;
  height?: number;
  maxNodes?: number;
}

/** Lay out a component; oversized components are sampled down to the
 * highest-degree nodes (with their induced edges) and flagged so the UI
 * can show a sampling notice. */
export function layoutComponent(
  members: string[],
  usernames: string[],
  edges: EdgeJson[],
  options: LayoutOptions = {},
): GraphLayout {
  const width = options.width ?? 640;
  const height = options.height ?? 480;
  const maxNodes = options.maxNodes ?? MAX_RENDERED_NODES;

  const degree = new Map<string, number>(members.map((m) => [m, 0]));
  for (const edge of edges) {
    degree.set(edge.user_a, (degree.get(edge.user_a) ?? 0) + 1);
    degree.set(edge.user_b, (degree.get(edge.user_b) ?? 0) + 1);
  }

  const labels = new Map(members.map((m, i) => [m, usernames[i] ?? m]));
  let kept = members;
  let sampled = false;
  if (members.length > maxNodes) {
    // keep the busiest nodes: stable order, degree first then id
    kept = [...members]
      .sort((a, b) => (degree.get(b)! - degree.get(a)!) || (a < b ? -1 : 1))
      .slice(0, maxNodes);
    sampled = true;
  }
  const keptSet = new Set(kept);
  const links: LayoutLink[] = edges
    .filter((e) => keptSet.has(e.user_a) && keptSet.has(e.user_b))
    .map((e) => ({ source: e.user_a, target: e.user_b, weight: e.weight }));

  const simNodes = kept.map((id) => ({ id, x: 0, y: 0 }));
  const simLinks = links.map((l) => ({ source: l.source, target: l.target }));
  const simulation = forceSimulation(simNodes as any)
    .force("charge", forceManyBody().strength(-30))
    .force("link", forceLink(simLinks as any).id((d: any) => d.id).distance(40))
    .force("center", forceCenter(width / 2, height / 2))
    .stop();
  // fixed tick count instead of the async scheduler: deterministic output
  simulation.tick(150);

  const nodes: LayoutNode[] = simNodes.map((n: any) => ({
    id: n.id,
    label: labels.get(n.id) ?? n.id,
    degree: degree.get(n.id) ?? 0,
    x: n.x,
    y: n.y,
  }));
  return { nodes, links, sampled, totalNodes: members.length, width, height };
}

function escapeXml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

export function renderGraphSvg(layout: GraphLayout): string {
  const pos = new Map(layout.nodes.map((n) => [n.id, n]));
  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 ${layout.width} ${layout.height}" ` +
      `class="component-graph">`,
  );
  for (const link of layout.links) {
    const a = pos.get(link.source)!;
    const b = pos.get(link.target)!;
    parts.push(
      `<line x1="${a.x.toFixed(1)}" y1="${a.y.toFixed(1)}" ` +
        `x2="${b.x.toFixed(1)}" y2="${b.y.toFixed(1)}" ` +
        `stroke="#8a8a8a" stroke-width="${Math.min(4, 1 + Math.log1p(link.weight))}"/>`,
    );
  }
  for (const node of layout.nodes) {
    parts.push(
      `<circle cx="${node.x.toFixed(1)}" cy="${node.y.toFixed(1)}" r="5" fill="#2b6cb0">` +
        `<title>${escapeXml(node.label)} (${node.degree})</title></circle>`,
    );
  }
  if (layout.sampled) {
    parts.push(
      `<text x="8" y="16" class="sampling-notice">showing ${layout.nodes.length} ` +
        `of ${layout.totalNodes} accounts (highest degree)</text>`,
    );
  }
  parts.push("</svg>");
  return parts.join("");
}
