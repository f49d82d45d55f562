/** Chord diagram rendering for cross-layer overlap. */

import { arc, chord, ribbon, schemeTableau10 } from "d3";

import type { ChordData } from "./overlap.js";

export interface ChordRender {
  svg: string;
  /** Arc size per layer, as laid out by the chord generator. */
  groupTotals: Record<string, number>;
}

function escapeXml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

export function renderChordSvg(data: ChordData, size = 480): ChordRender {
  const outer = size / 2 - 60;
  const inner = outer - 14;
  const layout = chord().padAngle(0.04)(data.matrix);
  const arcGen = arc().innerRadius(inner).outerRadius(outer) as (d: any) => string;
  const ribbonGen = ribbon().radius(inner) as unknown as (d: any) => string;

  const groupTotals: Record<string, number> = {};
  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" viewBox="${-size / 2} ${-size / 2} ${size} ${size}" ` +
      `class="overlap-chord">`,
  );
  for (const group of layout.groups) {
    const kind = data.kinds[group.index];
    groupTotals[kind] = group.value;
    const color = schemeTableau10[group.index % schemeTableau10.length];
    const path = arcGen({ startAngle: group.startAngle, endAngle: group.endAngle });
    parts.push(`<path class="chord-group" d="${path}" fill="${color}"/>`);
    const mid = (group.startAngle + group.endAngle) / 2 - Math.PI / 2;
    const lx = Math.cos(mid) * (outer + 12);
    const ly = Math.sin(mid) * (outer + 12);
    const anchor = Math.cos(mid) >= 0 ? "start" : "end";
    parts.push(
      `<text x="${lx.toFixed(1)}" y="${ly.toFixed(1)}" text-anchor="${anchor}" ` +
        `class="chord-label">${escapeXml(kind)} (${group.value})</text>`,
    );
  }
  for (const link of layout) {
    if (link.source.value === 0) continue;
    const color = schemeTableau10[link.source.index % schemeTableau10.length];
    parts.push(
      `<path class="chord-ribbon" d="${ribbonGen(link)}" fill="${color}" fill-opacity="0.6"/>`,
    );
  }
  parts.push("</svg>");
  return { svg: parts.join(""), groupTotals };
}
