/** Minimal typings for the d3 surface this app uses (layout math only;
 * rendering is plain SVG strings, so none of the selection API appears). */

declare module "d3" {
  export interface SimulationNode {
    id: string;
    x: number;
    y: number;
    [key: string]: unknown;
  }

  export interface Force {
    strength(value: number): Force;
    distance(value: number): Force;
    id(accessor: (d: any) => string): Force;
  }

  export interface Simulation {
    force(name: string, force: Force): Simulation;
    stop(): Simulation;
    tick(iterations?: number): Simulation;
  }

  export function forceSimulation(nodes: any[]): Simulation;
  export function forceLink(links: any[]): Force;
  export function forceManyBody(): Force;
  export function forceCenter(x: number, y: number): Force;

  export interface ChordSubgroup {
    index: number;
    startAngle: number;
    endAngle: number;
    value: number;
  }

  export interface ChordLink {
    source: ChordSubgroup;
    target: ChordSubgroup;
  }

  export interface Chords extends Array<ChordLink> {
    groups: ChordSubgroup[];
  }

  export interface ChordLayout {
    padAngle(angle: number): ChordLayout;
    (matrix: number[][]): Chords;
  }

  export function chord(): ChordLayout;

  export interface ArcGenerator {
    innerRadius(r: number): ArcGenerator;
    outerRadius(r: number): ArcGenerator;
    (d: { startAngle: number; endAngle: number }): string;
  }

  export function arc(): ArcGenerator;

  export interface RibbonGenerator {
    radius(r: number): RibbonGenerator;
    (d: ChordLink): string;
  }

  export function ribbon(): RibbonGenerator;

  export const schemeTableau10: readonly string[];
}
