/** View state serialized into the URL query string.
 *
 * Everything needed to reproduce a view lives here, so any explorer URL
 * is a deep link: layer and filter for the workbench, snapshot id and
 * component index for the browser, snapshot ids for the chord view and
 * an optional second snapshot for side-by-side comparison.
 */

export type ViewName = "workbench" | "components" | "chord";

export interface ViewState {
  view: ViewName;
  layer?: string;
  variant?: string;
  value?: number | null;
  snapshot?: string;
  compareSnapshot?: string;
  component?: number;
  evidenceOffset?: number;
  overlapSnapshots?: string[];
}

const VIEWS: readonly ViewName[] = ["workbench", "components", "chord"];

export function encodeState(state: ViewState): string {
  const params = new URLSearchParams();
  params.set("view", state.view);
  if (state.layer !== undefined) params.set("layer", state.layer);
  if (state.variant !== undefined) params.set("variant", state.variant);
  if (state.value !== undefined && state.value !== null) {
    params.set("value", String(state.value));
  }
  if (state.snapshot !== undefined) params.set("snapshot", state.snapshot);
  if (state.compareSnapshot !== undefined) params.set("compare", state.compareSnapshot);
  if (state.component !== undefined) params.set("component", String(state.component));
  if (state.evidenceOffset !== undefined && state.evidenceOffset > 0) {
    params.set("evidence_offset", String(state.evidenceOffset));
  }
  if (state.overlapSnapshots !== undefined && state.overlapSnapshots.length > 0) {
    params.set("overlap", state.overlapSnapshots.join(","));
  }
  return params.toString();
}

function intParam(params: URLSearchParams, name: string, min: number): number | undefined {
  const raw = params.get(name);
  if (raw === null) return undefined;
  const value = Number(raw);
  if (!Number.isInteger(value) || value < min) return undefined;
  return value;
}

export function decodeState(query: string): ViewState {
  const params = new URLSearchParams(query.replace(/^[?#]/, ""));
  const rawView = params.get("view");
  const view: ViewName = (VIEWS as readonly string[]).includes(rawView ?? "")
    ? (rawView as ViewName)
    : "workbench";
  const state: ViewState = { view };
  const layer = params.get("layer");
  if (layer) state.layer = layer;
  const variant = params.get("variant");
  if (variant) state.variant = variant;
  const value = intParam(params, "value", 1);
  if (value !== undefined) state.value = value;
  const snapshot = params.get("snapshot");
  if (snapshot) state.snapshot = snapshot;
  const compare = params.get("compare");
  if (compare) state.compareSnapshot = compare;
  const component = intParam(params, "component", 0);
  if (component !== undefined) state.component = component;
  const evidenceOffset = intParam(params, "evidence_offset", 1);
  if (evidenceOffset !== undefined) state.evidenceOffset = evidenceOffset;
  const overlap = params.get("overlap");
  if (overlap) {
    const ids = overlap.split(",").filter((s) => s.length > 0);
    if (ids.length > 0) state.overlapSnapshots = ids;
  }
  return state;
}

/** Canonical deep link (hash fragment) for a state. */
export function stateToHash(state: ViewState): string {
  return "#" + encodeState(state);
}

export function stateFromLocation(hash: string, search: string): ViewState {
  // hash state wins; search is accepted so pasted ?view=... links work too
  const fragment = hash.replace(/^#/, "");
  return decodeState(fragment.length > 0 ? fragment : search);
}
