/** Single-page explorer: filter workbench, component browser, chord view.
 *
 * All view state lives in the URL hash so every screen is a deep link;
 * the page renders purely from (state, fetched data).
 */

import { ApiClient, ApiError } from "./api.js";
import { compareSnapshots, usersOfComponents } from "./compare.js";
import { CANONICAL_FILTERS, filterLabel, validateFilter } from "./filters.js";
import { layoutComponent, renderGraphSvg } from "./graph.js";
import { buildChordMatrix } from "./overlap.js";
import { renderChordSvg } from "./chord.js";
import { stateFromLocation, stateToHash, type ViewState } from "./state.js";
import type { ComponentPage, LayerInfo, SnapshotInfo } from "./types.js";

const EVIDENCE_PAGE = 50;

function esc(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

function fmt(value: number): string {
  return Number.isInteger(value) ? String(value) : value.toFixed(4);
}

function statsTable(stats: Record<string, number>): string {
  const rows = Object.entries(stats)
    .map(([k, v]) => `<tr><th>${esc(k)}</th><td>${fmt(v)}</td></tr>`)
    .join("");
  return `<table class="stats">${rows}</table>`;
}

export class ExplorerApp {
  private readonly api: ApiClient;
  private readonly root: HTMLElement;
  private state: ViewState = { view: "workbench" };
  private layers: LayerInfo[] = [];
  private readonly snapshots = new Map<string, SnapshotInfo>();

  constructor(root: HTMLElement, api: ApiClient) {
    this.root = root;
    this.api = api;
  }

  async start(): Promise<void> {
    this.layers = await this.api.layers();
    window.addEventListener("hashchange", () => {
      this.state = stateFromLocation(location.hash, location.search);
      void this.render();
    });
    this.state = stateFromLocation(location.hash, location.search);
    if (!this.state.layer && this.layers.length > 0) {
      this.state.layer = this.layers[0].kind;
    }
    await this.render();
  }

  private navigate(next: ViewState): void {
    this.state = next;
    history.replaceState(null, "", stateToHash(next));
    void this.render();
  }

  private async render(): Promise<void> {
    try {
      this.root.innerHTML = this.navHtml();
      const panel = document.createElement("main");
      this.root.appendChild(panel);
      if (this.state.view === "components" && this.state.snapshot) {
        await this.renderComponents(panel);
      } else if (this.state.view === "chord") {
        await this.renderChord(panel);
      } else {
        await this.renderWorkbench(panel);
      }
    } catch (err) {
      this.showError(err);
    }
  }

  private navHtml(): string {
    const link = (view: ViewState["view"], label: string) => {
      const active = this.state.view === view ? " class=\"active\"" : "";
      return `<a href="${stateToHash({ ...this.state, view })}"${active}>${label}</a>`;
    };
    return `<nav>${link("workbench", "Filter workbench")} ${link(
      "components",
      "Components",
    )} ${link("chord", "Layer overlap")}</nav><div id="error"></div>`;
  }

  private showError(err: unknown): void {
    const box = this.root.querySelector("#error");
    const message =
      err instanceof ApiError ? `${err.status}: ${err.detail}` : String(err);
    if (box) box.innerHTML = `<p class="error">${esc(message)}</p>`;
  }

  private async renderWorkbench(panel: HTMLElement): Promise<void> {
    const kind = this.state.layer ?? this.layers[0]?.kind;
    if (!kind) {
      panel.innerHTML = "<p>No layers built.</p>";
      return;
    }
    const layer = this.layers.find((l) => l.kind === kind);
    const options = this.layers
      .map(
        (l) =>
          `<option value="${esc(l.kind)}"${l.kind === kind ? " selected" : ""}>` +
          `${esc(l.kind)} (${l.stats.edge_count} edges)</option>`,
      )
      .join("");
    const buttons = CANONICAL_FILTERS.map(
      (f) =>
        `<button class="canonical" data-variant="${f.variant}" data-value="${f.value ?? ""}">` +
        `${esc(f.label)}</button>`,
    ).join(" ");
    panel.innerHTML = `
      <section class="workbench">
        <label>Layer <select id="layer-select">${options}</select></label>
        ${layer ? statsTable(layer.stats as unknown as Record<string, number>) : ""}
        <div class="candidates">${buttons}</div>
        <form id="custom-filter">
          <select name="variant">
            <option value="frequency">frequency</option>
            <option value="frequency_above_average">frequency_above_average</option>
            <option value="temporal">temporal</option>
            <option value="none">none</option>
          </select>
          <input name="value" type="number" placeholder="value"/>
          <button type="submit">Apply</button>
          <span id="filter-problem" class="error"></span>
        </form>
        <div id="snapshot-panel"></div>
        <div id="sweep-panel"></div>
        <div id="compare-panel"></div>
      </section>`;

    const select = panel.querySelector<HTMLSelectElement>("#layer-select")!;
    select.addEventListener("change", () => {
      this.navigate({ view: "workbench", layer: select.value });
    });
    for (const button of panel.querySelectorAll<HTMLButtonElement>("button.canonical")) {
      button.addEventListener("click", () => {
        const value = button.dataset.value === "" ? null : Number(button.dataset.value);
        void this.applyFilter(kind, button.dataset.variant!, value);
      });
    }
    const form = panel.querySelector<HTMLFormElement>("#custom-filter")!;
    form.addEventListener("submit", (event) => {
      event.preventDefault();
      const data = new FormData(form);
      const variant = String(data.get("variant"));
      const raw = String(data.get("value") ?? "").trim();
      const value = raw === "" ? null : Number(raw);
      const problem = validateFilter(variant, value);
      const problemBox = form.querySelector("#filter-problem")!;
      problemBox.textContent = problem ?? "";
      if (!problem) void this.applyFilter(kind, variant, value);
    });

    if (this.state.snapshot) {
      await this.showSnapshot(panel, this.state.snapshot);
    }
    await this.showSweep(panel, kind);
    if (this.state.snapshot && this.state.compareSnapshot) {
      await this.showComparison(panel, this.state.snapshot, this.state.compareSnapshot);
    }
  }

  private async applyFilter(kind: string, variant: string, value: number | null): Promise<void> {
    try {
      const snap = await this.api.applyFilter(kind, { variant, value });
      this.snapshots.set(snap.snapshot_id, snap);
      const previous = this.state.snapshot;
      this.navigate({
        view: "workbench",
        layer: kind,
        variant,
        value,
        snapshot: snap.snapshot_id,
        // keep the previous snapshot around for side-by-side comparison
        compareSnapshot: previous && previous !== snap.snapshot_id ? previous : undefined,
      });
    } catch (err) {
      this.showError(err);
    }
  }

  private async showSnapshot(panel: HTMLElement, snapshotId: string): Promise<void> {
    const box = panel.querySelector("#snapshot-panel");
    if (!box) return;
    const snap = this.snapshots.get(snapshotId);
    if (!snap) {
      box.innerHTML =
        `<p>Snapshot <code>${esc(snapshotId)}</code> (stats refresh after applying ` +
        `a filter in this session).</p>` +
        `<p><a href="${stateToHash({ view: "components", snapshot: snapshotId })}">` +
        `browse components</a></p>`;
      return;
    }
    box.innerHTML =
      `<h3>Snapshot ${esc(snap.snapshot_id)} — ${esc(snap.filter.label)}</h3>` +
      statsTable(snap.stats as unknown as Record<string, number>) +
      `<p><a href="${stateToHash({ view: "components", snapshot: snap.snapshot_id })}">` +
      `browse components</a></p>`;
  }

  private async showSweep(panel: HTMLElement, kind: string): Promise<void> {
    const box = panel.querySelector("#sweep-panel");
    if (!box) return;
    try {
      const report = await this.api.sweep(kind);
      const header =
        "<tr><th>filter</th><th>nodes</th><th>edges</th><th>components</th>" +
        "<th>giant %</th><th>viable</th></tr>";
      const rows = report.rows
        .map(
          (r) =>
            `<tr><td>${esc(r.filter)}</td><td>${r.node_count}</td><td>${r.edge_count}</td>` +
            `<td>${r.component_count}</td><td>${r.giant_component_pct.toFixed(1)}</td>` +
            `<td>${r.viable ? "yes" : "no"}</td></tr>`,
        )
        .join("");
      box.innerHTML = `<h3>Filter sweep</h3><table class="sweep">${header}${rows}</table>`;
    } catch (err) {
      if (err instanceof ApiError && err.status === 409) {
        box.innerHTML = `<p class="error">${esc(err.detail)}</p>`;
      } else {
        throw err;
      }
    }
  }

  private async showComparison(panel: HTMLElement, left: string, right: string): Promise<void> {
    const box = panel.querySelector("#compare-panel");
    if (!box) return;
    const [pageLeft, pageRight] = await Promise.all([
      this.api.components(left, { limit: 1000 }),
      this.api.components(right, { limit: 1000 }),
    ]);
    const summary = compareSnapshots(
      { snapshotId: left, users: usersOfComponents(pageLeft.components) },
      { snapshotId: right, users: usersOfComponents(pageRight.components) },
    );
    box.innerHTML =
      `<h3>Snapshot comparison</h3><p>${esc(left)} vs ${esc(right)}: ` +
      `${summary.sharedUsers} shared accounts, Jaccard ${summary.jaccard.toFixed(3)} ` +
      `(${summary.leftUsers} vs ${summary.rightUsers} accounts)</p>`;
  }

  private async renderComponents(panel: HTMLElement): Promise<void> {
    const snapshotId = this.state.snapshot!;
    const page: ComponentPage = await this.api.components(snapshotId, { limit: 50 });
    if (page.total === 0) {
      panel.innerHTML = "<p class=\"empty\">This snapshot has no components.</p>";
      return;
    }
    const rows = page.components
      .map(
        (c) =>
          `<li><a href="${stateToHash({
            view: "components",
            snapshot: snapshotId,
            component: c.index,
          })}">#${c.index} — ${c.size} accounts</a> ` +
          `<span class="names">${esc(c.usernames.slice(0, 5).join(", "))}${
            c.size > 5 ? ", …" : ""
          }</span></li>`,
      )
      .join("");
    panel.innerHTML = `
      <section class="components">
        <h2>Components of ${esc(snapshotId)} (${page.total})</h2>
        <ol class="component-list">${rows}</ol>
        <div id="component-detail"></div>
      </section>`;
    if (this.state.component !== undefined) {
      await this.renderComponentDetail(panel, snapshotId, this.state.component);
    }
  }

  private async renderComponentDetail(
    panel: HTMLElement,
    snapshotId: string,
    index: number,
  ): Promise<void> {
    const box = panel.querySelector("#component-detail")!;
    const offset = this.state.evidenceOffset ?? 0;
    const detail = await this.api.componentDetail(snapshotId, index, {
      evidenceOffset: offset,
      evidenceLimit: EVIDENCE_PAGE,
    });
    const layout = layoutComponent(detail.members, detail.usernames, detail.edges);
    const evidenceRows = detail.evidence
      .map(
        (p) =>
          `<tr><td>${esc(p.post_a)}</td><td>${esc(p.post_b)}</td>` +
          `<td>${p.score ?? ""}</td><td>${p.delta_t}</td></tr>`,
      )
      .join("");
    const prev =
      offset > 0
        ? `<a href="${stateToHash({
            ...this.state,
            evidenceOffset: Math.max(0, offset - EVIDENCE_PAGE),
          })}">previous</a>`
        : "";
    const next =
      offset + EVIDENCE_PAGE < detail.evidence_total
        ? `<a href="${stateToHash({ ...this.state, evidenceOffset: offset + EVIDENCE_PAGE })}">` +
          "next</a>"
        : "";
    box.innerHTML =
      `<h3>Component #${index} — ${detail.size} accounts</h3>` +
      `<p class="names">${detail.usernames.map(esc).join(", ")}</p>` +
      renderGraphSvg(layout) +
      `<h4>Evidence (${detail.evidence_total} post pairs)</h4>` +
      `<table class="evidence"><tr><th>post a</th><th>post b</th><th>score</th>` +
      `<th>Δt (s)</th></tr>${evidenceRows}</table><p>${prev} ${next}</p>`;
  }

  private async renderChord(panel: HTMLElement): Promise<void> {
    const ids = this.state.overlapSnapshots ?? [];
    if (ids.length < 2) {
      panel.innerHTML =
        "<p>Select at least two snapshots (apply a filter per layer in the workbench, " +
        "then open the overlap view with <code>#view=chord&overlap=id1,id2</code>).</p>";
      return;
    }
    const payload = await this.api.overlap(ids);
    const nodeChord = renderChordSvg(buildChordMatrix(payload.rows, "node_overlap"));
    const edgeChord = renderChordSvg(buildChordMatrix(payload.rows, "edge_overlap"));
    panel.innerHTML =
      `<section class="chord"><h2>Cross-layer overlap</h2>` +
      `<figure><figcaption>Shared accounts</figcaption>${nodeChord.svg}</figure>` +
      `<figure><figcaption>Shared edges</figcaption>${edgeChord.svg}</figure></section>`;
  }
}

export function mount(rootId = "app", baseUrl = ""): ExplorerApp {
  const root = document.getElementById(rootId);
  if (!root) throw new Error(`no #${rootId} element`);
  const app = new ExplorerApp(root, new ApiClient(baseUrl || location.origin));
  void app.start();
  return app;
}
