/** Typed client for the explorer HTTP API.
 *
 * The client never computes graph numbers itself; every statistic shown
 * in the UI comes straight from a response body. Identical in-flight
 * requests are deduplicated so a double-clicked filter button or two
 * panels loading the same snapshot issue one HTTP call.
 */

import type {
  ComponentDetail,
  ComponentPage,
  DatasetSummary,
  LayerInfo,
  OverlapPayload,
  SnapshotInfo,
  SweepReport,
} from "./types.js";

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  readonly status: number;
  readonly detail: string;

  constructor(status: number, detail: string) {
    super(`HTTP ${status}: ${detail}`);
    this.name = "ApiError";
    this.status = status;
    this.detail = detail;
  }
}

export interface FilterRequest {
  variant: string;
  value?: number | null;
}

export interface ComponentQuery {
  minSize?: number;
  offset?: number;
  limit?: number;
}

export interface EvidenceQuery {
  evidenceOffset?: number;
  evidenceLimit?: number;
}

export class ApiClient {
  private readonly base: string;
  private readonly fetchFn: FetchLike;
  private readonly inflight = new Map<string, Promise<unknown>>();

  constructor(baseUrl: string, fetchFn?: FetchLike) {
    this.base = baseUrl.replace(/\/+$/, "");
    this.fetchFn = fetchFn ?? ((url, init) => fetch(url, init));
  }

  datasetSummary(): Promise<DatasetSummary> {
    return this.request<DatasetSummary>("GET", "/dataset/summary");
  }

  layers(): Promise<LayerInfo[]> {
    return this.request<LayerInfo[]>("GET", "/layers");
  }

  sweep(kind: string): Promise<SweepReport> {
    return this.request<SweepReport>("GET", `/layers/${encodeURIComponent(kind)}/sweep`);
  }

  applyFilter(kind: string, filter: FilterRequest): Promise<SnapshotInfo> {
    return this.request<SnapshotInfo>(
      "POST",
      `/layers/${encodeURIComponent(kind)}/filter`,
      { variant: filter.variant, value: filter.value ?? null },
    );
  }

  components(snapshotId: string, query: ComponentQuery = {}): Promise<ComponentPage> {
    const params = new URLSearchParams();
    if (query.minSize !== undefined) params.set("min_size", String(query.minSize));
    if (query.offset !== undefined) params.set("offset", String(query.offset));
    if (query.limit !== undefined) params.set("limit", String(query.limit));
    const qs = params.toString();
    return this.request<ComponentPage>(
      "GET",
      `/snapshots/${encodeURIComponent(snapshotId)}/components${qs ? "?" + qs : ""}`,
    );
  }

  componentDetail(
    snapshotId: string,
    index: number,
    query: EvidenceQuery = {},
  ): Promise<ComponentDetail> {
    const params = new URLSearchParams();
    if (query.evidenceOffset !== undefined) {
      params.set("evidence_offset", String(query.evidenceOffset));
    }
    if (query.evidenceLimit !== undefined) {
      params.set("evidence_limit", String(query.evidenceLimit));
    }
    const qs = params.toString();
    return this.request<ComponentDetail>(
      "GET",
      `/snapshots/${encodeURIComponent(snapshotId)}/components/${index}${qs ? "?" + qs : ""}`,
    );
  }

  overlap(snapshotIds: string[]): Promise<OverlapPayload> {
    const params = new URLSearchParams({ snapshots: snapshotIds.join(",") });
    return this.request<OverlapPayload>("GET", `/overlap?${params.toString()}`);
  }

  private request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const key = `${method} ${path} ${body === undefined ? "" : JSON.stringify(body)}`;
    const pending = this.inflight.get(key);
    if (pending) return pending as Promise<T>;
    const promise = this.send<T>(method, path, body).finally(() => {
      this.inflight.delete(key);
    });
    this.inflight.set(key, promise);
    return promise;
  }

  private async send<T>(method: string, path: string, body?: unknown): Promise<T> {
    const init: RequestInit = { method };
    if (body !== undefined) {
      init.headers = { "content-type": "application/json" };
      init.body = JSON.stringify(body);
    }
    const response = await this.fetchFn(this.base + path, init);
    if (!response.ok) {
      let detail = response.statusText;
      try {
        const payload = (await response.json()) as { detail?: unknown };
        if (typeof payload.detail === "string") detail = payload.detail;
      } catch {
        // non-JSON error body: keep the status text
      }
      throw new ApiError(response.status, detail);
    }
    return (await response.json()) as T;
  }
}
