import { readFileSync, readdirSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";

import type { FetchLike } from "../src/api.js";

const FIXTURE_DIR = join(dirname(fileURLToPath(import.meta.url)), "fixtures");

export function fixture<T>(name: string): T {
  return JSON.parse(readFileSync(join(FIXTURE_DIR, name), "utf-8")) as T;
}

export function fixtureNames(): string[] {
  return readdirSync(FIXTURE_DIR);
}

export interface RecordedCall {
  url: string;
  method: string;
  body?: unknown;
}

export interface Route {
  method: string;
  path: string;
  status?: number;
  payload: unknown;
  /** optional artificial latency in ms, to exercise in-flight dedup */
  delayMs?: number;
}

/** A fetch stub that replays recorded service responses. */
export function fakeFetch(routes: Route[], calls: RecordedCall[] = []): FetchLike {
  return async (url: string, init?: RequestInit) => {
    const method = init?.method ?? "GET";
    const path = url.replace(/^https?:\/\/[^/]+/, "");
    calls.push({
      url: path,
      method,
      body: init?.body ? JSON.parse(String(init.body)) : undefined,
    });
    const route = routes.find((r) => r.method === method && r.path === path);
    if (!route) {
      return new Response(JSON.stringify({ detail: `no route ${method} ${path}` }), {
        status: 404,
        headers: { "content-type": "application/json" },
      });
    }
    if (route.delayMs) {
      await new Promise((resolve) => setTimeout(resolve, route.delayMs));
    }
    return new Response(JSON.stringify(route.payload), {
      status: route.status ?? 200,
      headers: { "content-type": "application/json" },
    });
  };
}
