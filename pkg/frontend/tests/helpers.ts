/** Mocked service: replays recorded fixtures and records every call. */

import session from "./fixtures/session.json";
import story from "./fixtures/story.json";
import story2 from "./fixtures/story2.json";
import detail from "./fixtures/detail.json";
import dimension from "./fixtures/dimension.json";
import history from "./fixtures/history.json";

import type { ApiStory } from "../src/types";

export const fixtures = { session, story, story2, detail, dimension, history };

export interface RecordedCall {
  method: string;
  path: string;
  body: unknown;
}

export interface FakeService {
  fetch: typeof fetch;
  calls: RecordedCall[];
  failNext: { status: number; code: string } | null;
  networkDown: boolean;
  storyQueue: unknown[];
}

export function makeFakeService(): FakeService {
  const service: FakeService = {
    calls: [],
    failNext: null,
    networkDown: false,
    storyQueue: [story, story2],
    fetch: undefined as unknown as typeof fetch,
  };

  service.fetch = (async (input: RequestInfo | URL, init?: RequestInit) => {
    const url = String(input);
    const path = url.replace(/^https?:\/\/[^/]+/, "");
    const method = (init?.method ?? "GET").toUpperCase();
    const body = init?.body ? JSON.parse(String(init.body)) : null;
    service.calls.push({ method, path, body });

    if (service.networkDown) {
      throw new TypeError("network down");
    }

    if (service.failNext) {
      const { status, code } = service.failNext;
      service.failNext = null;
      return new Response(
        JSON.stringify({ error: { code, message: "injected failure" } }),
        { status, headers: { "content-type": "application/json" } },
      );
    }

    const respond = (payload: unknown, status = 200) =>
      new Response(JSON.stringify(payload), {
        status,
        headers: { "content-type": "application/json" },
      });

    if (method === "POST" && path === "/sessions") {
      return respond(session, 201);
    }
    if (method === "GET" && /^\/sessions\/[^/]+\/story$/.test(path)) {
      const next = service.storyQueue.shift() ?? story2;
      return respond(next);
    }
    if (method === "POST" && /\/feedback$/.test(path)) {
      return respond({
        movie_id: body.movie_id,
        weight: 2.0,
        group: body.thumb === "down" ? "not_recommendable" : "like",
        session: { ...session, thumbs_up: body.thumb === "up" ? [body.movie_id] : [] },
      });
    }
    if (method === "POST" && /\/preferences$/.test(path)) {
      return respond({ ...session, f: body.f, t: body.t });
    }
    if (method === "GET" && /^\/movies\/\d+/.test(path)) {
      return respond(detail);
    }
    if (method === "GET" && /\/dimension\/\d+$/.test(path)) {
      return respond(dimension);
    }
    if (method === "GET" && /\/history$/.test(path)) {
      return respond(history);
    }
    return respond({ error: { code: "not_found", message: path } }, 404);
  }) as typeof fetch;

  return service;
}

export const fixtureStory = story as unknown as ApiStory;
export const fixtureStory2 = story2 as unknown as ApiStory;
