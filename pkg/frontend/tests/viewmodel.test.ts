import { afterEach, beforeEach, describe, expect, it, vi } from "vitest";

import { ApiClient } from "../src/api";
import { ViewModel, ViewModelCallbacks } from "../src/viewmodel";
import type { RuntimeConfig } from "../src/types";
import { fixtureStory, makeFakeService } from "./helpers";

const CONFIG: RuntimeConfig = {
  serviceBaseUrl: "http://service.test",
  assetPath: "assets/posters",
  stepDurationMs: 1500,
};

function makeViewModel() {
  const service = makeFakeService();
  const api = new ApiClient(CONFIG.serviceBaseUrl, service.fetch);
  const events = {
    scenes: 0,
    stories: 0,
    toasts: [] as string[],
    connection: [] as string[],
  };
  const callbacks: ViewModelCallbacks = {
    onScene: () => {
      events.scenes += 1;
    },
    onStory: () => {
      events.stories += 1;
    },
    onSession: () => {},
    onDetail: () => {},
    onHistory: () => {},
    onToast: (message) => events.toasts.push(message),
    onConnection: (state) => events.connection.push(state),
  };
  const vm = new ViewModel(api, CONFIG, callbacks);
  return { vm, service, events };
}

beforeEach(() => vi.useFakeTimers());
afterEach(() => vi.useRealTimers());

describe("session startup", () => {
  it("creates the session, loads history, and requests the first story", async () => {
    const { vm, service, events } = makeViewModel();
    await vm.start(1, 42);
    const paths = service.calls.map((c) => `${c.method} ${c.path}`);
    expect(paths[0]).toBe("POST /sessions");
    expect(paths).toContain("GET /users/1/history");
    expect(paths.at(-1)).toMatch(/GET \/sessions\/.+\/story/);
    expect(events.stories).toBe(1);
    expect(events.scenes).toBeGreaterThan(0); // playback started
    vm.dispose();
  });
});

describe("the five steering controls", () => {
  it("thumb up posts to the feedback endpoint", async () => {
    const { vm, service } = makeViewModel();
    await vm.start(1);
    service.calls.length = 0;
    await vm.thumb(132, "up");
    expect(service.calls).toHaveLength(1);
    expect(service.calls[0]).toMatchObject({
      method: "POST",
      path: `/sessions/${vm.session!.session_id}/feedback`,
      body: { movie_id: 132, thumb: "up" },
    });
    vm.dispose();
  });

  it("thumb down posts the opposite direction", async () => {
    const { vm, service } = makeViewModel();
    await vm.start(1);
    service.calls.length = 0;
    await vm.thumb(30, "down");
    expect(service.calls[0].body).toEqual({ movie_id: 30, thumb: "down" });
    vm.dispose();
  });

  it("the familiarity slider posts both preference values", async () => {
    const { vm, service } = makeViewModel();
    await vm.start(1);
    service.calls.length = 0;
    await vm.setPreferences(1.0, 0.5);
    expect(service.calls[0]).toMatchObject({
      method: "POST",
      path: `/sessions/${vm.session!.session_id}/preferences`,
      body: { f: 1.0, t: 0.5 },
    });
    vm.dispose();
  });

  it("the typicality slider posts through the same endpoint", async () => {
    const { vm, service } = makeViewModel();
    await vm.start(1);
    service.calls.length = 0;
    await vm.setPreferences(0.5, 0.9);
    expect(service.calls[0].body).toEqual({ f: 0.5, t: 0.9 });
    vm.dispose();
  });

  it("playback controls never touch the service; more-stories does", async () => {
    const { vm, service } = makeViewModel();
    await vm.start(1);
    service.calls.length = 0;
    vm.pause();
    vm.play();
    vm.replay();
    vm.skip();
    vm.stop();
    expect(service.calls).toHaveLength(0);
    await vm.moreStories();
    expect(service.calls).toHaveLength(1);
    expect(service.calls[0].path).toMatch(/\/story$/);
    vm.dispose();
  });

  it("hover requests movie details with the session user", async () => {
    const { vm, service } = makeViewModel();
    await vm.start(1);
    service.calls.length = 0;
    await vm.hoverMovie(132);
    expect(service.calls[0]).toMatchObject({
      method: "GET",
      path: "/movies/132?user=1",
    });
    vm.dispose();
  });
});

describe("optimistic updates and rollback", () => {
  it("rolls thumbs back and toasts when the service rejects", async () => {
    const { vm, service, events } = makeViewModel();
    await vm.start(1);
    const before = [...vm.session!.thumbs_up];
    service.failNext = { status: 404, code: "unknown_movie" };
    await vm.thumb(999, "up");
    expect(events.toasts.some((t) => t.includes("unknown_movie"))).toBe(true);
    expect(vm.session!.thumbs_up).toEqual(before);
    vm.dispose();
  });

  it("queues feedback FIFO", async () => {
    const { vm, service } = makeViewModel();
    await vm.start(1);
    service.calls.length = 0;
    const first = vm.thumb(132, "up");
    const second = vm.thumb(30, "down");
    await Promise.all([first, second]);
    expect(service.calls.map((c) => c.body)).toEqual([
      { movie_id: 132, thumb: "up" },
      { movie_id: 30, thumb: "down" },
    ]);
    vm.dispose();
  });

  it("restores slider values when preferences are rejected", async () => {
    const { vm, service } = makeViewModel();
    await vm.start(1);
    service.failNext = { status: 400, code: "invalid_value" };
    await vm.setPreferences(0.9, 0.9);
    expect(vm.f).toBe(0.5);
    expect(vm.t).toBe(0.5);
    vm.dispose();
  });
});

describe("the automatic storytelling loop", () => {
  it("requests the next story when the timeline finishes", async () => {
    const { vm, service, events } = makeViewModel();
    await vm.start(1);
    expect(events.stories).toBe(1);
    service.calls.length = 0;
    await vi.advanceTimersByTimeAsync(
      CONFIG.stepDurationMs * (fixtureStory.cues.length + 2),
    );
    expect(events.stories).toBe(2);
    expect(service.calls.some((c) => c.path.endsWith("/story"))).toBe(true);
    vm.dispose();
  });

  it("enters a retrying state when the service is unreachable", async () => {
    const { vm, service, events } = makeViewModel();
    await vm.start(1);
    service.networkDown = true;
    await vm.moreStories();
    expect(events.connection.at(-1)).toBe("retrying");
    service.networkDown = false;
    await vi.advanceTimersByTimeAsync(2100);
    expect(events.connection.at(-1)).toBe("ok");
    vm.dispose();
  });
});
