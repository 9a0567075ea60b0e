/** Application bootstrap: wire the view model to the page regions. */

import { ApiClient } from "./api";
import { renderDetail, renderHistory, renderPosterStrip, renderScene, showToast } from "./dom";
import { ViewModel } from "./viewmodel";
import type { RuntimeConfig } from "./types";

async function loadConfig(): Promise<RuntimeConfig> {
  const response = await fetch("config.json");
  if (!response.ok) {
    throw new Error(`cannot load config.json: HTTP ${response.status}`);
  }
  return (await response.json()) as RuntimeConfig;
}

function byId<T extends HTMLElement>(id: string): T {
  const el = document.getElementById(id);
  if (!el) {
    throw new Error(`missing element #${id}`);
  }
  return el as T;
}

export async function bootstrap(): Promise<ViewModel> {
  const config = await loadConfig();
  const params = new URLSearchParams(window.location.search);
  const userId = Number(params.get("user") ?? "1");
  const seedParam = params.get("seed");

  const panel = byId<HTMLElement>("panel") as unknown as SVGSVGElement;
  const detailRegion = byId<HTMLElement>("detail");
  const strip = byId<HTMLElement>("recommended");
  const historyStrip = byId<HTMLElement>("history");
  const toasts = byId<HTMLElement>("toasts");
  const status = byId<HTMLElement>("status");

  const api = new ApiClient(config.serviceBaseUrl);
  const vm = new ViewModel(api, config, {
    onScene: (scene) => {
      renderScene(panel, scene);
      const focused =
        scene.focusedEventIndex !== null && vm.story
          ? vm.story.events[scene.focusedEventIndex].movie_id
          : null;
      if (vm.story) {
        renderPosterStrip(strip, vm.story.events, config.assetPath, focused, (movieId) =>
          void vm.focusMovie(movieId),
        );
      }
    },
    onStory: (story) => {
      status.textContent =
        `dimension ${story.dimension} · ${story.structure.replaceAll("_", " ")}`;
    },
    onSession: (summary) => {
      byId<HTMLInputElement>("slider-f").value = String(vm.f);
      byId<HTMLInputElement>("slider-t").value = String(vm.t);
      byId<HTMLElement>("session-label").textContent =
        `user ${summary.user_id} · ${summary.stories_told} stories`;
    },
    onDetail: (detail) => renderDetail(detailRegion, detail, config.assetPath),
    onHistory: (history) =>
      renderHistory(historyStrip, history.rated, config.assetPath, (movieId) =>
        void vm.focusMovie(movieId),
      ),
    onToast: (message) => showToast(toasts, message),
    onConnection: (state) => {
      status.dataset.connection = state;
      if (state === "retrying") {
        status.textContent = "service unreachable, retrying…";
      }
    },
  });

  byId<HTMLButtonElement>("btn-play").addEventListener("click", () => vm.play());
  byId<HTMLButtonElement>("btn-pause").addEventListener("click", () => vm.pause());
  byId<HTMLButtonElement>("btn-replay").addEventListener("click", () => vm.replay());
  byId<HTMLButtonElement>("btn-skip").addEventListener("click", () => vm.skip());
  byId<HTMLButtonElement>("btn-more").addEventListener("click", () => void vm.moreStories());

  const sliderF = byId<HTMLInputElement>("slider-f");
  const sliderT = byId<HTMLInputElement>("slider-t");
  const pushSliders = () =>
    void vm.setPreferences(Number(sliderF.value), Number(sliderT.value));
  sliderF.addEventListener("change", pushSliders);
  sliderT.addEventListener("change", pushSliders);

  byId<HTMLSelectElement>("speed").addEventListener("change", (event) => {
    const value = Number((event.target as HTMLSelectElement).value);
    config.stepDurationMs = value;
    if (vm.timeline) {
      vm.timeline.stepDurationMs = value;
    }
  });

  byId<HTMLButtonElement>("btn-thumb-up").addEventListener("click", () => {
    const movieId = focusedMovie(vm);
    if (movieId !== null) {
      void vm.thumb(movieId, "up");
    }
  });
  byId<HTMLButtonElement>("btn-thumb-down").addEventListener("click", () => {
    const movieId = focusedMovie(vm);
    if (movieId !== null) {
      void vm.thumb(movieId, "down");
    }
  });

  panel.addEventListener("mouseover", (event) => {
    const target = event.target as Element;
    const movie = target.getAttribute("data-movie");
    if (movie) {
      void vm.hoverMovie(Number(movie));
    }
  });

  await vm.start(userId, seedParam === null ? undefined : Number(seedParam));
  return vm;
}

function focusedMovie(vm: ViewModel): number | null {
  if (!vm.story) {
    return null;
  }
  const index = vm.currentCue?.event_index ?? 0;
  return vm.story.events[index]?.movie_id ?? null;
}

if (typeof document !== "undefined" && document.getElementById("panel")) {
  bootstrap().catch((error) => {
    console.error(error);
    const status = document.getElementById("status");
    if (status) {
      status.textContent = String(error);
    }
  });
}
