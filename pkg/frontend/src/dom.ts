/** Thin DOM materialization of scenes and interface regions. */

import { placeholderPoster, posterUrl } from "./posters";
import type { Scene, ScenePoster } from "./scene";
import type { ApiStory, HistoryEntry, MovieDetail } from "./types";

const SVG_NS = "http://www.w3.org/2000/svg";

function svgEl(name: string, attrs: Record<string, string | number>): SVGElement {
  const el = document.createElementNS(SVG_NS, name);
  for (const [key, value] of Object.entries(attrs)) {
    el.setAttribute(key, String(value));
  }
  return el;
}

/** Replace the panel's contents with one scene. */
export function renderScene(panel: SVGSVGElement, scene: Scene): void {
  panel.setAttribute("viewBox", `0 0 ${scene.width} ${scene.height}`);
  panel.replaceChildren();

  for (const band of scene.bands) {
    panel.appendChild(
      svgEl("rect", {
        x: band.x0,
        y: 0,
        width: Math.max(band.x1 - band.x0, 1),
        height: scene.height,
        fill: band.color,
        opacity: band.zone === "familiar" ? 0.18 : 0.28,
        "data-zone": band.zone,
      }),
    );
  }

  panel.appendChild(
    svgEl("line", {
      x1: 0,
      y1: scene.axisY,
      x2: scene.width,
      y2: scene.axisY,
      stroke: "#555",
      "stroke-width": 1,
      "data-role": "axis",
    }),
  );

  for (const link of scene.links) {
    panel.appendChild(
      svgEl("line", {
        x1: link.x0,
        y1: link.y0,
        x2: link.x1,
        y2: link.y1,
        stroke: link.color,
        "stroke-width": 2,
        "data-link": link.movieId,
      }),
    );
  }

  for (const node of scene.nodes) {
    const circle = svgEl("circle", {
      cx: node.x,
      cy: node.y,
      r: node.radius,
      fill: node.color,
      "data-movie": node.movieId,
      "data-order": node.order,
    });
    if (node.focused) {
      circle.setAttribute("stroke", "green");
      circle.setAttribute("stroke-width", "3");
      circle.setAttribute("data-focused", "true");
    }
    panel.appendChild(circle);
  }

  for (const anchor of scene.anchors) {
    const marker = svgEl("rect", {
      x: anchor.x - 8,
      y: scene.axisY + 6,
      width: 16,
      height: 24,
      fill: anchor.highlighted ? "#ffd92f" : "#888",
      "data-anchor": anchor.movieId,
    });
    panel.appendChild(marker);
  }
}

export function renderPosterStrip(
  container: HTMLElement,
  posters: ScenePoster[] | ApiStory["events"],
  assetPath: string,
  focusedMovieId: number | null,
  onClick: (movieId: number) => void,
): void {
  container.replaceChildren();
  for (const item of posters) {
    const movieId = "movieId" in item ? item.movieId : item.movie_id;
    const posterKey = "posterKey" in item ? item.posterKey : item.level1.poster_key;
    const title = item.title;
    const tile = document.createElement("figure");
    tile.className = "poster-tile";
    tile.dataset.movie = String(movieId);
    const img = document.createElement("img");
    img.alt = title;
    img.src = posterUrl(assetPath, posterKey);
    img.onerror = () => {
      img.onerror = null;
      img.src = placeholderPoster(posterKey, title);
    };
    const caption = document.createElement("figcaption");
    caption.textContent = title;
    if (movieId === focusedMovieId) {
      tile.classList.add("focused");
    }
    tile.appendChild(img);
    tile.appendChild(caption);
    tile.addEventListener("click", () => onClick(movieId));
    container.appendChild(tile);
  }
}

export function renderDetail(region: HTMLElement, detail: MovieDetail, assetPath: string): void {
  region.replaceChildren();
  const img = document.createElement("img");
  img.className = "detail-poster";
  img.alt = detail.title;
  img.src = posterUrl(assetPath, detail.poster_key);
  img.onerror = () => {
    img.onerror = null;
    img.src = placeholderPoster(detail.poster_key, detail.title);
  };
  const info = document.createElement("dl");
  const rows: Array<[string, string]> = [
    ["Title", detail.title],
    ["Genres", detail.genres.join(", ")],
    ["Your rating", detail.user_rating === null ? "none" : String(detail.user_rating)],
    [
      "Average rating",
      detail.average_rating === null ? "none" : detail.average_rating.toFixed(2),
    ],
    ["Popularity", `${detail.popularity} ratings`],
  ];
  for (const [label, value] of rows) {
    const dt = document.createElement("dt");
    dt.textContent = label;
    const dd = document.createElement("dd");
    dd.textContent = value;
    info.appendChild(dt);
    info.appendChild(dd);
  }
  region.appendChild(img);
  region.appendChild(info);
}

export function renderHistory(
  container: HTMLElement,
  entries: HistoryEntry[],
  assetPath: string,
  onClick: (movieId: number) => void,
): void {
  container.replaceChildren();
  for (const entry of entries) {
    const tile = document.createElement("figure");
    tile.className = "poster-tile history";
    tile.dataset.movie = String(entry.movie_id);
    const img = document.createElement("img");
    img.alt = entry.title;
    img.src = posterUrl(assetPath, entry.poster_key);
    img.onerror = () => {
      img.onerror = null;
      img.src = placeholderPoster(entry.poster_key, entry.title);
    };
    const caption = document.createElement("figcaption");
    caption.textContent = `${entry.title} (${entry.rating}★)`;
    tile.appendChild(img);
    tile.appendChild(caption);
    tile.addEventListener("click", () => onClick(entry.movie_id));
    container.appendChild(tile);
  }
}

export function showToast(container: HTMLElement, message: string): void {
  const toast = document.createElement("div");
  toast.className = "toast";
  toast.textContent = message;
  container.appendChild(toast);
  setTimeout(() => toast.remove(), 4000);
}
