/** Pure scene-graph construction for the visualization panel.
 *
 * A scene is plain data derived from (story, active cue, panel size); the
 * DOM layer only materializes it. All positions and degrees come from
 * service fields — the client computes no recommendation logic.
 */

import type { ApiStory, Cue, StoryEvent } from "./types";

export const ZONE_COLORS: Record<string, string> = {
  like: "green",
  dislike: "orange",
  familiar: "#9ecae1",
};

export const NODE_COLORS: Record<string, string> = {
  like: "green",
  dislike: "orange",
  recommendable: "blue",
  not_recommendable: "black",
  neutral: "gray",
};

export const GENRE_COLORS: Record<string, string> = {
  unknown: "#777777",
  Action: "#e41a1c",
  Adventure: "#ff7f00",
  Animation: "#f781bf",
  "Children's": "#fdbf6f",
  Comedy: "#ffd92f",
  Crime: "#7f3b08",
  Documentary: "#66c2a5",
  Drama: "#377eb8",
  Fantasy: "#b15928",
  "Film-Noir": "#444444",
  Horror: "#1a1a1a",
  Musical: "#c51b7d",
  Mystery: "#5e4fa2",
  Romance: "#e78ac3",
  "Sci-Fi": "#4daf4a",
  Thriller: "#a65628",
  War: "#8da0cb",
  Western: "#d2b48c",
};

export interface SceneBand {
  zone: "like" | "dislike" | "familiar";
  x0: number;
  x1: number;
  color: string;
}

export interface SceneNode {
  movieId: number;
  x: number;
  y: number;
  radius: number;
  color: string;
  focused: boolean;
  title: string;
  order: number;
}

export interface SceneLink {
  movieId: number;
  x0: number;
  y0: number;
  x1: number;
  y1: number;
  color: string;
}

export interface ScenePoster {
  movieId: number;
  posterKey: string;
  title: string;
  x: number;
  highlighted: boolean;
}

export interface Scene {
  width: number;
  height: number;
  level: 1 | 2 | 3;
  focusedEventIndex: number | null;
  axisY: number;
  bands: SceneBand[];
  nodes: SceneNode[];
  links: SceneLink[];
  similarPosters: ScenePoster[];
  anchors: ScenePoster[];
  introTarget: string | null;
}

const MARGIN = 40;
const BASE_RADIUS = 6;

export function projectionToX(
  projection: number,
  extent: [number, number],
  width: number,
): number {
  const [lo, hi] = extent;
  const span = hi - lo || 1;
  return MARGIN + ((projection - lo) / span) * (width - 2 * MARGIN);
}

export function degreeToY(degree: number, height: number): number {
  // degree 1 at the top of the panel, degree 0 on the baseline
  const top = MARGIN / 2;
  const baseline = height - MARGIN;
  return baseline - degree * (baseline - top);
}

function levelOfCue(cue: Cue | null): { level: 1 | 2 | 3; focused: number | null } {
  if (cue === null || cue.set !== 3) {
    return { level: 1, focused: null };
  }
  return { level: cue.level ?? 1, focused: cue.event_index ?? null };
}

function eventColor(event: StoryEvent, level: number): string {
  if (level >= 3) {
    const genre = event.level1.genres[0] ?? "unknown";
    return GENRE_COLORS[genre] ?? GENRE_COLORS.unknown;
  }
  return NODE_COLORS.recommendable;
}

/** Build the visualization scene for one story at one animation cue. */
export function buildScene(
  story: ApiStory,
  cue: Cue | null,
  width: number,
  height: number,
): Scene {
  const layout = story.zones.layout;
  const extent = layout.extent;
  const { level, focused } = levelOfCue(cue);
  const axisY = height - MARGIN;

  const bands: SceneBand[] = [];
  const bandSpecs: Array<["familiar" | "like" | "dislike", [number, number] | null]> = [
    ["familiar", layout.familiar],
    ["like", layout.like],
    ["dislike", layout.dislike],
  ];
  for (const [zone, pair] of bandSpecs) {
    if (pair) {
      bands.push({
        zone,
        x0: projectionToX(pair[0], extent, width),
        x1: projectionToX(pair[1], extent, width),
        color: ZONE_COLORS[zone],
      });
    }
  }

  const nodes: SceneNode[] = story.events.map((event, index) => {
    const x = projectionToX(event.projection, extent, width);
    const y = level >= 2 ? degreeToY(event.level2.degree, height) : axisY;
    return {
      movieId: event.movie_id,
      x,
      y,
      radius: index === focused ? BASE_RADIUS * 1.6 : BASE_RADIUS,
      color: eventColor(event, level),
      focused: index === focused,
      title: event.title,
      order: index,
    };
  });

  const links: SceneLink[] = [];
  const similarPosters: ScenePoster[] = [];
  if (level >= 3 && focused !== null) {
    const event = story.events[focused];
    const from = nodes[focused];
    for (const similar of event.level3.similar_liked) {
      const x = projectionToX(similar.projection, extent, width);
      const genre = similar.genres[0] ?? "unknown";
      const color = GENRE_COLORS[genre] ?? GENRE_COLORS.unknown;
      links.push({ movieId: similar.movie_id, x0: from.x, y0: from.y, x1: x, y1: axisY, color });
      similarPosters.push({
        movieId: similar.movie_id,
        posterKey: similar.poster_key,
        title: similar.title,
        x,
        highlighted: false,
      });
    }
  }

  const anchors: ScenePoster[] = [];
  for (const side of ["left", "right"] as const) {
    const anchor = story.anchors[side];
    if (anchor) {
      anchors.push({
        movieId: anchor.movie_id,
        posterKey: anchor.poster_key,
        title: anchor.title,
        x: projectionToX(anchor.projection, extent, width),
        highlighted: cue?.kind === "anchor" && cue.target === side,
      });
    }
  }

  return {
    width,
    height,
    level,
    focusedEventIndex: focused,
    axisY,
    bands,
    nodes,
    links,
    similarPosters,
    anchors,
    introTarget: cue?.kind === "intro" ? cue.target ?? null : null,
  };
}
