/** Wire types for the storyrec HTTP/JSON API. */

export interface SessionSummary {
  session_id: string;
  user_id: number;
  f: number;
  t: number;
  seed: number;
  thumbs_up: number[];
  thumbs_down: number[];
  weights: Record<string, number>;
  stories_told: number;
}

export interface AnchorInfo {
  movie_id: number;
  title: string;
  poster_key: string;
  projection: number;
  user_rating: number;
}

export interface SimilarLiked {
  movie_id: number;
  title: string;
  poster_key: string;
  projection: number;
  genres: string[];
  distance: number;
}

export interface StoryEvent {
  movie_id: number;
  title: string;
  projection: number;
  degree: number;
  roles: string[];
  zone: string;
  similar_liked: number[];
  level1: {
    movie_id: number;
    title: string;
    poster_key: string;
    projection: number;
    genres: string[];
    roles: string[];
  };
  level2: { degree: number };
  level3: { similar_liked: SimilarLiked[] };
}

export interface LayoutZones {
  extent: [number, number];
  like: [number, number] | null;
  dislike: [number, number] | null;
  overlap: [number, number] | null;
  combined: [number, number] | null;
  familiar: [number, number] | null;
  diverse: Array<[number, number]>;
  typicality_boundary: number;
  like_center: number | null;
}

export interface Cue {
  set: 1 | 2 | 3;
  kind: "intro" | "anchor" | "event_level";
  target?: string;
  event_index?: number;
  level?: 1 | 2 | 3;
  cue_index: number;
  story_id: string;
}

export interface ApiStory {
  dimension: number;
  structure: string;
  starting_rule: string;
  ascending: boolean;
  zone_counts: [number, number];
  zones: {
    traversal: Array<{ name: string; interval: [number, number] }>;
    layout: LayoutZones;
  };
  anchors: { left: AnchorInfo | null; right: AnchorInfo | null };
  events: StoryEvent[];
  seed: number[];
  relaxed: boolean;
  rebalanced: boolean;
  story_id: string;
  cues: Cue[];
}

export interface MovieDetail {
  movie_id: number;
  title: string;
  genres: string[];
  user_rating: number | null;
  average_rating: number | null;
  popularity: number;
  poster_key: string;
}

export interface DimensionNode {
  movie_id: number;
  projection: number;
  group: string;
  degree: number | null;
}

export interface DimensionView {
  dimension: number;
  zones: LayoutZones;
  colors: Record<string, string>;
  groups: Record<string, number>;
  nodes: DimensionNode[];
}

export interface HistoryEntry {
  movie_id: number;
  title: string;
  rating: number;
  timestamp: number;
  poster_key: string;
}

export interface UserHistory {
  user_id: number;
  rated: HistoryEntry[];
}

export interface FeedbackResult {
  movie_id: number;
  weight: number;
  group: string;
  session: SessionSummary;
}

export interface RuntimeConfig {
  serviceBaseUrl: string;
  assetPath: string;
  stepDurationMs: number;
}
