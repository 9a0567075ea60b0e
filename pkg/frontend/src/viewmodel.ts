/** UI-facing state machine: one session, one playing story, five controls.
 *
 * Renders by emitting pure scenes through callbacks; owns the single
 * in-flight /story request, the FIFO feedback queue, and optimistic
 * updates with rollback on a rejected call.
 */

import { ApiClient, ApiError } from "./api";
import { buildScene, Scene } from "./scene";
import { Timeline } from "./timeline";
import type {
  ApiStory,
  Cue,
  MovieDetail,
  RuntimeConfig,
  SessionSummary,
  UserHistory,
} from "./types";

export interface ViewModelCallbacks {
  onScene: (scene: Scene) => void;
  onStory: (story: ApiStory) => void;
  onSession: (summary: SessionSummary) => void;
  onDetail: (detail: MovieDetail) => void;
  onHistory: (history: UserHistory) => void;
  onToast: (message: string) => void;
  onConnection: (state: "ok" | "retrying") => void;
}

const PANEL_WIDTH = 900;
const PANEL_HEIGHT = 360;
const RETRY_MS = 2000;

export class ViewModel {
  session: SessionSummary | null = null;
  story: ApiStory | null = null;
  timeline: Timeline | null = null;
  currentCue: Cue | null = null;
  f = 0.5;
  t = 0.5;

  private storyInFlight = false;
  private feedbackQueue: Promise<unknown> = Promise.resolve();
  private retryTimer: ReturnType<typeof setTimeout> | null = null;

  constructor(
    private readonly api: ApiClient,
    private readonly config: RuntimeConfig,
    private readonly callbacks: ViewModelCallbacks,
  ) {}

  async start(userId: number, seed?: number): Promise<void> {
    this.session = await this.api.createSession(userId, seed);
    this.f = this.session.f;
    this.t = this.session.t;
    this.callbacks.onSession(this.session);
    const history = await this.api.userHistory(userId).catch(() => null);
    if (history) {
      this.callbacks.onHistory(history);
    }
    await this.requestStory();
  }

  /** Fetch and start playing the next story; at most one request in flight. */
  async requestStory(): Promise<void> {
    if (this.storyInFlight || this.session === null) {
      return;
    }
    this.storyInFlight = true;
    try {
      const story = await this.api.nextStory(this.session.session_id);
      this.callbacks.onConnection("ok");
      this.installStory(story);
    } catch (error) {
      if (error instanceof ApiError) {
        this.callbacks.onToast(`${error.code}: ${error.message}`);
        return;
      }
      // transport failure: pause and retry
      this.callbacks.onConnection("retrying");
      this.retryTimer = setTimeout(() => {
        this.retryTimer = null;
        void this.requestStory();
      }, RETRY_MS);
    } finally {
      this.storyInFlight = false;
    }
  }

  private installStory(story: ApiStory): void {
    this.story = story;
    this.callbacks.onStory(story);
    this.timeline = new Timeline(story.cues, this.config.stepDurationMs, {
      onCue: (cue) => {
        this.currentCue = cue;
        this.emitScene();
      },
      // No user input: the loop continues with a fresh story automatically.
      onFinished: () => void this.requestStory(),
    });
    this.timeline.play();
  }

  private emitScene(): void {
    if (this.story) {
      this.callbacks.onScene(
        buildScene(this.story, this.currentCue, PANEL_WIDTH, PANEL_HEIGHT),
      );
    }
  }

  // -- the five steering controls --------------------------------------

  thumb(movieId: number, direction: "up" | "down"): Promise<void> {
    if (this.session === null) {
      return Promise.resolve();
    }
    const summary = this.session;
    const previousUp = [...summary.thumbs_up];
    const previousDown = [...summary.thumbs_down];
    // optimistic: reflect the click immediately
    summary.thumbs_up = previousUp.filter((id) => id !== movieId);
    summary.thumbs_down = previousDown.filter((id) => id !== movieId);
    (direction === "up" ? summary.thumbs_up : summary.thumbs_down).push(movieId);
    this.callbacks.onSession(summary);

    const send = async () => {
      try {
        const result = await this.api.sendThumb(summary.session_id, movieId, direction);
        this.session = result.session;
        this.callbacks.onSession(result.session);
      } catch (error) {
        summary.thumbs_up = previousUp;
        summary.thumbs_down = previousDown;
        this.callbacks.onSession(summary);
        this.callbacks.onToast(
          error instanceof ApiError ? `${error.code}: ${error.message}` : String(error),
        );
      }
    };
    this.feedbackQueue = this.feedbackQueue.then(send);
    return this.feedbackQueue as Promise<void>;
  }

  setPreferences(f: number, t: number): Promise<void> {
    if (this.session === null) {
      return Promise.resolve();
    }
    const summary = this.session;
    const previous = { f: this.f, t: this.t };
    this.f = f;
    this.t = t;
    const send = async () => {
      try {
        const updated = await this.api.sendPreferences(summary.session_id, f, t);
        this.session = updated;
        this.callbacks.onSession(updated);
      } catch (error) {
        this.f = previous.f;
        this.t = previous.t;
        this.callbacks.onToast(
          error instanceof ApiError ? `${error.code}: ${error.message}` : String(error),
        );
      }
    };
    this.feedbackQueue = this.feedbackQueue.then(send);
    return this.feedbackQueue as Promise<void>;
  }

  async hoverMovie(movieId: number): Promise<MovieDetail | null> {
    try {
      const detail = await this.api.movieDetails(movieId, this.session?.user_id);
      this.callbacks.onDetail(detail);
      return detail;
    } catch {
      return null;
    }
  }

  /** Poster click: focus the enlarged-poster region on that movie. */
  focusMovie(movieId: number): Promise<MovieDetail | null> {
    return this.hoverMovie(movieId);
  }

  // -- playback controls ------------------------------------------------

  play(): void {
    this.timeline?.play();
  }

  pause(): void {
    this.timeline?.pause();
  }

  replay(): void {
    this.timeline?.replay();
  }

  skip(): void {
    this.timeline?.skip();
  }

  stop(): void {
    this.timeline?.stop();
  }

  moreStories(): Promise<void> {
    this.timeline?.pause();
    return this.requestStory();
  }

  dispose(): void {
    this.timeline?.pause();
    if (this.retryTimer !== null) {
      clearTimeout(this.retryTimer);
    }
  }
}
