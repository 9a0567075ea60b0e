/** Cue-list playback with user-interruptible stepping.
 *
 * The server's cue list is already ordered (interface intro, anchors, then
 * per-event level 1-2-3); this player only walks it. Skip jumps to the
 * next animation set, replay restarts the current event's reveal, and all
 * controls are honored mid-flight.
 */

import type { Cue } from "./types";

export interface TimelineCallbacks {
  onCue: (cue: Cue) => void;
  onFinished: () => void;
}

export class Timeline {
  private index = 0;
  private timer: ReturnType<typeof setTimeout> | null = null;
  private _playing = false;

  constructor(
    private readonly cues: Cue[],
    public stepDurationMs: number,
    private readonly callbacks: TimelineCallbacks,
  ) {}

  get playing(): boolean {
    return this._playing;
  }

  get finished(): boolean {
    return this.index >= this.cues.length;
  }

  get currentCue(): Cue | null {
    return this.finished ? null : this.cues[this.index];
  }

  play(): void {
    if (this.finished) {
      this.index = 0;
    }
    this._playing = true;
    this.emit();
    this.schedule();
  }

  pause(): void {
    this._playing = false;
    this.clearTimer();
  }

  stop(): void {
    this.pause();
    this.index = 0;
  }

  /** Restart the reveal of the current event (or the current intro set). */
  replay(): void {
    const cue = this.currentCue ?? this.cues[this.cues.length - 1];
    if (cue) {
      if (cue.set === 3) {
        this.index = this.cues.findIndex(
          (c) => c.set === 3 && c.event_index === cue.event_index && c.level === 1,
        );
      } else {
        this.index = this.cues.findIndex((c) => c.set === cue.set);
      }
    } else {
      this.index = 0;
    }
    this.play();
  }

  /** Jump to the next animation set (next event once inside set 3). */
  skip(): void {
    const cue = this.currentCue;
    if (cue === null) {
      return;
    }
    let target: number;
    if (cue.set === 1) {
      target = this.cues.findIndex((c) => c.set === 2);
    } else if (cue.set === 2) {
      target = this.cues.findIndex((c) => c.set === 3);
    } else {
      target = this.cues.findIndex(
        (c) => c.set === 3 && (c.event_index ?? 0) === (cue.event_index ?? 0) + 1,
      );
    }
    if (target < 0) {
      this.finish();
      return;
    }
    this.index = target;
    this.emit();
    if (this._playing) {
      this.schedule();
    }
  }

  private emit(): void {
    const cue = this.currentCue;
    if (cue) {
      this.callbacks.onCue(cue);
    }
  }

  private schedule(): void {
    this.clearTimer();
    this.timer = setTimeout(() => this.advance(), this.stepDurationMs);
  }

  private advance(): void {
    this.index += 1;
    if (this.finished) {
      this.finish();
      return;
    }
    this.emit();
    if (this._playing) {
      this.schedule();
    }
  }

  private finish(): void {
    this.pause();
    this.index = this.cues.length;
    this.callbacks.onFinished();
  }

  private clearTimer(): void {
    if (this.timer !== null) {
      clearTimeout(this.timer);
      this.timer = null;
    }
  }
}
