// Frame-accurate playback controller. Browsers expose playback position as
// seconds, so every navigation converts through frames.ts and seeks to the
// middle of the target frame interval; the displayed frame index is then
// derived back from currentTime and must match the request exactly.

import { clampFrame, frameFromTime, seekTime } from "./frames.js";

/** The slice of HTMLVideoElement the controller needs; tests fake it. */
export interface VideoSurface {
  currentTime: number;
  paused: boolean;
  playbackRate: number;
  play(): void | Promise<void>;
  pause(): void;
}

export interface SeekResult {
  frame: number;
  clamped: boolean;
}

export class FramePlayer {
  private readonly video: VideoSurface;
  readonly fps: number;
  readonly frameCount: number;

  constructor(video: VideoSurface, fps: number, frameCount: number) {
    this.video = video;
    this.fps = fps;
    this.frameCount = frameCount;
  }

  /** Frame index currently displayed, derived from playback time. */
  get currentFrame(): number {
    return clampFrame(
      frameFromTime(this.video.currentTime, this.fps),
      this.frameCount,
    );
  }

  get paused(): boolean {
    return this.video.paused;
  }

  /** Seek to an exact frame; out-of-range requests clamp and report it. */
  goto(frame: number): SeekResult {
    const requested = Math.round(frame);
    const target = clampFrame(requested, this.frameCount);
    this.video.currentTime = seekTime(target, this.fps);
    return { frame: target, clamped: target !== requested };
  }

  step(delta: number): SeekResult {
    return this.goto(this.currentFrame + delta);
  }

  skip(seconds: number): SeekResult {
    return this.goto(this.currentFrame + Math.round(seconds * this.fps));
  }

  play(): void {
    void this.video.play();
  }

  /** Pause and snap onto the current frame so the index stays exact. */
  pause(): SeekResult {
    this.video.pause();
    return this.goto(this.currentFrame);
  }

  setRate(rate: number): void {
    this.video.playbackRate = rate;
  }

  get rate(): number {
    return this.video.playbackRate;
  }
}
