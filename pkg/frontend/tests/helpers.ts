import type { VideoSurface } from "../src/player.js";

/**
 * Stand-in for the browser video element. Like a real decoder it displays
 * the frame whose interval [n/fps, (n+1)/fps) contains currentTime, which
 * is what a burned-in frame number would show.
 */
export class FakeVideo implements VideoSurface {
  currentTime = 0;
  paused = true;
  playbackRate = 1;

  constructor(private readonly fps: number) {}

  play(): void {
    this.paused = false;
  }

  pause(): void {
    this.paused = true;
  }

  burnedInFrame(): number {
    return Math.floor(this.currentTime * this.fps);
  }
}

/** Small deterministic RNG so property-style tests are reproducible. */
export function mulberry32(seed: number): () => number {
  let a = seed >>> 0;
  return () => {
    a = (a + 0x6d2b79f5) >>> 0;
    let t = a;
    t = Math.imul(t ^ (t >>> 15), t | 1);
    t ^= t + Math.imul(t ^ (t >>> 7), t | 61);
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}
