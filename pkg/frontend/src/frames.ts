// Frame arithmetic shared by the player and the sync panels. The video
// element exposes time in seconds; everything else in the app speaks frame
// indices, so these two conversions must round-trip exactly for every frame.

const EPSILON = 1e-6;

export function clampFrame(frame: number, frameCount: number): number {
  if (frame < 0) return 0;
  if (frame > frameCount - 1) return frameCount - 1;
  return frame;
}

/**
 * Time to seek the video element to so it displays `frame`. Aiming at the
 * middle of the frame interval keeps decoder rounding from landing us on a
 * neighbouring frame.
 */
export function seekTime(frame: number, fps: number): number {
  return (frame + 0.5) / fps;
}

/** Frame index shown at playback time `time`. */
export function frameFromTime(time: number, fps: number): number {
  return Math.floor(time * fps + EPSILON);
}

/** Current frame of a secondary view given the main frame and its offset. */
export function syncedFrame(
  mainFrame: number,
  offset: number,
  frameCount: number,
): number {
  return clampFrame(mainFrame + offset, frameCount);
}

/** Frame reached by stepping `delta` frames from `frame`, clamped. */
export function stepFrame(
  frame: number,
  delta: number,
  frameCount: number,
): number {
  return clampFrame(frame + delta, frameCount);
}

/** Frame reached by skipping `seconds` (may be negative), clamped. */
export function skipSeconds(
  frame: number,
  seconds: number,
  fps: number,
  frameCount: number,
): number {
  return clampFrame(frame + Math.round(seconds * fps), frameCount);
}

/** mm:ss.mmm display string for a frame position. */
export function formatTimecode(frame: number, fps: number): string {
  const totalSeconds = frame / fps;
  const minutes = Math.floor(totalSeconds / 60);
  const seconds = totalSeconds - minutes * 60;
  const secondsText = seconds.toFixed(3).padStart(6, "0");
  return `${String(minutes).padStart(2, "0")}:${secondsText}`;
}
