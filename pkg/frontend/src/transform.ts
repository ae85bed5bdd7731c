// View transform between image pixels and screen pixels, plus overlay box
// construction. The transform is a uniform scale followed by a translation,
// so rectangles stay rectangles and fidelity is exact up to float rounding.

import type { DetectionPayload } from "./types.js";

export interface ViewTransform {
  scale: number;
  offsetX: number;
  offsetY: number;
}

export interface OverlayBox {
  trackId: number;
  x: number;
  y: number;
  w: number;
  h: number;
  label: string;
  color: string;
  opacity: number;
  thickness: number;
}

export function identityTransform(): ViewTransform {
  return { scale: 1, offsetX: 0, offsetY: 0 };
}

/** Largest centred transform that fits the whole image on screen. */
export function fitTransform(
  imageWidth: number,
  imageHeight: number,
  screenWidth: number,
  screenHeight: number,
): ViewTransform {
  const scale = Math.min(screenWidth / imageWidth, screenHeight / imageHeight);
  return {
    scale,
    offsetX: (screenWidth - imageWidth * scale) / 2,
    offsetY: (screenHeight - imageHeight * scale) / 2,
  };
}

export function imageToScreen(
  t: ViewTransform,
  x: number,
  y: number,
): [number, number] {
  return [x * t.scale + t.offsetX, y * t.scale + t.offsetY];
}

export function screenToImage(
  t: ViewTransform,
  x: number,
  y: number,
): [number, number] {
  return [(x - t.offsetX) / t.scale, (y - t.offsetY) / t.scale];
}

/**
 * Scale the view by `factor` while keeping the image point under the screen
 * position (anchorX, anchorY) exactly where it is.
 */
export function zoomAt(
  t: ViewTransform,
  anchorX: number,
  anchorY: number,
  factor: number,
  minScale = 0.1,
  maxScale = 32,
): ViewTransform {
  const scale = Math.min(maxScale, Math.max(minScale, t.scale * factor));
  const applied = scale / t.scale;
  return {
    scale,
    offsetX: anchorX - (anchorX - t.offsetX) * applied,
    offsetY: anchorY - (anchorY - t.offsetY) * applied,
  };
}

export function pan(t: ViewTransform, dx: number, dy: number): ViewTransform {
  return { scale: t.scale, offsetX: t.offsetX + dx, offsetY: t.offsetY + dy };
}

function boxLabel(det: DetectionPayload): string {
  const base = `${det.class_name} ${det.track_id}`;
  return det.individual_name ? `${base} ${det.individual_name}` : base;
}

/**
 * Project the frame's detections into screen space, dropping any whose class
 * style is marked hidden. Box corners are transformed individually so the
 * result is faithful to the affine map.
 */
export function buildOverlay(
  detections: DetectionPayload[],
  t: ViewTransform,
): OverlayBox[] {
  const boxes: OverlayBox[] = [];
  for (const det of detections) {
    if (det.style.hidden) continue;
    const [x0, y0] = imageToScreen(t, det.x, det.y);
    const [x1, y1] = imageToScreen(t, det.x + det.w, det.y + det.h);
    boxes.push({
      trackId: det.track_id,
      x: x0,
      y: y0,
      w: x1 - x0,
      h: y1 - y0,
      label: boxLabel(det),
      color: det.style.color,
      opacity: det.style.opacity,
      thickness: det.style.thickness,
    });
  }
  return boxes;
}
