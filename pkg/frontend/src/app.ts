// DOM entry point. All domain logic lives in the imported modules; this file
// binds browser events to the controller and paints confirmed state.

import { ApiClient } from "./api.js";
import { SessionController } from "./controller.js";
import {
  clampFrame,
  formatTimecode,
  frameFromTime,
  seekTime,
  syncedFrame,
} from "./frames.js";
import { FramePlayer } from "./player.js";
import {
  buildOverlay,
  fitTransform,
  identityTransform,
  pan,
  screenToImage,
  zoomAt,
  type OverlayBox,
  type ViewTransform,
} from "./transform.js";
import type { DetectionPayload } from "./types.js";

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (node === null) throw new Error(`missing element #${id}`);
  return node as T;
}

const api = new ApiClient("");
const controller = new SessionController(api);

const video = el<HTMLVideoElement>("main-video");
const overlay = el<HTMLCanvasElement>("overlay");
const wrap = el<HTMLDivElement>("video-wrap");
const frameLabel = el<HTMLSpanElement>("frame-label");
const breadcrumb = el<HTMLSpanElement>("breadcrumb");
const noticeEl = el<HTMLSpanElement>("notice");
const connEl = el<HTMLSpanElement>("conn");
const seekBar = el<HTMLInputElement>("seek");
const gotoInput = el<HTMLInputElement>("goto-frame");
const notesArea = el<HTMLTextAreaElement>("notes");
const viewsStrip = el<HTMLDivElement>("views-strip");
const thumbVideo = el<HTMLVideoElement>("thumb-video");
const thumbBox = el<HTMLDivElement>("thumb-box");
const thumbCanvas = el<HTMLCanvasElement>("thumb-canvas");
const thumbFrame = el<HTMLSpanElement>("thumb-frame");
const drawButton = el<HTMLButtonElement>("btn-draw");
const playButton = el<HTMLButtonElement>("btn-play");

let player: FramePlayer | null = null;
let transform: ViewTransform = identityTransform();
let drawMode = false;
let selectedTrack: number | null = null;
let drawClass: number | null = null;
let dirty = true;
let lastShownFrame = -1;
let noticeTimer: number | undefined;

// input history for the interpolate button: track id -> frames drawn by hand
const manualEdits = new Map<number, number[]>();

// confirmed detections per frame, dropped wholesale on every state change
const detCache = new Map<number, DetectionPayload[]>();
const detPending = new Set<number>();

interface ViewSlot {
  viewId: string;
  offset: number;
  frameCount: number | null;
  video: HTMLVideoElement;
  caption: HTMLElement;
}
let viewSlots: ViewSlot[] = [];

function notify(text: string, level: "info" | "error" = "info"): void {
  noticeEl.textContent = text;
  noticeEl.hidden = false;
  noticeEl.style.color = level === "error" ? "var(--error)" : "var(--dim)";
  window.clearTimeout(noticeTimer);
  noticeTimer = window.setTimeout(() => {
    noticeEl.hidden = true;
  }, 4000);
}

controller.onNotice = (n) => notify(n.text, n.level);

function markDirty(): void {
  dirty = true;
}

// ---------------------------------------------------------------- overlay

function detectionsFor(frame: number): DetectionPayload[] {
  const hit = detCache.get(frame);
  if (hit !== undefined) return hit;
  if (!detPending.has(frame)) {
    detPending.add(frame);
    api
      .getFrameDetections(frame)
      .then((payload) => {
        detCache.set(payload.frame, payload.detections);
      })
      .catch(() => undefined)
      .finally(() => {
        detPending.delete(frame);
        markDirty();
      });
  }
  return [];
}

function strokeBoxes(
  ctx: CanvasRenderingContext2D,
  boxes: OverlayBox[],
  withLabels: boolean,
): void {
  for (const box of boxes) {
    ctx.globalAlpha = box.opacity;
    ctx.strokeStyle = box.color;
    ctx.lineWidth = box.thickness;
    ctx.strokeRect(box.x, box.y, box.w, box.h);
    if (withLabels) {
      ctx.font = "12px system-ui, sans-serif";
      const width = ctx.measureText(box.label).width + 6;
      ctx.fillStyle = box.color;
      ctx.fillRect(box.x, box.y - 15, width, 15);
      ctx.fillStyle = "#000";
      ctx.fillText(box.label, box.x + 3, box.y - 4);
    }
    if (box.trackId === selectedTrack) {
      ctx.fillStyle = box.color;
      for (const [hx, hy] of corners(box)) {
        ctx.fillRect(hx - 3, hy - 3, 6, 6);
      }
    }
  }
  ctx.globalAlpha = 1;
}

function corners(box: OverlayBox): [number, number][] {
  return [
    [box.x, box.y],
    [box.x + box.w, box.y],
    [box.x, box.y + box.h],
    [box.x + box.w, box.y + box.h],
  ];
}

interface DragState {
  kind: "pan" | "rubber" | "resize";
  startX: number;
  startY: number;
  lastX: number;
  lastY: number;
  moved: boolean;
  corner?: number;
  trackId?: number;
}
let drag: DragState | null = null;

function drawScene(): void {
  const ctx = overlay.getContext("2d");
  if (ctx === null || player === null) return;
  if (
    overlay.width !== wrap.clientWidth ||
    overlay.height !== wrap.clientHeight
  ) {
    overlay.width = wrap.clientWidth;
    overlay.height = wrap.clientHeight;
  }
  ctx.clearRect(0, 0, overlay.width, overlay.height);
  if (video.readyState >= 2) {
    ctx.drawImage(
      video,
      transform.offsetX,
      transform.offsetY,
      video.videoWidth * transform.scale,
      video.videoHeight * transform.scale,
    );
  }
  const frame = player.currentFrame;
  strokeBoxes(ctx, buildOverlay(detectionsFor(frame), transform), true);
  if (drag !== null && drag.kind === "rubber") {
    ctx.strokeStyle = "#fff";
    ctx.setLineDash([4, 3]);
    ctx.lineWidth = 1;
    ctx.strokeRect(
      Math.min(drag.startX, drag.lastX),
      Math.min(drag.startY, drag.lastY),
      Math.abs(drag.lastX - drag.startX),
      Math.abs(drag.lastY - drag.startY),
    );
    ctx.setLineDash([]);
  }
}

// ------------------------------------------------------------- main loop

function tick(): void {
  if (player !== null) {
    const frame = player.currentFrame;
    if (frame !== lastShownFrame || dirty) {
      lastShownFrame = frame;
      dirty = false;
      frameLabel.textContent = `frame ${frame}  ${formatTimecode(frame, player.fps)}`;
      seekBar.value = String(frame);
      drawScene();
      syncViews(frame);
    }
  }
  window.requestAnimationFrame(tick);
}

function syncViews(mainFrame: number): void {
  if (player === null) return;
  for (const slot of viewSlots) {
    const count = slot.frameCount ?? player.frameCount;
    const target = syncedFrame(mainFrame, slot.offset, count);
    slot.caption.textContent = `${slot.viewId} @ ${target}`;
    const shown = frameFromTime(slot.video.currentTime, player.fps);
    if (shown !== target && slot.video.readyState >= 1) {
      slot.video.currentTime = seekTime(target, player.fps);
    }
  }
}

// ------------------------------------------------------------ rendering

function renderPanels(): void {
  if (!controller.loaded) return;
  const state = controller.state;
  el<HTMLSpanElement>("video-name").textContent =
    `${state.video.name} (${state.annotator || "annotator unset"})`;

  const indKeys = state.shortcuts.individuals;
  const indList = el<HTMLUListElement>("individuals-panel");
  indList.replaceChildren(
    ...state.roster.map((name) =>
      shortcutItem(name, indKeys[name], () => {
        if (player !== null) {
          void controller
            .annotationPick(name, player.currentFrame)
            .then(updateBreadcrumb);
        }
      }),
    ),
  );

  const actKeys = state.shortcuts.ethogram;
  const actList = el<HTMLUListElement>("ethogram-panel");
  actList.replaceChildren(
    ...state.ethogram.map((label) =>
      shortcutItem(label, actKeys[label], () => {
        updateBreadcrumb(controller.annotationAction(label));
      }),
    ),
  );

  renderClasses();
  renderBehaviors();
  if (document.activeElement !== notesArea) {
    notesArea.value = state.notes;
  }
  renderViews();
  detCache.clear();
  markDirty();
}

function shortcutItem(
  name: string,
  key: string | undefined,
  onClick: () => void,
): HTMLLIElement {
  const item = document.createElement("li");
  const kbd = document.createElement("kbd");
  kbd.textContent = key ?? "·";
  const span = document.createElement("span");
  span.textContent = name;
  item.append(kbd, span);
  item.addEventListener("click", onClick);
  return item;
}

function renderClasses(): void {
  const state = controller.state;
  const list = el<HTMLUListElement>("classes-panel");
  const labels = Object.keys(state.class_names).sort(
    (a, b) => Number(a) - Number(b),
  );
  if (drawClass === null && labels.length > 0) {
    drawClass = Number(labels[0]);
  }
  list.replaceChildren(
    ...labels.map((label) => {
      const style = state.styles[label];
      const item = document.createElement("li");
      if (Number(label) === drawClass) item.classList.add("pending");
      const swatch = document.createElement("span");
      swatch.className = "swatch";
      swatch.style.background = style?.color ?? "#888";
      const span = document.createElement("span");
      span.textContent = `${state.class_names[label]} (${label})`;
      const hide = document.createElement("input");
      hide.type = "checkbox";
      hide.title = "hidden";
      hide.checked = style?.hidden ?? false;
      hide.addEventListener("click", (ev) => {
        ev.stopPropagation();
        void controller.command("set_style", {
          class_label: Number(label),
          hidden: hide.checked,
        });
      });
      item.append(swatch, span, hide);
      item.addEventListener("click", () => {
        drawClass = Number(label);
        renderClasses();
      });
      return item;
    }),
  );
}

function renderBehaviors(): void {
  const body = el<HTMLTableSectionElement>("behaviors-table")
    .querySelector("tbody") as HTMLTableSectionElement;
  body.replaceChildren(
    ...controller.behaviors.map((record) => {
      const row = document.createElement("tr");
      if (record.open) row.classList.add("open");
      row.append(
        cell(record.subject),
        cell(record.action),
        cell(record.target ?? ""),
        seekCell(record.start_frame),
        record.end_frame === null ? cell("…") : seekCell(record.end_frame),
        actionsCell(record.record_id, record.open),
      );
      return row;
    }),
  );
}

function cell(text: string): HTMLTableCellElement {
  const td = document.createElement("td");
  td.textContent = text;
  return td;
}

function seekCell(frame: number): HTMLTableCellElement {
  const td = cell(String(frame));
  td.classList.add("seek-cell");
  td.title = "jump to frame";
  td.addEventListener("click", () => player?.goto(frame));
  return td;
}

function actionsCell(recordId: number, open: boolean): HTMLTableCellElement {
  const td = document.createElement("td");
  if (open) {
    const close = document.createElement("button");
    close.textContent = "close";
    close.title = "close at current frame";
    close.addEventListener("click", () => {
      if (player !== null) {
        void controller.command("close_behavior", {
          record_id: recordId,
          end_frame: player.currentFrame,
        });
      }
    });
    td.append(close);
  }
  const remove = document.createElement("button");
  remove.textContent = "x";
  remove.title = "delete record";
  remove.addEventListener("click", () => {
    void controller.command("delete_behavior", { record_id: recordId });
  });
  td.append(remove);
  return td;
}

function renderViews(): void {
  const state = controller.state;
  const wanted = state.views.map((v) => v.view_id).join("|");
  const current = viewSlots.map((s) => s.viewId).join("|");
  if (wanted === current) {
    for (const slot of viewSlots) {
      const info = state.views.find((v) => v.view_id === slot.viewId);
      if (info !== undefined) {
        slot.offset = info.frame_offset;
        slot.frameCount = info.frame_count;
      }
    }
    return;
  }
  viewSlots = state.views.map((info) => {
    const figure = document.createElement("figure");
    const viewVideo = document.createElement("video");
    viewVideo.muted = true;
    viewVideo.preload = "auto";
    viewVideo.src = api.videoUrl(info.view_id);
    const caption = document.createElement("figcaption");
    caption.textContent = info.view_id;
    figure.append(viewVideo, caption);
    viewsStrip.append(figure);
    return {
      viewId: info.view_id,
      offset: info.frame_offset,
      frameCount: info.frame_count,
      video: viewVideo,
      caption,
    };
  });
  viewsStrip.replaceChildren(
    ...viewSlots.map((slot) => slot.video.parentElement as HTMLElement),
  );
}

function updateBreadcrumb(outcome?: unknown): void {
  void outcome;
  if (controller.flow.active) {
    breadcrumb.textContent = controller.flow.breadcrumb;
    breadcrumb.hidden = false;
  } else {
    breadcrumb.hidden = true;
  }
}

controller.onChange = renderPanels;

// ---------------------------------------------------------- interaction

function togglePlay(): void {
  if (player === null) return;
  if (player.paused) {
    player.play();
    playButton.textContent = "pause";
  } else {
    player.pause();
    playButton.textContent = "play";
  }
}

function bindTransport(): void {
  playButton.addEventListener("click", togglePlay);
  el("btn-step-back").addEventListener("click", () => player?.step(-1));
  el("btn-step-fwd").addEventListener("click", () => player?.step(1));
  el("btn-back5").addEventListener("click", () => player?.skip(-5));
  el("btn-fwd5").addEventListener("click", () => player?.skip(5));
  el<HTMLSelectElement>("rate").addEventListener("change", (ev) => {
    player?.setRate(Number((ev.target as HTMLSelectElement).value));
  });
  const doGoto = () => {
    if (player === null || gotoInput.value === "") return;
    const result = player.goto(Number(gotoInput.value));
    if (result.clamped) {
      notify(`frame out of range, clamped to ${result.frame}`);
    }
  };
  el("btn-goto").addEventListener("click", doGoto);
  gotoInput.addEventListener("keydown", (ev) => {
    if (ev.key === "Enter") {
      doGoto();
      gotoInput.blur();
    }
  });
  seekBar.addEventListener("input", () => player?.goto(Number(seekBar.value)));
  el("btn-reset-view").addEventListener("click", () => {
    fitView();
    markDirty();
  });
  drawButton.addEventListener("click", () => {
    drawMode = !drawMode;
    drawButton.classList.toggle("active", drawMode);
    overlay.style.cursor = drawMode ? "crosshair" : "default";
  });
  el("btn-interpolate").addEventListener("click", () => void interpolate());
  el("btn-snap").addEventListener("click", () => void snapshot(false));
  el("btn-snap-boxes").addEventListener("click", () => void snapshot(true));
}

async function interpolate(): Promise<void> {
  if (selectedTrack === null) {
    notify("select a track first", "error");
    return;
  }
  const frames = [...new Set(manualEdits.get(selectedTrack) ?? [])].sort(
    (a, b) => a - b,
  );
  if (frames.length < 2) {
    notify("draw or adjust the track on two frames first", "error");
    return;
  }
  const frameB = frames.at(-1) as number;
  const frameA = frames.at(-2) as number;
  const result = await controller.command("interpolate_track", {
    track_id: selectedTrack,
    frame_a: frameA,
    frame_b: frameB,
  });
  if (result !== null) {
    notify(`interpolated ${String(result.inserted)} frames`);
  }
}

async function snapshot(withBoxes: boolean): Promise<void> {
  if (player === null || video.readyState < 2) return;
  const frame = player.currentFrame;
  const scratch = document.createElement("canvas");
  scratch.width = video.videoWidth;
  scratch.height = video.videoHeight;
  const ctx = scratch.getContext("2d");
  if (ctx === null) return;
  ctx.drawImage(video, 0, 0);
  if (withBoxes) {
    strokeBoxes(
      ctx,
      buildOverlay(detectionsFor(frame), identityTransform()),
      true,
    );
  }
  const blob = await new Promise<Blob | null>((resolve) =>
    scratch.toBlob(resolve, "image/png"),
  );
  if (blob === null) {
    notify("snapshot rendering failed", "error");
    return;
  }
  try {
    const receipt = await api.postSnapshot(frame, withBoxes, blob);
    notify(`saved ${receipt.file}`);
  } catch (err) {
    notify(`snapshot upload failed: ${String(err)}`, "error");
  }
}

function fitView(): void {
  if (video.videoWidth > 0) {
    transform = fitTransform(
      video.videoWidth,
      video.videoHeight,
      wrap.clientWidth,
      wrap.clientHeight,
    );
  }
}

function canvasPos(ev: MouseEvent): [number, number] {
  const rect = overlay.getBoundingClientRect();
  return [ev.clientX - rect.left, ev.clientY - rect.top];
}

function hitCorner(
  boxes: OverlayBox[],
  x: number,
  y: number,
): { trackId: number; corner: number } | null {
  for (const box of boxes) {
    if (box.trackId !== selectedTrack) continue;
    const points = corners(box);
    for (let i = 0; i < points.length; i++) {
      const point = points[i] as [number, number];
      if (Math.abs(point[0] - x) <= 6 && Math.abs(point[1] - y) <= 6) {
        return { trackId: box.trackId, corner: i };
      }
    }
  }
  return null;
}

function hitBox(boxes: OverlayBox[], x: number, y: number): OverlayBox | null {
  let best: OverlayBox | null = null;
  for (const box of boxes) {
    const inside =
      x >= box.x && x <= box.x + box.w && y >= box.y && y <= box.y + box.h;
    if (inside && (best === null || box.w * box.h < best.w * best.h)) {
      best = box;
    }
  }
  return best;
}

function bindCanvas(): void {
  overlay.addEventListener("wheel", (ev) => {
    ev.preventDefault();
    const [x, y] = canvasPos(ev);
    transform = zoomAt(transform, x, y, Math.exp(-ev.deltaY * 0.0015));
    markDirty();
  });

  overlay.addEventListener("dblclick", () => {
    fitView();
    markDirty();
  });

  overlay.addEventListener("mousedown", (ev) => {
    if (player === null) return;
    const [x, y] = canvasPos(ev);
    if (drawMode) {
      drag = { kind: "rubber", startX: x, startY: y, lastX: x, lastY: y, moved: false };
      return;
    }
    const boxes = buildOverlay(
      detectionsFor(player.currentFrame),
      transform,
    );
    const corner = hitCorner(boxes, x, y);
    if (corner !== null) {
      drag = {
        kind: "resize",
        startX: x,
        startY: y,
        lastX: x,
        lastY: y,
        moved: false,
        corner: corner.corner,
        trackId: corner.trackId,
      };
      return;
    }
    drag = { kind: "pan", startX: x, startY: y, lastX: x, lastY: y, moved: false };
  });

  overlay.addEventListener("mousemove", (ev) => {
    if (drag === null) return;
    const [x, y] = canvasPos(ev);
    if (Math.abs(x - drag.startX) + Math.abs(y - drag.startY) > 3) {
      drag.moved = true;
    }
    if (drag.kind === "pan" && drag.moved) {
      transform = pan(transform, x - drag.lastX, y - drag.lastY);
    }
    drag.lastX = x;
    drag.lastY = y;
    markDirty();
  });

  overlay.addEventListener("mouseup", (ev) => {
    if (drag === null || player === null) return;
    const state = drag;
    drag = null;
    markDirty();
    const [x, y] = canvasPos(ev);
    if (state.kind === "rubber") {
      void finishRubber(state, x, y);
    } else if (state.kind === "resize" && state.moved) {
      void finishResize(state, x, y);
    } else if (!state.moved) {
      handleClick(x, y);
    }
  });

  overlay.addEventListener("mouseleave", () => {
    if (drag !== null && drag.kind !== "resize") {
      drag = null;
      markDirty();
    }
  });
}

async function finishRubber(
  state: DragState,
  x: number,
  y: number,
): Promise<void> {
  if (player === null || drawClass === null) return;
  if (Math.abs(x - state.startX) < 2 || Math.abs(y - state.startY) < 2) {
    return; // degenerate drag
  }
  const [ax, ay] = screenToImage(transform, state.startX, state.startY);
  const [bx, by] = screenToImage(transform, x, y);
  const frame = player.currentFrame;
  const result = await controller.command("draw_box", {
    frame,
    x: Math.min(ax, bx),
    y: Math.min(ay, by),
    w: Math.abs(bx - ax),
    h: Math.abs(by - ay),
    class_label: drawClass,
  });
  if (result !== null) {
    const trackId = result.track_id as number;
    selectedTrack = trackId;
    recordManualEdit(trackId, frame);
  }
}

async function finishResize(
  state: DragState,
  x: number,
  y: number,
): Promise<void> {
  if (player === null || state.trackId === undefined) return;
  const frame = player.currentFrame;
  const det = detectionsFor(frame).find((d) => d.track_id === state.trackId);
  if (det === undefined) return;
  const [ix, iy] = screenToImage(transform, x, y);
  let { x: nx, y: ny } = det;
  let right = det.x + det.w;
  let bottom = det.y + det.h;
  const corner = state.corner ?? 3;
  if (corner === 0 || corner === 2) nx = ix;
  else right = ix;
  if (corner === 0 || corner === 1) ny = iy;
  else bottom = iy;
  const result = await controller.command("resize_box", {
    track_id: state.trackId,
    frame,
    x: Math.min(nx, right),
    y: Math.min(ny, bottom),
    w: Math.abs(right - nx),
    h: Math.abs(bottom - ny),
  });
  if (result !== null) {
    recordManualEdit(state.trackId, frame);
  }
}

function recordManualEdit(trackId: number, frame: number): void {
  const history = manualEdits.get(trackId) ?? [];
  history.push(frame);
  manualEdits.set(trackId, history);
}

function handleClick(x: number, y: number): void {
  if (player === null) return;
  const boxes = buildOverlay(detectionsFor(player.currentFrame), transform);
  const box = hitBox(boxes, x, y);
  if (box === null) {
    selectedTrack = null;
    markDirty();
    return;
  }
  selectedTrack = box.trackId;
  markDirty();
  const det = detectionsFor(player.currentFrame).find(
    (d) => d.track_id === box.trackId,
  );
  if (det?.individual_name != null && det.individual_name !== "") {
    void controller
      .annotationPick(det.individual_name, player.currentFrame)
      .then(updateBreadcrumb);
  }
}

// ------------------------------------------------------------- keyboard

function bindKeyboard(): void {
  document.addEventListener("keydown", (ev) => {
    const target = ev.target as HTMLElement;
    const tag = target.tagName;
    if (tag === "INPUT" || tag === "TEXTAREA" || tag === "SELECT") {
      if (ev.key === "Escape") target.blur();
      return;
    }
    if (player === null) return;
    switch (ev.key) {
      case " ":
        ev.preventDefault();
        togglePlay();
        return;
      case "ArrowLeft":
        ev.preventDefault();
        player.step(-1);
        return;
      case "ArrowRight":
        ev.preventDefault();
        player.step(1);
        return;
      case "ArrowUp":
        ev.preventDefault();
        player.skip(5);
        return;
      case "ArrowDown":
        ev.preventDefault();
        player.skip(-5);
        return;
      default:
        break;
    }
    void controller
      .annotationKey(ev.key, player.currentFrame)
      .then(updateBreadcrumb);
  });
}

// ----------------------------------------------------------------- notes

function bindNotes(): void {
  const save = () => {
    if (!controller.loaded) return;
    if (notesArea.value !== controller.state.notes) {
      void controller.command("set_notes", { text: notesArea.value });
    }
  };
  notesArea.addEventListener("blur", save);
  window.setInterval(save, 10_000);
}

// ------------------------------------------------------------ thumbnails

function bindThumbnails(): void {
  let hoverFrame = -1;
  let debounce: number | undefined;

  thumbVideo.addEventListener("seeked", () => {
    const ctx = thumbCanvas.getContext("2d");
    if (ctx !== null) {
      ctx.drawImage(thumbVideo, 0, 0, thumbCanvas.width, thumbCanvas.height);
    }
  });

  seekBar.addEventListener("mousemove", (ev) => {
    if (player === null) return;
    const rect = seekBar.getBoundingClientRect();
    const ratio = (ev.clientX - rect.left) / rect.width;
    const frame = clampFrame(
      Math.round(ratio * (player.frameCount - 1)),
      player.frameCount,
    );
    if (frame === hoverFrame) return;
    hoverFrame = frame;
    thumbFrame.textContent = `frame ${frame}`;
    thumbBox.style.left = `${ev.clientX - rect.left - 80}px`;
    thumbBox.hidden = false;
    window.clearTimeout(debounce);
    debounce = window.setTimeout(() => {
      void api
        .getThumbnailMeta(frame)
        .then((meta) => {
          thumbVideo.currentTime = meta.time_s;
        })
        .catch(() => undefined);
    }, 80);
  });

  seekBar.addEventListener("mouseleave", () => {
    hoverFrame = -1;
    thumbBox.hidden = true;
  });
}

// ------------------------------------------------------------ event feed

function bindEvents(): void {
  const source = new EventSource(api.eventsUrl());
  source.addEventListener("open", () => connEl.classList.add("live"));
  source.addEventListener("error", () => connEl.classList.remove("live"));
  source.addEventListener("version", (ev) => {
    try {
      const payload = JSON.parse((ev as MessageEvent<string>).data) as {
        version?: number;
      };
      if (typeof payload.version === "number") {
        void controller.syncTo(payload.version);
      }
    } catch {
      // malformed event; the next one resyncs us
    }
  });
}

// ----------------------------------------------------------------- boot

async function boot(): Promise<void> {
  await controller.refresh();
  const state = controller.state;
  video.src = api.videoUrl("main");
  thumbVideo.src = api.videoUrl("main");

  video.addEventListener("loadedmetadata", () => {
    const fps = state.video.fps;
    const frameCount =
      state.video.frame_count ?? Math.floor(video.duration * fps + 1e-6);
    player = new FramePlayer(video, fps, frameCount);
    seekBar.max = String(frameCount - 1);
    gotoInput.max = String(frameCount - 1);
    fitView();
    markDirty();
  });

  window.addEventListener("resize", () => {
    fitView();
    markDirty();
  });

  bindTransport();
  bindCanvas();
  bindKeyboard();
  bindNotes();
  bindThumbnails();
  bindEvents();
  window.requestAnimationFrame(tick);
}

void boot().catch((err) => {
  notify(`failed to load session: ${String(err)}`, "error");
});
