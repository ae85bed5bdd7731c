import { describe, expect, it } from "vitest";

import {
  clampFrame,
  formatTimecode,
  frameFromTime,
  seekTime,
  skipSeconds,
  stepFrame,
  syncedFrame,
} from "../src/frames.js";
import { FramePlayer } from "../src/player.js";
import { FakeVideo, mulberry32 } from "./helpers.js";

describe("frame/time conversion", () => {
  it("round-trips every frame of a 30 s clip at common rates", () => {
    for (const fps of [24, 25, 29.97, 30, 50, 59.94, 60]) {
      const frames = Math.floor(30 * fps);
      for (let frame = 0; frame < frames; frame++) {
        expect(frameFromTime(seekTime(frame, fps), fps)).toBe(frame);
      }
    }
  });

  it("clamps to the valid frame range", () => {
    expect(clampFrame(-5, 100)).toBe(0);
    expect(clampFrame(100, 100)).toBe(99);
    expect(clampFrame(42, 100)).toBe(42);
  });

  it("steps and skips with clamping", () => {
    expect(stepFrame(10, 1, 100)).toBe(11);
    expect(stepFrame(0, -1, 100)).toBe(0);
    expect(skipSeconds(500, -5, 25, 1000)).toBe(375);
    expect(skipSeconds(10, -5, 25, 1000)).toBe(0);
  });

  it("formats timecodes", () => {
    expect(formatTimecode(0, 25)).toBe("00:00.000");
    expect(formatTimecode(1500, 25)).toBe("01:00.000");
    expect(formatTimecode(37, 25)).toBe("00:01.480");
  });
});

describe("frame-accurate navigation", () => {
  // 30 s test clip; the fake decoder reports the frame its time falls in,
  // which is exactly what a burned-in frame number would display.
  it("goto and step land on the exact frame, 50/50 probes", () => {
    const fps = 25;
    const frameCount = 750;
    const video = new FakeVideo(fps);
    const player = new FramePlayer(video, fps, frameCount);
    const rand = mulberry32(20260814);
    let passed = 0;
    for (let probe = 0; probe < 50; probe++) {
      if (probe % 2 === 0) {
        const target = Math.floor(rand() * frameCount);
        player.goto(target);
        if (
          player.currentFrame === target &&
          video.burnedInFrame() === target
        ) {
          passed++;
        }
      } else {
        const before = player.currentFrame;
        const delta = rand() < 0.5 ? -1 : 1;
        const expected = clampFrame(before + delta, frameCount);
        player.step(delta);
        if (
          player.currentFrame === expected &&
          video.burnedInFrame() === expected
        ) {
          passed++;
        }
      }
    }
    expect(passed).toBe(50);
  });

  it("stays exact at a non-integer frame rate", () => {
    const fps = 29.97;
    const frameCount = Math.floor(30 * fps);
    const video = new FakeVideo(fps);
    const player = new FramePlayer(video, fps, frameCount);
    const rand = mulberry32(7);
    for (let probe = 0; probe < 50; probe++) {
      const target = Math.floor(rand() * frameCount);
      player.goto(target);
      expect(player.currentFrame).toBe(target);
      expect(video.burnedInFrame()).toBe(target);
    }
  });

  it("goto(0) shows the first frame", () => {
    const video = new FakeVideo(25);
    const player = new FramePlayer(video, 25, 1000);
    player.goto(500);
    expect(player.goto(0)).toEqual({ frame: 0, clamped: false });
    expect(player.currentFrame).toBe(0);
  });

  it("step(+1) advances the displayed frame index by exactly 1", () => {
    const video = new FakeVideo(25);
    const player = new FramePlayer(video, 25, 1000);
    player.goto(122);
    player.step(1);
    expect(player.currentFrame).toBe(123);
  });

  it("skip(-5 s) at 25 fps moves -125 frames", () => {
    const video = new FakeVideo(25);
    const player = new FramePlayer(video, 25, 1000);
    player.goto(600);
    player.skip(-5);
    expect(player.currentFrame).toBe(475);
  });

  it("out-of-range goto clamps and reports it", () => {
    const video = new FakeVideo(25);
    const player = new FramePlayer(video, 25, 1000);
    expect(player.goto(5000)).toEqual({ frame: 999, clamped: true });
    expect(player.goto(-3)).toEqual({ frame: 0, clamped: true });
  });

  it("pause snaps onto the displayed frame", () => {
    const video = new FakeVideo(25);
    const player = new FramePlayer(video, 25, 1000);
    video.currentTime = 4.012; // mid-playback position inside frame 100
    video.paused = false;
    const result = player.pause();
    expect(result.frame).toBe(100);
    expect(video.paused).toBe(true);
    expect(video.currentTime).toBeCloseTo(seekTime(100, 25), 12);
  });
});

describe("view synchronization", () => {
  it("offset +12 displays frame m+12 for 20 random main frames", () => {
    const fps = 25;
    const frameCount = 1000;
    const main = new FakeVideo(fps);
    const side = new FakeVideo(fps);
    const player = new FramePlayer(main, fps, frameCount);
    const rand = mulberry32(1234);
    for (let probe = 0; probe < 20; probe++) {
      const m = Math.floor(rand() * (frameCount - 12));
      player.goto(m);
      const target = syncedFrame(player.currentFrame, 12, frameCount);
      side.currentTime = seekTime(target, fps);
      expect(target).toBe(m + 12);
      expect(side.burnedInFrame()).toBe(m + 12);
    }
  });

  it("clamps at both ends of the secondary clip", () => {
    expect(syncedFrame(5, -12, 1000)).toBe(0);
    expect(syncedFrame(995, 12, 1000)).toBe(999);
    expect(syncedFrame(100, 12, 1000)).toBe(112);
  });
});
