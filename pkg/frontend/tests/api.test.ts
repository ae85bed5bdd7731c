import { describe, expect, it } from "vitest";

import { ApiClient, ApiError, VersionStreamParser } from "../src/api.js";

interface Recorded {
  url: string;
  init?: RequestInit;
}

function clientWith(
  responder: (url: string, init?: RequestInit) => Response,
): { client: ApiClient; calls: Recorded[] } {
  const calls: Recorded[] = [];
  const client = new ApiClient("http://h:1", (url, init) => {
    calls.push({ url, init });
    return Promise.resolve(responder(url, init));
  });
  return { client, calls };
}

function json(body: unknown, status = 200): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "content-type": "application/json" },
  });
}

describe("api client", () => {
  it("requests state and frame detections from the expected paths", async () => {
    const { client, calls } = clientWith((url) =>
      url.endsWith("/state")
        ? json({ version: 3 })
        : json({ frame: 17, version: 3, detections: [] }),
    );
    await client.getState();
    await client.getFrameDetections(17);
    await client.getThumbnailMeta(17);
    await client.getBehaviors();
    expect(calls.map((c) => c.url)).toEqual([
      "http://h:1/state",
      "http://h:1/frame/17/detections",
      "http://h:1/frame/17/thumbnail-meta",
      "http://h:1/behaviors",
    ]);
  });

  it("posts commands as a kind/params envelope", async () => {
    const { client, calls } = clientWith(() => json({ version: 4, result: {} }));
    const result = await client.postCommand({
      kind: "set_notes",
      params: { text: "hi" },
    });
    expect(result.version).toBe(4);
    const call = calls[0];
    expect(call?.init?.method).toBe("POST");
    expect(JSON.parse(String(call?.init?.body))).toEqual({
      kind: "set_notes",
      params: { text: "hi" },
    });
  });

  it("unwraps server errors into ApiError", async () => {
    const { client } = clientWith(() =>
      json({ error: "UnknownTrack", detail: "no track 9" }, 404),
    );
    const err = await client.getState().catch((e: unknown) => e);
    expect(err).toBeInstanceOf(ApiError);
    const apiErr = err as ApiError;
    expect(apiErr.status).toBe(404);
    expect(apiErr.kind).toBe("UnknownTrack");
    expect(apiErr.message).toBe("no track 9");
  });

  it("survives non-JSON error bodies", async () => {
    const { client } = clientWith(
      () => new Response("gateway broke", { status: 502, statusText: "Bad Gateway" }),
    );
    const err = (await client.getState().catch((e: unknown) => e)) as ApiError;
    expect(err.kind).toBe("HttpError");
    expect(err.status).toBe(502);
  });

  it("fetches exports as raw text", async () => {
    const csv = "subject,action\nGeorge,looking at\n";
    const { client, calls } = clientWith(() => new Response(csv));
    expect(await client.exportText("interactions")).toBe(csv);
    expect(calls[0]?.url).toBe("http://h:1/export/interactions");
  });

  it("uploads snapshots with frame and overlay flag in the query", async () => {
    const { client, calls } = clientWith(() =>
      json({ file: "clip_f000012.png", frame: 12, with_boxes: true }),
    );
    const receipt = await client.postSnapshot(12, true, new ArrayBuffer(4));
    expect(receipt.file).toBe("clip_f000012.png");
    expect(calls[0]?.url).toBe("http://h:1/snapshots?frame=12&with_boxes=true");
  });

  it("builds video and event urls", () => {
    const client = new ApiClient("http://h:1/");
    expect(client.videoUrl()).toBe("http://h:1/video/main");
    expect(client.videoUrl("side")).toBe("http://h:1/video/side");
    expect(client.eventsUrl()).toBe("http://h:1/events");
  });
});

describe("version stream parser", () => {
  it("emits versions from complete events", () => {
    const parser = new VersionStreamParser();
    const seen: number[] = [];
    parser.feed('event: version\ndata: {"version": 5}\n\n', (v) => seen.push(v));
    expect(seen).toEqual([5]);
  });

  it("handles events split across arbitrary chunk boundaries", () => {
    const text =
      'event: version\ndata: {"version": 1}\n\n' +
      ": keepalive\n\n" +
      'event: version\ndata: {"version": 2}\n\n';
    for (const size of [1, 2, 3, 7, 1000]) {
      const parser = new VersionStreamParser();
      const seen: number[] = [];
      for (let i = 0; i < text.length; i += size) {
        parser.feed(text.slice(i, i + size), (v) => seen.push(v));
      }
      expect(seen).toEqual([1, 2]);
    }
  });

  it("ignores keepalive comments and malformed payloads", () => {
    const parser = new VersionStreamParser();
    const seen: number[] = [];
    parser.feed(": keepalive\n\n", (v) => seen.push(v));
    parser.feed("event: version\ndata: not json\n\n", (v) => seen.push(v));
    parser.feed('event: other\ndata: {"version": 9}\n\n', (v) => seen.push(v));
    expect(seen).toEqual([]);
    parser.feed('event: version\ndata: {"version": 3}\n\n', (v) => seen.push(v));
    expect(seen).toEqual([3]);
  });

  it("tolerates CRLF line endings", () => {
    const parser = new VersionStreamParser();
    const seen: number[] = [];
    parser.feed('event: version\r\ndata: {"version": 8}\r\n\r\n', (v) =>
      seen.push(v),
    );
    expect(seen).toEqual([8]);
  });
});
