// Thin typed client for the annotation service. All mutations funnel through
// postCommand; the UI holds no authoritative state of its own.

import type {
  BehaviorListing,
  CommandEnvelope,
  CommandResult,
  FrameDetections,
  SnapshotReceipt,
  StatePayload,
  ThumbnailMeta,
} from "./types.js";

export class ApiError extends Error {
  readonly status: number;
  readonly kind: string;

  constructor(status: number, kind: string, detail: string) {
    super(detail);
    this.name = "ApiError";
    this.status = status;
    this.kind = kind;
  }
}

type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

async function unwrap<T>(response: Response): Promise<T> {
  if (response.ok) {
    return (await response.json()) as T;
  }
  let kind = "HttpError";
  let detail = `${response.status} ${response.statusText}`;
  try {
    const body = (await response.json()) as { error?: string; detail?: string };
    if (body.error) kind = body.error;
    if (body.detail) detail = body.detail;
  } catch {
    // non-JSON error body; keep the status line
  }
  throw new ApiError(response.status, kind, detail);
}

export class ApiClient {
  private readonly base: string;
  private readonly fetchImpl: FetchLike;

  constructor(base = "", fetchImpl: FetchLike = fetch) {
    this.base = base.replace(/\/$/, "");
    this.fetchImpl = fetchImpl;
  }

  private url(path: string): string {
    return `${this.base}${path}`;
  }

  async getState(): Promise<StatePayload> {
    return unwrap(await this.fetchImpl(this.url("/state")));
  }

  async getFrameDetections(frame: number): Promise<FrameDetections> {
    return unwrap(await this.fetchImpl(this.url(`/frame/${frame}/detections`)));
  }

  async getThumbnailMeta(frame: number): Promise<ThumbnailMeta> {
    return unwrap(
      await this.fetchImpl(this.url(`/frame/${frame}/thumbnail-meta`)),
    );
  }

  async getBehaviors(): Promise<BehaviorListing> {
    return unwrap(await this.fetchImpl(this.url("/behaviors")));
  }

  async postCommand(envelope: CommandEnvelope): Promise<CommandResult> {
    return unwrap(
      await this.fetchImpl(this.url("/commands"), {
        method: "POST",
        headers: { "content-type": "application/json" },
        body: JSON.stringify(envelope),
      }),
    );
  }

  async postSnapshot(
    frame: number,
    withBoxes: boolean,
    image: Blob | ArrayBuffer,
  ): Promise<SnapshotReceipt> {
    const query = `frame=${frame}&with_boxes=${withBoxes}`;
    return unwrap(
      await this.fetchImpl(this.url(`/snapshots?${query}`), {
        method: "POST",
        headers: { "content-type": "application/octet-stream" },
        body: image,
      }),
    );
  }

  async exportText(
    what: "tracking" | "interactions" | "metadata",
  ): Promise<string> {
    const response = await this.fetchImpl(this.url(`/export/${what}`));
    if (!response.ok) {
      await unwrap(response); // throws with the server's error shape
    }
    return response.text();
  }

  videoUrl(viewId: string = "main"): string {
    return this.url(`/video/${viewId}`);
  }

  eventsUrl(): string {
    return this.url("/events");
  }
}

/**
 * Incremental parser for the server's event stream. Feed it raw chunks;
 * it emits the version number of every `version` event. Keepalive comments
 * and partial lines across chunk boundaries are handled.
 */
export class VersionStreamParser {
  private buffer = "";
  private eventName = "";
  private data = "";

  feed(chunk: string, onVersion: (version: number) => void): void {
    this.buffer += chunk;
    let newline: number;
    while ((newline = this.buffer.indexOf("\n")) >= 0) {
      const line = this.buffer.slice(0, newline).replace(/\r$/, "");
      this.buffer = this.buffer.slice(newline + 1);
      if (line === "") {
        this.dispatch(onVersion);
      } else if (line.startsWith(":")) {
        // keepalive comment
      } else if (line.startsWith("event:")) {
        this.eventName = line.slice(6).trim();
      } else if (line.startsWith("data:")) {
        this.data += line.slice(5).trim();
      }
    }
  }

  private dispatch(onVersion: (version: number) => void): void {
    if (this.eventName === "version" && this.data) {
      try {
        const parsed = JSON.parse(this.data) as { version?: number };
        if (typeof parsed.version === "number") {
          onVersion(parsed.version);
        }
      } catch {
        // ignore malformed event payloads; the next one will catch us up
      }
    }
    this.eventName = "";
    this.data = "";
  }
}
