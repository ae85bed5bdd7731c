// Application core behind the DOM layer. Every mutation goes through
// postCommand and the controller re-fetches confirmed state afterwards;
// nothing is rendered from a guess about what the server will do.

import { ApiClient, ApiError } from "./api.js";
import { AnnotationFlow, resolveCommit, type FlowOutcome } from "./flow.js";
import type { BehaviorPayload, StatePayload } from "./types.js";

export interface Notice {
  level: "info" | "error";
  text: string;
}

export class SessionController {
  readonly api: ApiClient;
  readonly flow = new AnnotationFlow();
  onChange: () => void = () => {};
  onNotice: (notice: Notice) => void = () => {};
  private statePayload: StatePayload | null = null;
  private behaviorList: BehaviorPayload[] = [];

  constructor(api: ApiClient) {
    this.api = api;
  }

  get loaded(): boolean {
    return this.statePayload !== null;
  }

  get state(): StatePayload {
    if (this.statePayload === null) {
      throw new Error("state not loaded yet");
    }
    return this.statePayload;
  }

  get behaviors(): BehaviorPayload[] {
    return this.behaviorList;
  }

  get version(): number {
    return this.statePayload === null ? -1 : this.statePayload.version;
  }

  /** Fetch confirmed state and behaviors, then repaint. */
  async refresh(): Promise<void> {
    const [state, listing] = await Promise.all([
      this.api.getState(),
      this.api.getBehaviors(),
    ]);
    this.statePayload = state;
    this.behaviorList = listing.behaviors;
    this.flow.setShortcuts(
      state.shortcuts.individuals,
      state.shortcuts.ethogram,
    );
    this.onChange();
  }

  /** Called with versions from the event stream; refetches when behind. */
  async syncTo(version: number): Promise<void> {
    if (this.statePayload === null || version !== this.statePayload.version) {
      await this.refresh();
    }
  }

  /**
   * Post one command and refresh to the confirmed result. API validation
   * failures surface as notices and resolve to null instead of throwing.
   */
  async command(
    kind: string,
    params: Record<string, unknown>,
  ): Promise<Record<string, unknown> | null> {
    try {
      const outcome = await this.api.postCommand({ kind, params });
      await this.refresh();
      return outcome.result;
    } catch (err) {
      if (err instanceof ApiError) {
        this.onNotice({ level: "error", text: `${err.kind}: ${err.message}` });
        return null;
      }
      throw err;
    }
  }

  /**
   * Feed one key press into the annotation flow. A completed sequence
   * either opens a record at `frame` or closes the matching open record.
   */
  async annotationKey(key: string, frame: number): Promise<FlowOutcome> {
    const outcome = this.flow.handleKey(key);
    if (outcome.kind === "commit") {
      await this.commitAnnotation(outcome, frame);
    }
    return outcome;
  }

  /** Pick an individual by click; used for boxes and panel entries. */
  async annotationPick(name: string, frame: number): Promise<FlowOutcome> {
    const outcome = this.flow.chooseIndividual(name);
    if (outcome.kind === "commit") {
      await this.commitAnnotation(outcome, frame);
    }
    return outcome;
  }

  /** Pick an ethogram action by click. */
  annotationAction(name: string): FlowOutcome {
    return this.flow.chooseAction(name);
  }

  /** Confirm a target-less action while the flow waits for a target. */
  async annotationConfirm(frame: number): Promise<FlowOutcome> {
    return this.annotationKey("Enter", frame);
  }

  private async commitAnnotation(
    outcome: Extract<FlowOutcome, { kind: "commit" }>,
    frame: number,
  ): Promise<void> {
    const plan = resolveCommit(
      this.behaviorList,
      outcome.subject,
      outcome.action,
      outcome.target,
    );
    if (plan.op === "close_behavior") {
      await this.command("close_behavior", {
        record_id: plan.recordId,
        end_frame: frame,
      });
      return;
    }
    const params: Record<string, unknown> = {
      subject: outcome.subject,
      action: outcome.action,
      start_frame: frame,
    };
    if (outcome.target !== "") {
      params.target = outcome.target;
    }
    await this.command("open_behavior", params);
  }
}
