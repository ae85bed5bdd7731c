// Modal keyboard flow for behavior annotation. The flow collects subject,
// action, and optionally target, then asks the caller to post a command.
// Escape always returns to idle; nothing is rendered optimistically.

import type { BehaviorPayload } from "./types.js";

export type FlowPhase = "subject" | "action" | "target";

export type FlowOutcome =
  | { kind: "idle" }
  | { kind: "pending"; phase: FlowPhase; breadcrumb: string }
  | { kind: "cancelled" }
  | { kind: "ignored" }
  | { kind: "commit"; subject: string; action: string; target: string };

export interface CommitPlan {
  op: "open_behavior" | "close_behavior";
  recordId?: number;
}

function invert(shortcuts: Record<string, string>): Map<string, string> {
  const byKey = new Map<string, string>();
  for (const [name, key] of Object.entries(shortcuts)) {
    byKey.set(key, name);
  }
  return byKey;
}

/**
 * Collects one behavior annotation from a key/click sequence. Selection by
 * click uses chooseIndividual/chooseAction directly; key presses are mapped
 * through the shortcut tables first. Enter commits a target-less action
 * while the flow waits for a target.
 */
export class AnnotationFlow {
  private individualsByKey = new Map<string, string>();
  private actionsByKey = new Map<string, string>();
  private subject: string | null = null;
  private action: string | null = null;

  setShortcuts(
    individuals: Record<string, string>,
    ethogram: Record<string, string>,
  ): void {
    this.individualsByKey = invert(individuals);
    this.actionsByKey = invert(ethogram);
  }

  get phase(): FlowPhase {
    if (this.subject === null) return "subject";
    if (this.action === null) return "action";
    return "target";
  }

  get active(): boolean {
    return this.subject !== null;
  }

  get breadcrumb(): string {
    const parts: string[] = [];
    if (this.subject !== null) parts.push(this.subject);
    if (this.action !== null) parts.push(this.action);
    parts.push("?");
    return parts.join(" → ");
  }

  reset(): void {
    this.subject = null;
    this.action = null;
  }

  handleKey(key: string): FlowOutcome {
    if (key === "Escape") {
      const wasActive = this.active;
      this.reset();
      return wasActive ? { kind: "cancelled" } : { kind: "idle" };
    }
    switch (this.phase) {
      case "subject": {
        const name = this.individualsByKey.get(key);
        return name === undefined
          ? { kind: "ignored" }
          : this.chooseIndividual(name);
      }
      case "action": {
        const name = this.actionsByKey.get(key);
        return name === undefined
          ? { kind: "ignored" }
          : this.chooseAction(name);
      }
      case "target": {
        if (key === "Enter") {
          return this.commit("");
        }
        const name = this.individualsByKey.get(key);
        return name === undefined
          ? { kind: "ignored" }
          : this.chooseIndividual(name);
      }
    }
  }

  chooseIndividual(name: string): FlowOutcome {
    if (this.phase === "subject") {
      this.subject = name;
      return { kind: "pending", phase: "action", breadcrumb: this.breadcrumb };
    }
    if (this.phase === "target") {
      return this.commit(name);
    }
    return { kind: "ignored" };
  }

  chooseAction(name: string): FlowOutcome {
    if (this.phase !== "action") {
      return { kind: "ignored" };
    }
    this.action = name;
    return { kind: "pending", phase: "target", breadcrumb: this.breadcrumb };
  }

  private commit(target: string): FlowOutcome {
    const subject = this.subject as string;
    const action = this.action as string;
    this.reset();
    return { kind: "commit", subject, action, target };
  }
}

/**
 * Decide whether a committed triple opens a new record or closes the open
 * record that already carries the same subject/action/target.
 */
export function resolveCommit(
  records: BehaviorPayload[],
  subject: string,
  action: string,
  target: string,
): CommitPlan {
  const match = records.find(
    (r) =>
      r.open &&
      r.subject === subject &&
      r.action === action &&
      (r.target ?? "") === target,
  );
  if (match) {
    return { op: "close_behavior", recordId: match.record_id };
  }
  return { op: "open_behavior" };
}
