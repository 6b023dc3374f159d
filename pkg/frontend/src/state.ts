/**
 * Local annotation state for one pending batch.
 *
 * Label picks live here, client side, until every card has one; only then
 * can the batch be turned into a submission payload. The batch view itself
 * is never mutated, so a refetch after a network hiccup can adopt the
 * selections made so far without losing work.
 */

import { BatchView, Instance, Label } from "./api.js";

export class BatchState {
  readonly view: BatchView;
  private readonly picks = new Map<string, Label>();
  private cursorIndex = 0;

  constructor(view: BatchView) {
    if (view.batch_token === null) {
      throw new Error("batch view has no token to label against");
    }
    if (view.instances.length === 0) {
      throw new Error("batch view has no instances");
    }
    this.view = view;
  }

  get token(): string {
    return this.view.batch_token as string;
  }

  get instances(): readonly Instance[] {
    return this.view.instances;
  }

  get size(): number {
    return this.view.instances.length;
  }

  get cursor(): number {
    return this.cursorIndex;
  }

  current(): Instance {
    return this.view.instances[this.cursorIndex];
  }

  labelOf(userId: string): Label | undefined {
    return this.picks.get(userId);
  }

  /** Label the focused card. */
  setLabel(label: Label): void {
    this.setLabelFor(this.current().user_id, label);
  }

  /** Label one card by user id; relabeling before submission is allowed. */
  setLabelFor(userId: string, label: Label): void {
    if (!this.view.instances.some((inst) => inst.user_id === userId)) {
      throw new Error(`user ${userId} is not part of this batch`);
    }
    this.picks.set(userId, label);
  }

  /** Move the focus by delta, clamped to the card range. */
  move(delta: number): number {
    return this.focus(this.cursorIndex + delta);
  }

  focus(index: number): number {
    this.cursorIndex = Math.min(Math.max(index, 0), this.size - 1);
    return this.cursorIndex;
  }

  /** Jump to the next unlabeled card after the cursor, wrapping once. */
  focusNextUnlabeled(): number {
    const n = this.size;
    for (let step = 1; step <= n; step += 1) {
      const idx = (this.cursorIndex + step) % n;
      if (!this.picks.has(this.view.instances[idx].user_id)) {
        this.cursorIndex = idx;
        return idx;
      }
    }
    return this.cursorIndex;
  }

  labeledCount(): number {
    return this.picks.size;
  }

  isComplete(): boolean {
    return this.view.instances.every((inst) => this.picks.has(inst.user_id));
  }

  labelsSnapshot(): ReadonlyMap<string, Label> {
    return new Map(this.picks);
  }

  /** Adopt selections from an earlier view of the same batch. */
  mergeFrom(labels: ReadonlyMap<string, Label>): void {
    for (const [userId, label] of labels) {
      if (this.view.instances.some((inst) => inst.user_id === userId)) {
        this.picks.set(userId, label);
      }
    }
  }

  /** Build the submission payload; only valid once every card is labeled. */
  submission(): Record<string, Label> {
    if (!this.isComplete()) {
      const missing = this.size - this.picks.size;
      throw new Error(`batch is not fully labeled: ${missing} cards remain`);
    }
    const out: Record<string, Label> = {};
    for (const inst of this.view.instances) {
      out[inst.user_id] = this.picks.get(inst.user_id) as Label;
    }
    return out;
  }
}
