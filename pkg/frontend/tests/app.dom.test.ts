import { Window } from "happy-dom";
import { describe, expect, it } from "vitest";

import {
  BatchView,
  CurvePoint,
  CurveView,
  Health,
  Instance,
  Label,
  ScoreCard,
  ServiceClient,
  SessionConfig,
  SessionCreated,
  SubmitResult,
} from "../src/api.js";
import { ApiError } from "../src/api.js";
import { initApp } from "../src/app.js";
import { makeInstance, makeProgress } from "./helpers.js";

/** In-memory stand-in for the annotation service, one session only. */
class FakeService implements ServiceClient {
  submitCalls = 0;
  effectiveSubmits = 0;
  failNextSubmit: Error | null = null;
  failNextBatch: Error | null = null;

  private readonly batchSize: number;
  private batchesLeft: number;
  private iteration = 0;
  private points: CurvePoint[] = [];
  private pending: Instance[] = [];
  private token: string | null = null;
  private last: { token: string; labels: Record<string, Label>; result: SubmitResult } | null = null;

  constructor(batchSize = 5, totalBatches = 2) {
    this.batchSize = batchSize;
    this.batchesLeft = totalBatches;
  }

  async health(): Promise<Health> {
    return { status: "ok", dataset: "fixture", sessions: 0 };
  }

  async createSession(_config: SessionConfig): Promise<SessionCreated> {
    this.points = [{ iteration: 0, labeled_count: 8, accuracy: 0.5 }];
    this.nextBatch();
    return {
      session_id: "s000001",
      batch_token: this.token as string,
      pending_batch_size: this.pending.length,
      initial_accuracy: 0.5,
      progress: makeProgress(),
    };
  }

  async getBatch(_sessionId: string): Promise<BatchView> {
    if (this.failNextBatch) {
      const err = this.failNextBatch;
      this.failNextBatch = null;
      throw err;
    }
    return {
      session_id: "s000001",
      batch_token: this.token,
      completed: this.token === null,
      instances: this.pending.slice(),
      progress: makeProgress({ pending_size: this.pending.length }),
    };
  }

  async submitLabels(
    _sessionId: string,
    batchToken: string,
    labels: Record<string, Label>,
  ): Promise<SubmitResult> {
    this.submitCalls += 1;
    if (this.failNextSubmit) {
      const err = this.failNextSubmit;
      this.failNextSubmit = null;
      throw err;
    }
    await new Promise((resolve) => setTimeout(resolve, 5));
    if (this.last && batchToken === this.last.token) {
      if (JSON.stringify(labels) === JSON.stringify(this.last.labels)) {
        return { ...this.last.result, replayed: true };
      }
      throw new ApiError(409, "batch was already labeled with a different label set");
    }
    if (batchToken !== this.token) {
      throw new ApiError(409, "stale or unknown batch token");
    }
    this.effectiveSubmits += 1;
    this.iteration += 1;
    this.batchesLeft -= 1;
    const accuracy = 0.5 + this.iteration * 0.1;
    const labeled = 8 + this.iteration * this.batchSize;
    this.points.push({ iteration: this.iteration, labeled_count: labeled, accuracy });
    if (this.batchesLeft > 0) {
      this.nextBatch();
    } else {
      this.pending = [];
      this.token = null;
    }
    const result: SubmitResult = {
      session_id: "s000001",
      iteration: this.iteration,
      labeled_count: labeled,
      accuracy,
      completed: this.batchesLeft === 0,
      stopped_early: false,
      next_batch_token: this.token,
      next_batch_size: this.pending.length,
      replayed: false,
    };
    this.last = { token: batchToken, labels: { ...labels }, result };
    return result;
  }

  async getCurve(_sessionId: string): Promise<CurveView> {
    return {
      session_id: "s000001",
      learner: "forest",
      strategy: "uncertainty",
      seed: 0,
      points: this.points.slice(),
      stopped_early: false,
      completed: this.token === null && this.iteration > 0,
    };
  }

  async getScorecard(_userId: string): Promise<ScoreCard> {
    throw new ApiError(404, "unknown user");
  }

  private nextBatch(): void {
    const base = this.iteration * this.batchSize;
    this.pending = Array.from({ length: this.batchSize }, (_, i) =>
      makeInstance(`u${String(base + i).padStart(6, "0")}`, 0.4 + 0.02 * i),
    );
    this.token = `token-${this.iteration}`;
  }
}

type Dom = { win: InstanceType<typeof Window>; doc: InstanceType<typeof Window>["document"] };

function makeDom(): Dom {
  const win = new Window();
  const doc = win.document;
  doc.body.innerHTML = `<div id="app"></div>`;
  return { win, doc };
}

function click(doc: Dom["doc"], selector: string): void {
  const el = doc.querySelector(selector);
  if (!el) throw new Error(`no element matches ${selector}`);
  (el as unknown as { click(): void }).click();
}

function press(dom: Dom, key: string): void {
  dom.doc.dispatchEvent(new dom.win.KeyboardEvent("keydown", { key, bubbles: true }));
}

function submitDisabled(doc: Dom["doc"]): boolean {
  const btn = doc.getElementById("submit-btn");
  return Boolean((btn as unknown as { disabled: boolean }).disabled);
}

function labelEverything(doc: Dom["doc"]): void {
  for (let guard = 0; guard < 100; guard += 1) {
    const btn = doc.querySelector('article.card:not(.labeled) button[data-label="trustworthy"]');
    if (!btn) return;
    (btn as unknown as { click(): void }).click();
  }
  throw new Error("labeling did not terminate");
}

async function boot(service: ServiceClient) {
  const dom = makeDom();
  const handle = initApp(dom.doc as unknown as Document, service);
  await handle.flush();
  click(dom.doc, '[data-action="create"]');
  await handle.flush();
  return { dom, handle };
}

describe("annotation flow in the page", () => {
  it("loads a batch into cards and reports the dataset", async () => {
    const service = new FakeService();
    const { dom, handle } = await boot(service);
    expect(dom.doc.getElementById("session-info")?.textContent).toContain("dataset: fixture");
    expect(dom.doc.getElementById("session-info")?.textContent).toContain("session s000001");
    expect(dom.doc.querySelectorAll("article.card")).toHaveLength(5);
    expect(submitDisabled(dom.doc)).toBe(true);
    expect(handle.curve?.points).toHaveLength(1);
    const curveBox = dom.doc.getElementById("curve-box")?.innerHTML ?? "";
    expect(curveBox).toContain("curve-marker");
  });

  it("labels by keyboard and mouse, enabling submit only when done", async () => {
    const service = new FakeService();
    const { dom, handle } = await boot(service);
    press(dom, "t");
    expect(handle.batch?.labelOf("u000000")).toBe("trustworthy");
    expect(handle.batch?.cursor).toBe(1);
    press(dom, "u");
    expect(handle.batch?.labelOf("u000001")).toBe("untrustworthy");
    expect(dom.doc.querySelectorAll("article.card.labeled")).toHaveLength(2);
    expect(submitDisabled(dom.doc)).toBe(true);
    labelEverything(dom.doc);
    expect(handle.batch?.isComplete()).toBe(true);
    expect(submitDisabled(dom.doc)).toBe(false);
  });

  it("moves the focus with arrows and skips form fields", async () => {
    const service = new FakeService();
    const { dom, handle } = await boot(service);
    press(dom, "ArrowRight");
    press(dom, "ArrowRight");
    expect(handle.batch?.cursor).toBe(2);
    expect(dom.doc.querySelectorAll("article.card")[2].className).toContain("focused");
    press(dom, "ArrowLeft");
    expect(handle.batch?.cursor).toBe(1);
    const field = dom.doc.getElementById("setup-batch-size");
    field?.dispatchEvent(new dom.win.KeyboardEvent("keydown", { key: "t", bubbles: true }));
    expect(handle.batch?.labeledCount()).toBe(0);
  });

  it("treats a double click on submit as one submission", async () => {
    const service = new FakeService();
    const { dom, handle } = await boot(service);
    labelEverything(dom.doc);
    click(dom.doc, "#submit-btn");
    click(dom.doc, "#submit-btn");
    await handle.flush();
    expect(service.submitCalls).toBe(1);
    expect(service.effectiveSubmits).toBe(1);
    expect(handle.curve?.points).toHaveLength(2);
    const curveBox = dom.doc.getElementById("curve-box")?.innerHTML ?? "";
    expect(curveBox).toContain("<polyline");
    expect(dom.doc.querySelectorAll("article.card")).toHaveLength(5);
    expect(dom.doc.querySelectorAll("article.card.labeled")).toHaveLength(0);
  });

  it("keeps local picks when a submit cannot reach the service", async () => {
    const service = new FakeService();
    const { dom, handle } = await boot(service);
    labelEverything(dom.doc);
    service.failNextSubmit = new TypeError("fetch failed");
    click(dom.doc, "#submit-btn");
    await handle.flush();
    const banner = dom.doc.getElementById("banner");
    expect((banner as unknown as { hidden: boolean }).hidden).toBe(false);
    expect(dom.doc.getElementById("banner-text")?.textContent).toContain("could not reach");
    expect(handle.batch?.labeledCount()).toBe(5);
    expect(service.effectiveSubmits).toBe(0);
    click(dom.doc, "#banner-retry");
    await handle.flush();
    expect(service.effectiveSubmits).toBe(1);
    expect((banner as unknown as { hidden: boolean }).hidden).toBe(true);
    expect(handle.curve?.points).toHaveLength(2);
  });

  it("shows the completion screen after the last batch", async () => {
    const service = new FakeService(5, 1);
    const { dom, handle } = await boot(service);
    labelEverything(dom.doc);
    press(dom, "Enter");
    await handle.flush();
    const done = dom.doc.getElementById("done");
    expect((done as unknown as { hidden: boolean }).hidden).toBe(false);
    expect(done?.textContent).toContain("session complete");
    expect(done?.textContent).toContain("final accuracy 0.6");
    expect(done?.innerHTML).toContain("<polyline");
    const workbench = dom.doc.getElementById("workbench");
    expect((workbench as unknown as { hidden: boolean }).hidden).toBe(true);
  });

  it("resyncs to the server when the batch was labeled elsewhere", async () => {
    const service = new FakeService(5, 2);
    const { dom, handle } = await boot(service);
    labelEverything(dom.doc);
    const batch = handle.batch as NonNullable<typeof handle.batch>;
    const disagreeing = { ...batch.submission(), u000000: "untrustworthy" as const };
    await service.submitLabels("s000001", batch.token, disagreeing);
    click(dom.doc, "#submit-btn");
    await handle.flush();
    expect(dom.doc.getElementById("banner-text")?.textContent).toContain("already labeled");
    expect(handle.curve?.points).toHaveLength(2);
    expect(handle.batch?.token).toBe("token-1");
    expect(handle.batch?.labeledCount()).toBe(0);
  });
});
