/**
 * End-to-end round trip against a live service instance.
 *
 * A fixture corpus is generated and served by the command line tools, then
 * the page is booted in an emulated browser window pointed at the real
 * HTTP API. The flow under test: load a batch, label every card, submit
 * once (a second click and a raw replay must not create a second step),
 * and watch the learning curve grow by exactly one point.
 */

import { execFileSync, spawn, ChildProcess } from "node:child_process";
import { mkdtempSync, readFileSync, rmSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";

import { Window } from "happy-dom";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import { initApp } from "../src/app.js";

const PORT = 8741;
const BASE = `http://127.0.0.1:${PORT}`;
const BATCH_SIZE = 5;

let workDir: string;
let server: ChildProcess | null = null;
let serverLog = "";

function cli(args: string[]): void {
  execFileSync("trustbench", args, { stdio: ["ignore", "pipe", "pipe"] });
}

async function waitHealthy(): Promise<void> {
  const deadline = Date.now() + 90000;
  let lastError: unknown = null;
  while (Date.now() < deadline) {
    try {
      const res = await fetch(`${BASE}/healthz`);
      if (res.ok) return;
    } catch (err) {
      lastError = err;
    }
    await new Promise((resolve) => setTimeout(resolve, 300));
  }
  throw new Error(`service never became healthy: ${lastError}\n${serverLog}`);
}

beforeAll(async () => {
  workDir = mkdtempSync(join(tmpdir(), "annotation-ui-"));
  const users = join(workDir, "users.jsonl");
  const tweets = join(workDir, "tweets.jsonl");
  const labels = join(workDir, "labels.csv");
  const cards = join(workDir, "scorecards.csv");
  const dataset = join(workDir, "dataset.csv");
  const seedLabels = join(workDir, "seed_labels.csv");

  cli(["synth", "--n", "40", "--seed", "21", "--users-out", users, "--tweets-out", tweets, "--labels-out", labels]);
  cli(["score", "--users", users, "--tweets", tweets, "--out", cards]);
  const lines = readFileSync(labels, "utf-8").trim().split("\n");
  writeFileSync(seedLabels, lines.slice(0, 17).join("\n") + "\n");
  cli([
    "build-dataset",
    "--scorecards", cards,
    "--labels", seedLabels,
    "--out", dataset,
    "--test-fraction", "0.5",
    "--seed", "1",
  ]);

  server = spawn(
    "trustbench",
    [
      "serve",
      "--dataset", dataset,
      "--users", users,
      "--tweets", tweets,
      "--listen", `127.0.0.1:${PORT}`,
      "--data-dir", join(workDir, "sessions"),
    ],
    { stdio: ["ignore", "pipe", "pipe"] },
  );
  server.stdout?.on("data", (chunk) => (serverLog += chunk));
  server.stderr?.on("data", (chunk) => (serverLog += chunk));
  await waitHealthy();
});

afterAll(() => {
  if (server) server.kill("SIGTERM");
  if (workDir) rmSync(workDir, { recursive: true, force: true });
});

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

function setField(doc: Dom["doc"], id: string, value: string): void {
  const el = doc.getElementById(id);
  if (!el) throw new Error(`no field ${id}`);
  (el as unknown as { value: string }).value = value;
}

describe("full annotation round trip", () => {
  it("labels one batch in the page and advances the curve by one point", async () => {
    const dom = makeDom();
    const client = new ApiClient(BASE);
    const handle = initApp(dom.doc as unknown as Document, client);
    await handle.flush();
    expect(dom.doc.getElementById("session-info")?.textContent).toContain("dataset:");

    setField(dom.doc, "setup-batch-size", String(BATCH_SIZE));
    setField(dom.doc, "setup-seed", "0");
    click(dom.doc, '[data-action="create"]');
    await handle.flush();

    const sessionId = handle.sessionId as string;
    expect(sessionId).toMatch(/^s\d{6}$/);
    expect(dom.doc.querySelectorAll("article.card")).toHaveLength(BATCH_SIZE);
    const before = await client.getCurve(sessionId);
    expect(before.points).toHaveLength(1);

    // one card via the keyboard, the rest by clicking, mixing the labels
    dom.doc.dispatchEvent(new dom.win.KeyboardEvent("keydown", { key: "u", bubbles: true }));
    for (let guard = 0; guard < 50; guard += 1) {
      const btn = dom.doc.querySelector('article.card:not(.labeled) button[data-label="trustworthy"]');
      if (!btn) break;
      (btn as unknown as { click(): void }).click();
    }
    const batch = handle.batch as NonNullable<typeof handle.batch>;
    expect(batch.isComplete()).toBe(true);
    const token = batch.token;
    const submitted = batch.submission();
    const submitBtn = dom.doc.getElementById("submit-btn") as unknown as {
      click(): void;
      disabled: boolean;
    };
    expect(submitBtn.disabled).toBe(false);

    submitBtn.click();
    submitBtn.click();
    await handle.flush();

    const after = await client.getCurve(sessionId);
    expect(after.points).toHaveLength(2);
    expect(after.points[1].labeled_count).toBe(before.points[0].labeled_count + BATCH_SIZE);

    // the next batch is on screen with a fresh token and no picks
    expect(dom.doc.querySelectorAll("article.card")).toHaveLength(BATCH_SIZE);
    expect(handle.batch?.token).not.toBe(token);
    expect(handle.batch?.labeledCount()).toBe(0);
    const curveBox = dom.doc.getElementById("curve-box")?.innerHTML ?? "";
    expect(curveBox).toContain("<polyline");

    // a raw replay of the already-recorded batch is acknowledged, not re-applied
    const replay = await client.submitLabels(sessionId, token, submitted);
    expect(replay.replayed).toBe(true);
    expect(replay.iteration).toBe(1);
    const unchanged = await client.getCurve(sessionId);
    expect(unchanged.points).toHaveLength(2);
  });

  it("serves scorecards and batch payload fields the cards rely on", async () => {
    const client = new ApiClient(BASE);
    const created = await client.createSession({
      learner: "forest",
      strategy: "entropy",
      batch_size: 3,
      seed: 1,
      learner_params: { n_trees: 5, max_depth: 4 },
    });
    const view = await client.getBatch(created.session_id);
    expect(view.completed).toBe(false);
    expect(view.instances).toHaveLength(3);
    for (const inst of view.instances) {
      expect(typeof inst.user_id).toBe("string");
      expect(inst.scorecard?.user_id).toBe(inst.user_id);
      expect(inst.probability_trustworthy).toBeGreaterThanOrEqual(0);
      expect(inst.probability_trustworthy).toBeLessThanOrEqual(1);
      expect(Object.keys(inst.features).length).toBeGreaterThan(0);
      const card = await client.getScorecard(inst.user_id);
      expect(card.influence_score).toBe(inst.scorecard?.influence_score);
    }
  });
});
