/**
 * Application controller: wires the service client to the DOM.
 *
 * The page is a single annotation view. A batch is fetched, labeled card
 * by card (mouse or keyboard), and submitted as a whole; the learning
 * curve is re-fetched after every acknowledged submission. Nothing in the
 * session state is updated optimistically: progress and accuracy always
 * come from a server response. A failed request raises a banner with a
 * retry action and leaves the local label picks untouched.
 */

import { ApiError, CurveView, Label, ServiceClient, SessionConfig } from "./api.js";
import { renderCard, renderProgress, escapeHtml, formatNumber } from "./cards.js";
import { renderCurve } from "./curve.js";
import { actionForKey } from "./keyboard.js";
import { BatchState } from "./state.js";

export interface AppHandle {
  createSession(config: SessionConfig): Promise<void>;
  attachSession(sessionId: string): Promise<void>;
  loadBatch(): Promise<void>;
  submit(): Promise<void>;
  /** Wait until every operation started so far has settled. */
  flush(): Promise<void>;
  readonly sessionId: string | null;
  readonly batch: BatchState | null;
  readonly curve: CurveView | null;
}

const SKELETON = `
<header class="top">
  <h1>trust annotation</h1>
  <div id="session-info" class="session-info"></div>
</header>
<div id="banner" class="banner" hidden>
  <span id="banner-text"></span>
  <button type="button" id="banner-retry" data-action="retry" hidden>retry</button>
</div>
<section id="setup" class="setup">
  <h2>start a session</h2>
  <div class="setup-grid">
    <label>learner
      <select id="setup-learner">
        <option value="forest">forest</option>
        <option value="svm">svm</option>
      </select>
    </label>
    <label>strategy
      <select id="setup-strategy">
        <option value="uncertainty">uncertainty</option>
        <option value="margin">margin</option>
        <option value="entropy">entropy</option>
        <option value="random">random</option>
      </select>
    </label>
    <label>batch size
      <input id="setup-batch-size" type="number" min="1" value="10">
    </label>
    <label>seed
      <input id="setup-seed" type="number" value="0">
    </label>
  </div>
  <button type="button" data-action="create">start session</button>
  <h2>or resume one</h2>
  <label>session id <input id="setup-attach" type="text" placeholder="s000001"></label>
  <button type="button" data-action="attach">attach</button>
</section>
<main id="workbench" hidden>
  <section id="cards" class="cards"></section>
  <aside class="side">
    <div id="progress" class="progress"></div>
    <div id="curve-box" class="curve-box"></div>
    <div id="status" class="status"></div>
    <button type="button" id="submit-btn" data-action="submit" disabled>submit batch</button>
    <p class="hint">T trustworthy · U untrustworthy · arrows move · Enter submits</p>
  </aside>
</main>
<section id="done" class="done" hidden></section>
`;

function errorText(err: unknown): string {
  if (err instanceof ApiError) return err.message;
  if (err instanceof Error) return err.message;
  return String(err);
}

class App implements AppHandle {
  sessionId: string | null = null;
  batch: BatchState | null = null;
  curve: CurveView | null = null;

  private completed = false;
  private busy = false;
  private statusLine = "";
  private retryOp: (() => Promise<void>) | null = null;
  private lastOp: Promise<void> | null = null;

  private readonly root: HTMLElement;

  constructor(
    private readonly doc: Document,
    private readonly client: ServiceClient,
  ) {
    const root = doc.getElementById("app");
    if (!root) throw new Error("missing #app container");
    this.root = root;
    root.innerHTML = SKELETON;
    this.bindEvents();
    this.run(() => this.showHealth());
  }

  private bindEvents(): void {
    this.root.addEventListener("click", (ev) => {
      const target = ev.target as Element | null;
      const el = target && target.closest ? target.closest("[data-action]") : null;
      if (!el) return;
      this.dispatch(el.getAttribute("data-action") ?? "", el);
    });
    this.doc.addEventListener("keydown", (ev) => {
      this.handleKey(ev as KeyboardEvent);
    });
  }

  private dispatch(action: string, el: Element): void {
    if (action === "create") {
      this.run(() => this.createSession(this.readConfig()));
    } else if (action === "attach") {
      const field = this.doc.getElementById("setup-attach") as HTMLInputElement | null;
      const sessionId = field ? field.value.trim() : "";
      if (!sessionId) {
        this.showBanner("enter a session id to attach to", null);
        return;
      }
      this.run(() => this.attachSession(sessionId));
    } else if (action === "label") {
      const uid = el.getAttribute("data-uid");
      const label = el.getAttribute("data-label") as Label | null;
      if (this.batch && uid && label) {
        this.batch.setLabelFor(uid, label);
        this.renderCards();
      }
    } else if (action === "focus") {
      const index = Number(el.getAttribute("data-index"));
      if (this.batch && Number.isFinite(index)) {
        this.batch.focus(index);
        this.renderCards();
      }
    } else if (action === "submit") {
      this.run(() => this.submit());
    } else if (action === "retry") {
      const op = this.retryOp;
      this.hideBanner();
      if (op) this.run(op);
    }
  }

  private handleKey(ev: KeyboardEvent): void {
    if (!this.batch || this.completed) return;
    const target = ev.target as { tagName?: string } | null;
    const tag = target && typeof target.tagName === "string" ? target.tagName.toLowerCase() : "";
    if (tag === "input" || tag === "select" || tag === "textarea") return;
    const action = actionForKey(ev.key);
    if (!action) return;
    if (typeof ev.preventDefault === "function") ev.preventDefault();
    if (action.kind === "label") {
      this.batch.setLabel(action.label);
      this.batch.focusNextUnlabeled();
      this.renderCards();
    } else if (action.kind === "move") {
      this.batch.move(action.delta);
      this.renderCards();
    } else {
      this.run(() => this.submit());
    }
  }

  private readConfig(): SessionConfig {
    const pick = (id: string) => this.doc.getElementById(id) as HTMLInputElement | HTMLSelectElement | null;
    const learner = pick("setup-learner");
    const strategy = pick("setup-strategy");
    const batchSize = pick("setup-batch-size");
    const seed = pick("setup-seed");
    return {
      learner: learner ? learner.value : "forest",
      strategy: strategy ? strategy.value : "uncertainty",
      batch_size: batchSize ? Number(batchSize.value) || 1 : 10,
      seed: seed ? Number(seed.value) || 0 : 0,
    };
  }

  private run(op: () => Promise<void>): Promise<void> {
    const prev = this.lastOp ?? Promise.resolve();
    const next = prev
      .catch(() => undefined)
      .then(op)
      .catch((err) => {
        this.showBanner(errorText(err), null);
      });
    this.lastOp = next;
    return next;
  }

  async flush(): Promise<void> {
    let prev: Promise<void> | null = null;
    while (this.lastOp && this.lastOp !== prev) {
      prev = this.lastOp;
      await prev.catch(() => undefined);
    }
  }

  private async showHealth(): Promise<void> {
    try {
      const health = await this.client.health();
      this.setText("session-info", `dataset: ${health.dataset}`);
    } catch {
      this.setText("session-info", "service unreachable");
    }
  }

  async createSession(config: SessionConfig): Promise<void> {
    let created;
    try {
      created = await this.client.createSession(config);
    } catch (err) {
      if (err instanceof ApiError) {
        this.showBanner(`could not create session: ${err.message}`, null);
      } else {
        this.showBanner(`could not reach the service: ${errorText(err)}`, () =>
          this.createSession(config),
        );
      }
      return;
    }
    this.sessionId = created.session_id;
    this.completed = false;
    this.batch = null;
    this.statusLine = `session ${created.session_id} started, initial accuracy ${formatNumber(created.initial_accuracy)}`;
    this.hideBanner();
    this.enterWorkbench();
    await this.refreshCurve();
    await this.loadBatch();
  }

  async attachSession(sessionId: string): Promise<void> {
    let curve;
    try {
      curve = await this.client.getCurve(sessionId);
    } catch (err) {
      if (err instanceof ApiError) {
        this.showBanner(`could not attach: ${err.message}`, null);
      } else {
        this.showBanner(`could not reach the service: ${errorText(err)}`, () =>
          this.attachSession(sessionId),
        );
      }
      return;
    }
    this.sessionId = sessionId;
    this.curve = curve;
    this.batch = null;
    this.completed = curve.completed;
    this.statusLine = `attached to ${sessionId}`;
    this.hideBanner();
    this.enterWorkbench();
    this.renderCurvePanel();
    if (this.completed) {
      this.showDone();
    } else {
      await this.loadBatch();
    }
  }

  async loadBatch(): Promise<void> {
    if (!this.sessionId) return;
    let view;
    try {
      view = await this.client.getBatch(this.sessionId);
    } catch (err) {
      if (err instanceof ApiError) {
        this.showBanner(`could not load batch: ${err.message}`, () => this.loadBatch());
      } else {
        // keep current picks: a refetch after recovery resumes where we were
        this.showBanner(`could not reach the service: ${errorText(err)}`, () => this.loadBatch());
      }
      return;
    }
    if (view.completed) {
      this.batch = null;
      this.completed = true;
      await this.refreshCurve();
      this.showDone();
      return;
    }
    const next = new BatchState(view);
    if (this.batch && this.batch.token === next.token) {
      next.mergeFrom(this.batch.labelsSnapshot());
    }
    this.batch = next;
    this.completed = false;
    this.hideBanner();
    this.renderCards();
  }

  async submit(): Promise<void> {
    if (!this.sessionId || !this.batch || this.busy || !this.batch.isComplete()) return;
    this.busy = true;
    this.renderControls();
    let result;
    try {
      result = await this.client.submitLabels(this.sessionId, this.batch.token, this.batch.submission());
    } catch (err) {
      this.busy = false;
      if (err instanceof ApiError) {
        // the server disagrees about this batch; resync to its view
        this.showBanner(`submission rejected: ${err.message}`, null);
        await this.refreshCurve();
        await this.loadBatch();
      } else {
        this.showBanner(`could not reach the service: ${errorText(err)}`, () => this.submit());
        this.renderControls();
      }
      return;
    }
    this.busy = false;
    this.batch = null;
    const note = result.replayed ? " (already recorded)" : "";
    this.statusLine = `iteration ${result.iteration}: accuracy ${formatNumber(result.accuracy)} with ${result.labeled_count} labels${note}`;
    this.hideBanner();
    await this.refreshCurve();
    if (result.completed) {
      this.completed = true;
      this.showDone();
    } else {
      await this.loadBatch();
    }
  }

  private async refreshCurve(): Promise<void> {
    if (!this.sessionId) return;
    try {
      this.curve = await this.client.getCurve(this.sessionId);
      this.renderCurvePanel();
    } catch (err) {
      this.showBanner(`could not refresh the curve: ${errorText(err)}`, () => this.refreshCurve());
    }
  }

  private enterWorkbench(): void {
    this.setHidden("setup", true);
    this.setHidden("done", true);
    this.setHidden("workbench", false);
    if (this.sessionId) {
      const info = this.doc.getElementById("session-info");
      if (info) {
        const existing = info.textContent ?? "";
        const dataset = existing.startsWith("dataset:") ? `${existing} · ` : "";
        info.textContent = `${dataset}session ${this.sessionId}`;
      }
    }
    this.renderCards();
  }

  private showDone(): void {
    this.setHidden("workbench", true);
    this.setHidden("done", false);
    const done = this.doc.getElementById("done");
    if (!done) return;
    const points = this.curve ? this.curve.points : [];
    const last = points.length > 0 ? points[points.length - 1] : null;
    const summary = last
      ? `final accuracy ${formatNumber(last.accuracy)} after ${last.labeled_count} labels over ${last.iteration} iterations`
      : "no accuracy points recorded";
    const early = this.curve && this.curve.stopped_early ? `<p>stopped early: accuracy plateaued</p>` : "";
    done.innerHTML =
      `<h2>session complete</h2>` +
      `<p>${escapeHtml(summary)}</p>` +
      early +
      `<div class="curve-box">${renderCurve(points)}</div>`;
  }

  private renderCards(): void {
    const box = this.doc.getElementById("cards");
    if (!box) return;
    if (!this.batch) {
      box.innerHTML = `<p class="cards-empty">no pending batch</p>`;
      this.renderControls();
      return;
    }
    const batch = this.batch;
    box.innerHTML = batch.instances
      .map((inst, index) =>
        renderCard(inst, {
          index,
          total: batch.size,
          picked: batch.labelOf(inst.user_id),
          focused: index === batch.cursor,
        }),
      )
      .join("");
    this.renderControls();
  }

  private renderControls(): void {
    const progress = this.doc.getElementById("progress");
    if (progress) {
      progress.innerHTML = this.batch
        ? renderProgress(this.batch.view.progress, this.batch.labeledCount(), this.batch.size)
        : "";
    }
    const btn = this.doc.getElementById("submit-btn") as HTMLButtonElement | null;
    if (btn) {
      const ready = this.batch !== null && this.batch.isComplete() && !this.busy;
      btn.disabled = !ready;
      btn.textContent = this.busy ? "submitting..." : "submit batch";
    }
    this.setText("status", this.statusLine);
  }

  private renderCurvePanel(): void {
    const box = this.doc.getElementById("curve-box");
    if (!box) return;
    const curve = this.curve;
    if (!curve) {
      box.innerHTML = renderCurve([]);
      return;
    }
    const caption =
      `<div class="curve-caption">${escapeHtml(curve.learner)} · ${escapeHtml(curve.strategy)}` +
      ` · seed ${curve.seed} · ${curve.points.length} points</div>`;
    box.innerHTML = renderCurve(curve.points) + caption;
  }

  private showBanner(message: string, retry: (() => Promise<void>) | null): void {
    this.retryOp = retry;
    this.setHidden("banner", false);
    this.setText("banner-text", message);
    const btn = this.doc.getElementById("banner-retry");
    if (btn) (btn as HTMLElement).hidden = retry === null;
  }

  private hideBanner(): void {
    this.retryOp = null;
    this.setHidden("banner", true);
  }

  private setHidden(id: string, hidden: boolean): void {
    const el = this.doc.getElementById(id);
    if (el) (el as HTMLElement).hidden = hidden;
  }

  private setText(id: string, text: string): void {
    const el = this.doc.getElementById(id);
    if (el) el.textContent = text;
  }
}

export function initApp(doc: Document, client: ServiceClient): AppHandle {
  return new App(doc, client);
}
