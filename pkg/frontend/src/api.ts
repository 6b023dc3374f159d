/**
 * Typed client for the annotation service HTTP API.
 *
 * Every method maps to one endpoint and returns the parsed JSON body.
 * Non-2xx responses become ApiError with the server's detail payload;
 * network failures propagate as whatever the fetch implementation threw.
 */

export type Label = "trustworthy" | "untrustworthy";

export interface Progress {
  labeled_count: number;
  test_count: number;
  pool_size: number;
  pending_size: number;
}

export interface TweetPreview {
  tweet_id: string;
  text: string;
  retweet_count: number;
  like_count: number;
  is_retweet_of_other: boolean;
}

export interface BasicFeatures {
  total_tweets: number;
  retweet_ratio: number;
  liked_ratio: number;
  url_ratio: number;
  hashtag_ratio: number;
  mention_ratio: number;
  original_content_ratio: number;
}

export interface SentimentCounts {
  positive: number;
  neutral: number;
  negative: number;
}

export interface ScoreCard {
  user_id: string;
  basic: BasicFeatures;
  counts: SentimentCounts;
  sentiment_score: number;
  social_reputation: number;
  retweet_hindex: number;
  like_hindex: number;
  tweet_credibility: number;
  influence_score: number;
}

export interface Instance {
  user_id: string;
  features: Record<string, number>;
  raw_features: Record<string, number>;
  scorecard: ScoreCard | null;
  tweets: TweetPreview[];
  probability_trustworthy: number | null;
}

export interface BatchView {
  session_id: string;
  batch_token: string | null;
  completed: boolean;
  instances: Instance[];
  progress: Progress;
}

export interface CurvePoint {
  iteration: number;
  labeled_count: number;
  accuracy: number;
}

export interface CurveView {
  session_id: string;
  learner: string;
  strategy: string;
  seed: number;
  points: CurvePoint[];
  stopped_early: boolean;
  completed: boolean;
}

export interface SessionConfig {
  learner?: string;
  strategy?: string;
  batch_size?: number;
  seed?: number;
  max_iterations?: number;
  stop_threshold?: number;
  patience?: number;
  learner_params?: Record<string, unknown>;
  dataset?: string;
}

export interface SessionCreated {
  session_id: string;
  batch_token: string;
  pending_batch_size: number;
  initial_accuracy: number;
  progress: Progress;
}

export interface SubmitResult {
  session_id: string;
  iteration: number;
  labeled_count: number;
  accuracy: number;
  completed: boolean;
  stopped_early: boolean;
  next_batch_token: string | null;
  next_batch_size: number;
  replayed: boolean;
}

export interface Health {
  status: string;
  dataset: string;
  sessions: number;
}

/** The service surface the application code depends on. */
export interface ServiceClient {
  health(): Promise<Health>;
  createSession(config: SessionConfig): Promise<SessionCreated>;
  getBatch(sessionId: string): Promise<BatchView>;
  submitLabels(
    sessionId: string,
    batchToken: string,
    labels: Record<string, Label>,
  ): Promise<SubmitResult>;
  getCurve(sessionId: string): Promise<CurveView>;
  getScorecard(userId: string): Promise<ScoreCard>;
}

export class ApiError extends Error {
  readonly status: number;
  readonly detail: unknown;

  constructor(status: number, detail: unknown) {
    super(describeDetail(status, detail));
    this.name = "ApiError";
    this.status = status;
    this.detail = detail;
  }
}

function describeDetail(status: number, detail: unknown): string {
  if (typeof detail === "string") return detail;
  if (detail && typeof detail === "object") {
    const message = (detail as { message?: unknown }).message;
    if (typeof message === "string") return message;
    return `request failed with status ${status}: ${JSON.stringify(detail)}`;
  }
  return `request failed with status ${status}`;
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiClient implements ServiceClient {
  private readonly baseUrl: string;
  private readonly fetchFn: FetchLike;

  constructor(baseUrl = "", fetchFn?: FetchLike) {
    this.baseUrl = baseUrl.replace(/\/$/, "");
    this.fetchFn = fetchFn ?? ((input, init) => fetch(input, init));
  }

  health(): Promise<Health> {
    return this.request<Health>("GET", "/healthz");
  }

  createSession(config: SessionConfig): Promise<SessionCreated> {
    return this.request<SessionCreated>("POST", "/sessions", config);
  }

  getBatch(sessionId: string): Promise<BatchView> {
    return this.request<BatchView>("GET", `/sessions/${sessionId}/batch`);
  }

  submitLabels(
    sessionId: string,
    batchToken: string,
    labels: Record<string, Label>,
  ): Promise<SubmitResult> {
    return this.request<SubmitResult>("POST", `/sessions/${sessionId}/labels`, {
      batch_token: batchToken,
      labels,
    });
  }

  getCurve(sessionId: string): Promise<CurveView> {
    return this.request<CurveView>("GET", `/sessions/${sessionId}/curve`);
  }

  getScorecard(userId: string): Promise<ScoreCard> {
    return this.request<ScoreCard>("GET", `/users/${userId}/scorecard`);
  }

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const init: RequestInit = { method };
    if (body !== undefined) {
      init.headers = { "content-type": "application/json" };
      init.body = JSON.stringify(body);
    }
    const res = await this.fetchFn(this.baseUrl + path, init);
    const payload = await parseBody(res);
    if (!res.ok) {
      const detail =
        payload && typeof payload === "object" && "detail" in (payload as object)
          ? (payload as { detail: unknown }).detail
          : payload;
      throw new ApiError(res.status, detail);
    }
    return payload as T;
  }
}

async function parseBody(res: Response): Promise<unknown> {
  const text = await res.text();
  if (!text) return null;
  try {
    return JSON.parse(text);
  } catch {
    return text;
  }
}
