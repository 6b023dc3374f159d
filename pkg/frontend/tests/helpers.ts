import { BatchView, CurvePoint, Instance, Progress } from "../src/api.js";

export function makeInstance(userId: string, proba: number | null = 0.5): Instance {
  return {
    user_id: userId,
    features: { retweet_ratio: 0.25, followers_count: 0.5 },
    raw_features: { retweet_ratio: 0.25, followers_count: 120 },
    scorecard: null,
    tweets: [],
    probability_trustworthy: proba,
  };
}

export function makeProgress(overrides: Partial<Progress> = {}): Progress {
  return { labeled_count: 8, test_count: 8, pool_size: 19, pending_size: 5, ...overrides };
}

export function makeBatchView(
  n: number,
  token = "tok0000000000001",
  sessionId = "s000001",
): BatchView {
  return {
    session_id: sessionId,
    batch_token: token,
    completed: false,
    instances: Array.from({ length: n }, (_, i) => makeInstance(`u${String(i).padStart(6, "0")}`)),
    progress: makeProgress({ pending_size: n }),
  };
}

export function makePoints(accuracies: number[]): CurvePoint[] {
  return accuracies.map((accuracy, iteration) => ({
    iteration,
    labeled_count: 8 + iteration * 5,
    accuracy,
  }));
}
