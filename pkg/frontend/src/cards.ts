/**
 * HTML fragments for the annotation view.
 *
 * Pure string builders so they can be checked without a browser. All
 * server-supplied text is escaped before it touches the DOM; the client
 * displays scores verbatim and never computes any itself.
 */

import { Instance, Label, Progress, ScoreCard, TweetPreview } from "./api.js";

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;")
    .replace(/'/g, "&#39;");
}

export function formatNumber(value: number, digits = 3): string {
  if (Number.isInteger(value)) return value.toString();
  return value
    .toFixed(digits)
    .replace(/0+$/, "")
    .replace(/\.$/, "");
}

function probabilityMarkup(proba: number | null): string {
  if (proba === null) {
    return `<div class="card-prob card-prob-empty">model: no estimate yet</div>`;
  }
  const pct = (proba * 100).toFixed(1);
  const width = Math.round(proba * 100);
  return (
    `<div class="card-prob" title="current model estimate">` +
    `<span class="card-prob-bar"><span class="card-prob-fill" style="width:${width}%"></span></span>` +
    `<span class="card-prob-text">model: ${pct}% trustworthy</span>` +
    `</div>`
  );
}

function scorecardMarkup(card: ScoreCard | null): string {
  if (card === null) {
    return `<div class="card-scores card-scores-empty">no scorecard for this user</div>`;
  }
  const rows: Array<[string, string]> = [
    ["influence", formatNumber(card.influence_score)],
    ["reputation", formatNumber(card.social_reputation)],
    ["credibility", formatNumber(card.tweet_credibility)],
    ["sentiment", formatNumber(card.sentiment_score)],
    ["retweet h-index", card.retweet_hindex.toString()],
    ["like h-index", card.like_hindex.toString()],
    ["tweets", card.basic.total_tweets.toString()],
  ];
  const cells = rows
    .map(([name, value]) => `<div class="score"><dt>${name}</dt><dd>${value}</dd></div>`)
    .join("");
  return `<dl class="card-scores">${cells}</dl>`;
}

function tweetMarkup(tweet: TweetPreview): string {
  const note = tweet.is_retweet_of_other ? " · retweet" : "";
  return (
    `<li class="card-tweet">` +
    `<span class="tweet-text">${escapeHtml(tweet.text)}</span>` +
    `<span class="tweet-meta">${tweet.retweet_count} rt · ${tweet.like_count} likes${note}</span>` +
    `</li>`
  );
}

function featureTable(inst: Instance): string {
  const rows = Object.keys(inst.raw_features)
    .map((name) => {
      const raw = formatNumber(inst.raw_features[name], 4);
      const scaled = formatNumber(inst.features[name], 4);
      return `<tr><td>${escapeHtml(name)}</td><td>${raw}</td><td>${scaled}</td></tr>`;
    })
    .join("");
  return (
    `<details class="card-features"><summary>all features</summary>` +
    `<table><thead><tr><th>feature</th><th>raw</th><th>scaled</th></tr></thead>` +
    `<tbody>${rows}</tbody></table></details>`
  );
}

function labelButton(userId: string, label: Label, picked: Label | undefined, key: string): string {
  const selected = picked === label ? " selected" : "";
  return (
    `<button type="button" class="label-btn label-${label}${selected}"` +
    ` data-action="label" data-uid="${escapeHtml(userId)}" data-label="${label}">` +
    `${label} (${key})</button>`
  );
}

export interface CardOptions {
  index: number;
  total: number;
  picked: Label | undefined;
  focused: boolean;
}

export function renderCard(inst: Instance, opts: CardOptions): string {
  const classes = ["card"];
  if (opts.focused) classes.push("focused");
  if (opts.picked) classes.push("labeled");
  const tweets =
    inst.tweets.length > 0
      ? `<ul class="card-tweets">${inst.tweets.map(tweetMarkup).join("")}</ul>`
      : `<div class="card-tweets-empty">no sample tweets</div>`;
  return (
    `<article class="${classes.join(" ")}" data-action="focus" data-index="${opts.index}">` +
    `<header class="card-head">` +
    `<span class="card-user">${escapeHtml(inst.user_id)}</span>` +
    `<span class="card-pos">${opts.index + 1} / ${opts.total}</span>` +
    `</header>` +
    probabilityMarkup(inst.probability_trustworthy) +
    scorecardMarkup(inst.scorecard) +
    tweets +
    featureTable(inst) +
    `<div class="card-labels">` +
    labelButton(inst.user_id, "trustworthy", opts.picked, "T") +
    labelButton(inst.user_id, "untrustworthy", opts.picked, "U") +
    `</div>` +
    `</article>`
  );
}

export function renderProgress(progress: Progress, locallyLabeled: number, batchSize: number): string {
  return (
    `<div class="progress-batch">batch: ${locallyLabeled} of ${batchSize} cards labeled</div>` +
    `<div class="progress-session">` +
    `labeled ${progress.labeled_count} · held out ${progress.test_count}` +
    ` · pool ${progress.pool_size} · pending ${progress.pending_size}` +
    `</div>`
  );
}
