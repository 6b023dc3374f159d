/**
 * SVG rendering of a learning curve.
 *
 * The output is a plain markup string: no accuracy point yields a
 * placeholder, a single point yields a lone marker, and two or more
 * points yield a polyline through all of them. Accuracy is plotted on
 * a fixed [0, 1] axis so curves from different sessions compare directly.
 */

import { CurvePoint } from "./api.js";

const MARGIN = { top: 14, right: 16, bottom: 26, left: 44 };

function round1(v: number): number {
  return Math.round(v * 10) / 10;
}

/** Pixel coordinates for each point, in input order. */
export function curveCoordinates(
  points: readonly CurvePoint[],
  width: number,
  height: number,
): Array<[number, number]> {
  const innerW = width - MARGIN.left - MARGIN.right;
  const innerH = height - MARGIN.top - MARGIN.bottom;
  const iterations = points.map((p) => p.iteration);
  const lo = Math.min(...iterations);
  const hi = Math.max(...iterations);
  const span = hi - lo;
  return points.map((p) => {
    const x =
      span === 0
        ? MARGIN.left + innerW / 2
        : MARGIN.left + ((p.iteration - lo) / span) * innerW;
    const y = MARGIN.top + (1 - p.accuracy) * innerH;
    return [round1(x), round1(y)];
  });
}

function axisMarkup(width: number, height: number): string {
  const innerW = width - MARGIN.left - MARGIN.right;
  const innerH = height - MARGIN.top - MARGIN.bottom;
  const parts: string[] = [];
  for (const frac of [0, 0.25, 0.5, 0.75, 1]) {
    const y = round1(MARGIN.top + (1 - frac) * innerH);
    parts.push(
      `<line class="curve-grid" x1="${MARGIN.left}" y1="${y}" x2="${MARGIN.left + innerW}" y2="${y}"/>`,
      `<text class="curve-tick" x="${MARGIN.left - 6}" y="${y + 3}" text-anchor="end">${frac.toFixed(2)}</text>`,
    );
  }
  return parts.join("");
}

function xLabels(points: readonly CurvePoint[], coords: Array<[number, number]>, height: number): string {
  const y = height - 8;
  const first = points[0];
  const last = points[points.length - 1];
  const parts = [
    `<text class="curve-tick" x="${coords[0][0]}" y="${y}" text-anchor="middle">${first.iteration}</text>`,
  ];
  if (points.length > 1) {
    parts.push(
      `<text class="curve-tick" x="${coords[coords.length - 1][0]}" y="${y}" text-anchor="middle">${last.iteration}</text>`,
    );
  }
  return parts.join("");
}

export function renderCurve(points: readonly CurvePoint[], width = 560, height = 240): string {
  const open = `<svg class="curve" viewBox="0 0 ${width} ${height}" role="img" aria-label="learning curve">`;
  if (points.length === 0) {
    const placeholder = `<text class="curve-placeholder" x="${width / 2}" y="${height / 2}" text-anchor="middle">no accuracy points yet</text>`;
    return `${open}${placeholder}</svg>`;
  }
  const coords = curveCoordinates(points, width, height);
  const parts = [axisMarkup(width, height)];
  if (points.length === 1) {
    const [x, y] = coords[0];
    parts.push(`<circle class="curve-marker" cx="${x}" cy="${y}" r="4"/>`);
  } else {
    const path = coords.map(([x, y]) => `${x},${y}`).join(" ");
    parts.push(`<polyline class="curve-line" fill="none" points="${path}"/>`);
    for (const [x, y] of coords) {
      parts.push(`<circle class="curve-dot" cx="${x}" cy="${y}" r="2.5"/>`);
    }
  }
  parts.push(xLabels(points, coords, height));
  return `${open}${parts.join("")}</svg>`;
}
