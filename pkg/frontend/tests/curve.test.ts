import { describe, expect, it } from "vitest";

import { curveCoordinates, renderCurve } from "../src/curve.js";
import { makePoints } from "./helpers.js";

function polylinePairs(svg: string): Array<[number, number]> {
  const match = svg.match(/<polyline[^>]*points="([^"]*)"/);
  if (!match) return [];
  return match[1].split(" ").map((pair) => {
    const [x, y] = pair.split(",").map(Number);
    return [x, y];
  });
}

describe("renderCurve shapes", () => {
  it("renders a placeholder when no point exists", () => {
    const svg = renderCurve([]);
    expect(svg).toContain("curve-placeholder");
    expect(svg).toContain("no accuracy points yet");
    expect(svg).not.toContain("<polyline");
    expect(svg).not.toContain("curve-marker");
  });

  it("renders a lone marker for a single point", () => {
    const svg = renderCurve(makePoints([0.62]));
    expect(svg).toContain("curve-marker");
    expect(svg).not.toContain("<polyline");
    expect(svg).not.toContain("curve-placeholder");
  });

  it("renders a polyline through k points for k >= 2", () => {
    for (const k of [2, 5, 11]) {
      const accs = Array.from({ length: k }, (_, i) => 0.5 + i / (4 * k));
      const svg = renderCurve(makePoints(accs));
      expect(polylinePairs(svg)).toHaveLength(k);
      expect(svg).not.toContain("curve-marker");
      expect(svg).not.toContain("curve-placeholder");
    }
  });
});

describe("curve geometry", () => {
  it("spreads iterations left to right", () => {
    const coords = curveCoordinates(makePoints([0.5, 0.6, 0.7, 0.8]), 560, 240);
    const xs = coords.map(([x]) => x);
    for (let i = 1; i < xs.length; i += 1) {
      expect(xs[i]).toBeGreaterThan(xs[i - 1]);
    }
  });

  it("maps higher accuracy to smaller y on a fixed unit axis", () => {
    const coords = curveCoordinates(makePoints([0.0, 1.0, 0.5]), 560, 240);
    const [, yZero] = coords[0];
    const [, yOne] = coords[1];
    const [, yHalf] = coords[2];
    expect(yOne).toBeLessThan(yHalf);
    expect(yHalf).toBeLessThan(yZero);
    expect(Math.abs((yZero + yOne) / 2 - yHalf)).toBeLessThan(0.2);
  });

  it("centers a single point horizontally", () => {
    const [[x]] = curveCoordinates(makePoints([0.9]), 560, 240);
    expect(x).toBeGreaterThan(200);
    expect(x).toBeLessThan(360);
  });

  it("matches the polyline attribute to the computed coordinates", () => {
    const points = makePoints([0.4, 0.55, 0.81]);
    const svg = renderCurve(points, 560, 240);
    expect(polylinePairs(svg)).toEqual(curveCoordinates(points, 560, 240));
  });
});
