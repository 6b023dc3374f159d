import { describe, expect, it } from "vitest";

import { actionForKey } from "../src/keyboard.js";

describe("actionForKey", () => {
  it("maps T and U to labels in either case", () => {
    expect(actionForKey("t")).toEqual({ kind: "label", label: "trustworthy" });
    expect(actionForKey("T")).toEqual({ kind: "label", label: "trustworthy" });
    expect(actionForKey("u")).toEqual({ kind: "label", label: "untrustworthy" });
    expect(actionForKey("U")).toEqual({ kind: "label", label: "untrustworthy" });
  });

  it("maps arrows to cursor moves", () => {
    expect(actionForKey("ArrowRight")).toEqual({ kind: "move", delta: 1 });
    expect(actionForKey("ArrowDown")).toEqual({ kind: "move", delta: 1 });
    expect(actionForKey("ArrowLeft")).toEqual({ kind: "move", delta: -1 });
    expect(actionForKey("ArrowUp")).toEqual({ kind: "move", delta: -1 });
  });

  it("maps Enter to submit and ignores everything else", () => {
    expect(actionForKey("Enter")).toEqual({ kind: "submit" });
    for (const key of ["a", "x", " ", "Escape", "Tab", "1", "Shift"]) {
      expect(actionForKey(key)).toBeNull();
    }
  });
});
