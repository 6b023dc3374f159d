/**
 * Keyboard shortcuts for the annotation flow.
 *
 * T and U label the focused card, the arrow keys move between cards,
 * and Enter submits once the batch is ready. Everything else is ignored.
 */

import { Label } from "./api.js";

export type KeyAction =
  | { kind: "label"; label: Label }
  | { kind: "move"; delta: -1 | 1 }
  | { kind: "submit" };

export function actionForKey(key: string): KeyAction | null {
  switch (key) {
    case "t":
    case "T":
      return { kind: "label", label: "trustworthy" };
    case "u":
    case "U":
      return { kind: "label", label: "untrustworthy" };
    case "ArrowRight":
    case "ArrowDown":
      return { kind: "move", delta: 1 };
    case "ArrowLeft":
    case "ArrowUp":
      return { kind: "move", delta: -1 };
    case "Enter":
      return { kind: "submit" };
    default:
      return null;
  }
}
