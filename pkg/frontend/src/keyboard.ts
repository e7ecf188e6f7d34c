/**
 * Keyboard-first controls: number keys pick variants (or labels inside
 * the relabel/reshape pickers), arrows navigate, single letters act.
 * Pure key-to-action mapping; the session store executes the actions.
 */

export type Action =
  | { type: "next" }
  | { type: "prev" }
  | { type: "accept"; index: number }
  | { type: "drop" }
  | { type: "relabel-open" }
  | { type: "relabel-pick"; index: number }
  | { type: "reshape-open" }
  | { type: "reshape-adjust"; edge: "start" | "end"; delta: number }
  | { type: "reshape-label"; index: number }
  | { type: "reshape-commit" }
  | { type: "cancel" }
  | { type: "finalize" };

export type ModeKind = "navigate" | "relabel" | "reshape";

export interface KeyContext {
  mode: ModeKind;
  hasCurrent: boolean;
  variantCount: number;
  labelCount: number;
  openCount: number;
  finalized: boolean;
}

function digit(key: string): number | null {
  if (key.length === 1 && key >= "1" && key <= "9") return Number(key);
  return null;
}

export function handleKey(ctx: KeyContext, key: string): Action | null {
  if (ctx.mode === "relabel") {
    if (key === "Escape") return { type: "cancel" };
    const n = digit(key);
    if (n !== null && n <= ctx.labelCount) return { type: "relabel-pick", index: n - 1 };
    return null;
  }
  if (ctx.mode === "reshape") {
    switch (key) {
      case "Escape":
        return { type: "cancel" };
      case "Enter":
        return { type: "reshape-commit" };
      case "ArrowLeft":
        return { type: "reshape-adjust", edge: "end", delta: -1 };
      case "ArrowRight":
        return { type: "reshape-adjust", edge: "end", delta: +1 };
      case "ArrowUp":
        return { type: "reshape-adjust", edge: "start", delta: -1 };
      case "ArrowDown":
        return { type: "reshape-adjust", edge: "start", delta: +1 };
    }
    const n = digit(key);
    if (n !== null && n <= ctx.labelCount) return { type: "reshape-label", index: n - 1 };
    return null;
  }
  switch (key) {
    case "ArrowRight":
    case "j":
      return { type: "next" };
    case "ArrowLeft":
    case "k":
      return { type: "prev" };
    case "d":
      return ctx.hasCurrent ? { type: "drop" } : null;
    case "l":
      return ctx.hasCurrent ? { type: "relabel-open" } : null;
    case "s":
      return ctx.hasCurrent ? { type: "reshape-open" } : null;
    case "f":
      return ctx.openCount === 0 && !ctx.finalized ? { type: "finalize" } : null;
  }
  const n = digit(key);
  if (n !== null && ctx.hasCurrent && n <= ctx.variantCount) {
    return { type: "accept", index: n - 1 };
  }
  return null;
}
