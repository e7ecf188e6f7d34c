/**
 * Deterministic label colors: the same label gets the same color in
 * every session, and all labels of one scheme get visually distinct
 * hues (hash, then probe apart on collision).
 */

function fnv1a(text: string): number {
  let hash = 0x811c9dc5;
  for (let i = 0; i < text.length; i++) {
    hash ^= text.charCodeAt(i);
    hash = Math.imul(hash, 0x01000193) >>> 0;
  }
  return hash >>> 0;
}

const MIN_HUE_GAP = 14;

export function labelColors(labels: string[]): Map<string, string> {
  const taken: number[] = [];
  const out = new Map<string, string>();
  for (const label of labels) {
    let hue = fnv1a(label) % 360;
    while (taken.some((t) => Math.min(Math.abs(t - hue), 360 - Math.abs(t - hue)) < MIN_HUE_GAP)) {
      hue = (hue + 37) % 360;
    }
    taken.push(hue);
    out.set(label, `hsl(${hue}, 70%, 42%)`);
  }
  return out;
}

export const CONFLICT_COLOR = "hsl(0, 0%, 45%)";
