/**
 * Thin DOM layer over the session store. All highlighting goes through
 * the scalar-offset converters; this file owns no workflow logic.
 */
import { CONFLICT_COLOR, labelColors } from "./colors.js";
import { scalarToUtf16 } from "./offsets.js";
import { SessionStore } from "./session.js";
import type { ConflictOut, DocOut, SpanOut } from "./types.js";

function el(tag: string, className?: string, text?: string): HTMLElement {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

interface Segment {
  start: number;
  end: number;
  label: string | null;
  conflict: boolean;
}

/** Cut [windowStart, windowEnd) into plain and highlighted segments. */
export function segment(
  windowStart: number,
  windowEnd: number,
  spans: { start: number; end: number; label: string; conflict: boolean }[],
): Segment[] {
  const cuts = new Set<number>([windowStart, windowEnd]);
  for (const span of spans) {
    if (span.end > windowStart && span.start < windowEnd) {
      cuts.add(Math.max(span.start, windowStart));
      cuts.add(Math.min(span.end, windowEnd));
    }
  }
  const points = [...cuts].sort((a, b) => a - b);
  const segments: Segment[] = [];
  for (let i = 0; i + 1 < points.length; i++) {
    const [s, e] = [points[i]!, points[i + 1]!];
    const hit = spans.find((span) => span.start <= s && span.end >= e);
    segments.push({
      start: s,
      end: e,
      label: hit ? hit.label : null,
      conflict: hit?.conflict ?? false,
    });
  }
  return segments;
}

function renderWindow(
  doc: DocOut,
  windowStart: number,
  windowEnd: number,
  colors: Map<string, string>,
  focus?: { start: number; end: number },
): HTMLElement {
  const container = el("p", "doc-window");
  const spans = doc.spans.map((s: SpanOut) => ({
    start: s.start,
    end: s.end,
    label: s.label === "???" ? (s.candidate_label ?? "???") : s.label,
    conflict: s.label === "???",
  }));
  const u = (i: number) => scalarToUtf16(doc.text, i);
  for (const seg of segment(windowStart, windowEnd, spans)) {
    const text = doc.text.slice(u(seg.start), u(seg.end));
    if (seg.label === null) {
      container.append(text);
      continue;
    }
    const mark = el("mark", seg.conflict ? "span conflict" : "span agreed", text);
    mark.style.borderBottom = `3px ${seg.conflict ? "dashed" : "solid"} ${
      colors.get(seg.label) ?? CONFLICT_COLOR
    }`;
    mark.title = seg.label;
    if (focus && seg.start >= focus.start && seg.end <= focus.end) {
      mark.classList.add("focus");
    }
    container.append(mark);
  }
  return container;
}

export async function render(root: HTMLElement, store: SessionStore): Promise<void> {
  root.replaceChildren();
  const project = store.project;
  if (!project) {
    root.append(el("p", "hint", "loading project..."));
    return;
  }
  const colors = labelColors(project.labels);
  const progress = store.progress();

  const header = el("header");
  header.append(el("h1", undefined, `${project.name} — iteration ${store.iterationIndex}`));
  header.append(
    el(
      "p",
      "progress",
      `conflicts resolved: ${progress.resolved}/${progress.total}` +
        (store.finalized ? " — FINALIZED" : ""),
    ),
  );
  root.append(header);

  if (store.error) {
    root.append(el("p", "error", store.error));
  }

  if (store.finalized) {
    root.append(el("p", "hint", "Iteration finalized; the gold data is stored."));
    return;
  }
  if (progress.open === 0) {
    root.append(el("p", "finalize-prompt", "No open conflicts. Press f to finalize."));
  }

  const conflict: ConflictOut | null = store.current();
  if (!conflict) {
    root.append(el("p", "hint", "No conflicts in this iteration."));
    return;
  }

  const card = el("section", "conflict-card");
  card.append(
    el(
      "h2",
      undefined,
      `${conflict.conflict_id} (${conflict.status}) — ${conflict.doc_id}`,
    ),
  );
  const doc = await store.loadDoc(conflict.doc_id);
  const windowStart = Math.max(0, Math.min(...conflict.variants.map((v) => v.context.start)));
  const windowEnd = Math.max(...conflict.variants.map((v) => v.context.end));
  const focus =
    store.mode.kind === "reshape"
      ? { start: store.mode.start, end: store.mode.end }
      : { start: conflict.region_start, end: conflict.region_end };
  card.append(renderWindow(doc, windowStart, windowEnd, colors, focus));

  const variants = el("ol", "variants");
  conflict.variants.forEach((variant, i) => {
    const item = el("li");
    const chip = el("span", "chip", variant.candidate_label);
    chip.style.background = colors.get(variant.candidate_label) ?? CONFLICT_COLOR;
    item.append(
      el("kbd", undefined, String(i + 1)),
      " ",
      chip,
      ` [${variant.start}, ${variant.end}) by ${variant.origin}`,
    );
    if (variant.confidence !== null) {
      item.append(el("span", "confidence", ` conf ${variant.confidence.toFixed(2)}`));
    }
    variants.append(item);
  });
  card.append(variants);

  if (conflict.resolution) {
    card.append(
      el(
        "p",
        "recorded",
        `recorded: ${conflict.resolution.action}` +
          (conflict.resolution.label ? ` -> ${conflict.resolution.label}` : "") +
          ` (by ${conflict.resolution.resolver}, editable until finalize)`,
      ),
    );
  }

  if (store.mode.kind === "relabel") {
    const picker = el("ol", "label-picker");
    project.labels.forEach((label, i) => {
      const item = el("li");
      const chip = el("span", "chip", label);
      chip.style.background = colors.get(label)!;
      item.append(el("kbd", undefined, String(i + 1)), " ", chip);
      picker.append(item);
    });
    card.append(el("p", "hint", "relabel: pick a label (Esc cancels)"), picker);
  } else if (store.mode.kind === "reshape") {
    card.append(
      el(
        "p",
        "hint",
        `reshape: [${store.mode.start}, ${store.mode.end}) as ${store.mode.label} — ` +
          "arrows adjust, digits change label, Enter commits, Esc cancels",
      ),
    );
  } else {
    card.append(
      el(
        "p",
        "hint",
        "keys: 1-9 accept variant, d drop, l relabel, s reshape, arrows/j/k navigate" +
          (progress.open === 0 ? ", f finalize" : ""),
      ),
    );
  }
  root.append(card);
}
