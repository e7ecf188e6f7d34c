/**
 * The session store: everything the review screen shows, derived only
 * from the server's API so a page reload reproduces the exact state.
 * The DOM layer subscribes; tests drive the store headlessly.
 */
import { ApiClient, ApiError } from "./api.js";
import type { Action, KeyContext, ModeKind } from "./keyboard.js";
import type { ConflictOut, DocOut, IterationSummary, ProjectSummary, ResolutionIn } from "./types.js";

export type Mode =
  | { kind: "navigate" }
  | { kind: "relabel" }
  | { kind: "reshape"; start: number; end: number; label: string };

export interface Progress {
  total: number;
  resolved: number;
  open: number;
}

type Listener = () => void;

export class SessionStore {
  project: ProjectSummary | null = null;
  iterationIndex = 0;
  iteration: IterationSummary | null = null;
  conflicts: ConflictOut[] = [];
  cursor = 0;
  mode: Mode = { kind: "navigate" };
  error: string | null = null;
  finalized = false;
  busy = false;

  private readonly docs = new Map<string, DocOut>();
  private readonly listeners: Listener[] = [];

  constructor(
    private readonly api: ApiClient,
    readonly resolver: string = "collective",
  ) {}

  subscribe(listener: Listener): void {
    this.listeners.push(listener);
  }

  private notify(): void {
    for (const listener of this.listeners) listener();
  }

  /** Load project + conflicts; cursor lands on the first open conflict. */
  async load(iterationIndex?: number): Promise<void> {
    this.project = await this.api.getProject();
    if (iterationIndex !== undefined) {
      this.iterationIndex = iterationIndex;
    } else {
      const active = this.project.iterations.find((it) => it.stage !== "Finalized");
      this.iterationIndex = active
        ? active.index
        : Math.max(0, this.project.iterations.length - 1);
    }
    this.iteration = await this.api.getIteration(this.iterationIndex);
    this.finalized = this.iteration.stage === "Finalized";
    this.conflicts = await this.api.getConflicts(this.iterationIndex, "all");
    this.cursor = this.firstOpenIndex();
    this.mode = { kind: "navigate" };
    this.error = null;
    this.notify();
  }

  /** Poll refresh: server state wins (last write of any browser in the room). */
  async refresh(): Promise<void> {
    if (this.busy) return;
    const currentId = this.current()?.conflict_id;
    this.iteration = await this.api.getIteration(this.iterationIndex);
    this.finalized = this.iteration.stage === "Finalized";
    this.conflicts = await this.api.getConflicts(this.iterationIndex, "all");
    if (currentId) {
      const kept = this.conflicts.findIndex((c) => c.conflict_id === currentId);
      this.cursor = kept >= 0 ? kept : this.firstOpenIndex();
    }
    this.notify();
  }

  async loadDoc(docId: string): Promise<DocOut> {
    const cached = this.docs.get(docId);
    if (cached) return cached;
    const doc = await this.api.getDoc(docId);
    this.docs.set(docId, doc);
    return doc;
  }

  current(): ConflictOut | null {
    return this.conflicts[this.cursor] ?? null;
  }

  progress(): Progress {
    const resolved = this.conflicts.filter((c) => c.status === "resolved").length;
    return { total: this.conflicts.length, resolved, open: this.conflicts.length - resolved };
  }

  keyContext(): KeyContext {
    const current = this.current();
    return {
      mode: this.mode.kind as ModeKind,
      hasCurrent: current !== null && !this.finalized,
      variantCount: current?.variants.length ?? 0,
      labelCount: this.project?.labels.length ?? 0,
      openCount: this.progress().open,
      finalized: this.finalized,
    };
  }

  private firstOpenIndex(): number {
    const index = this.conflicts.findIndex((c) => c.status === "open");
    return index >= 0 ? index : 0;
  }

  private advanceToNextOpen(): void {
    for (let step = 1; step <= this.conflicts.length; step++) {
      const index = (this.cursor + step) % this.conflicts.length;
      if (this.conflicts[index]!.status === "open") {
        this.cursor = index;
        return;
      }
    }
    // queue empty: stay put, the finalize prompt takes over
  }

  private async submit(resolution: ResolutionIn): Promise<void> {
    this.busy = true;
    this.error = null;
    try {
      const updated = await this.api.postResolution(this.iterationIndex, resolution);
      const index = this.conflicts.findIndex((c) => c.conflict_id === updated.conflict_id);
      if (index >= 0) this.conflicts[index] = updated;
      this.mode = { kind: "navigate" };
      this.advanceToNextOpen();
    } catch (err) {
      // surfaced, never swallowed: the conflict stays open with the
      // collision (or other cause) shown inline
      if (err instanceof ApiError) {
        const detail = err.detail ? ` ${JSON.stringify(err.detail)}` : "";
        this.error = `${err.code}: ${err.message}${detail}`;
      } else {
        this.error = String(err);
      }
    } finally {
      this.busy = false;
      this.notify();
    }
  }

  async finalize(): Promise<void> {
    this.busy = true;
    this.error = null;
    try {
      const result = await this.api.postFinalize(this.iterationIndex);
      this.finalized = result.stage === "Finalized";
      this.iteration = await this.api.getIteration(this.iterationIndex);
      this.conflicts = await this.api.getConflicts(this.iterationIndex, "all");
    } catch (err) {
      this.error =
        err instanceof ApiError ? `${err.code}: ${err.message}` : String(err);
    } finally {
      this.busy = false;
      this.notify();
    }
  }

  async dispatch(action: Action): Promise<void> {
    const current = this.current();
    switch (action.type) {
      case "next":
        this.cursor = Math.min(this.cursor + 1, Math.max(0, this.conflicts.length - 1));
        this.mode = { kind: "navigate" };
        this.notify();
        return;
      case "prev":
        this.cursor = Math.max(this.cursor - 1, 0);
        this.mode = { kind: "navigate" };
        this.notify();
        return;
      case "cancel":
        this.mode = { kind: "navigate" };
        this.error = null;
        this.notify();
        return;
      case "relabel-open":
        this.mode = { kind: "relabel" };
        this.notify();
        return;
      case "reshape-open": {
        if (!current) return;
        const seed = current.variants[0]!;
        this.mode = { kind: "reshape", start: seed.start, end: seed.end, label: seed.candidate_label };
        this.notify();
        return;
      }
      case "reshape-adjust": {
        if (this.mode.kind !== "reshape") return;
        const next = { ...this.mode };
        if (action.edge === "start") next.start = Math.max(0, next.start + action.delta);
        else next.end = next.end + action.delta;
        if (next.start < next.end) this.mode = next;
        this.notify();
        return;
      }
      case "reshape-label": {
        if (this.mode.kind !== "reshape" || !this.project) return;
        this.mode = { ...this.mode, label: this.project.labels[action.index]! };
        this.notify();
        return;
      }
      case "accept":
        if (!current) return;
        await this.submit({
          conflict_id: current.conflict_id,
          action: "accept_variant",
          variant_index: action.index,
          resolver: this.resolver,
        });
        return;
      case "drop":
        if (!current) return;
        await this.submit({
          conflict_id: current.conflict_id,
          action: "drop",
          resolver: this.resolver,
        });
        return;
      case "relabel-pick":
        if (!current || !this.project) return;
        await this.submit({
          conflict_id: current.conflict_id,
          action: "relabel",
          label: this.project.labels[action.index]!,
          resolver: this.resolver,
        });
        return;
      case "reshape-commit": {
        if (!current || this.mode.kind !== "reshape") return;
        const { start, end, label } = this.mode;
        await this.submit({
          conflict_id: current.conflict_id,
          action: "reshape",
          start,
          end,
          label,
          resolver: this.resolver,
        });
        return;
      }
      case "finalize":
        await this.finalize();
        return;
    }
  }
}
