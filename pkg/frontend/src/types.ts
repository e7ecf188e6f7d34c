/** Wire types of the review server's JSON API. */

export interface SpanOut {
  start: number;
  end: number;
  label: string;
  candidate_label: string | null;
  origin: string | null;
  confidence: number | null;
}

export interface TextWindow {
  start: number;
  end: number;
  text: string;
}

export interface VariantOut {
  start: number;
  end: number;
  candidate_label: string;
  origin: string;
  confidence: number | null;
  context: TextWindow;
}

export type ResolutionAction = "accept_variant" | "relabel" | "reshape" | "drop";

export interface ResolutionIn {
  conflict_id: string;
  action: ResolutionAction;
  variant_index?: number | null;
  label?: string | null;
  start?: number | null;
  end?: number | null;
  resolver: string;
}

export interface ConflictOut {
  conflict_id: string;
  doc_id: string;
  status: "open" | "resolved";
  region_start: number;
  region_end: number;
  variants: VariantOut[];
  resolution: ResolutionIn | null;
}

export interface IterationSummary {
  index: number;
  stage: string;
  docs: number;
  uploads: number;
  agreed_spans: number;
  conflicts_open: number;
  conflicts_resolved: number;
  gold_docs: number;
}

export interface ProjectSummary {
  name: string;
  annotators: string[];
  scheme_version: number;
  labels: string[];
  documents: number;
  finalized: number;
  iterations: IterationSummary[];
}

export interface DocOut {
  id: string;
  text: string;
  state: "gold" | "merged" | "none";
  spans: SpanOut[];
}

export interface FinalizeOut {
  index: number;
  stage: string;
  gold_docs: number;
}

export interface ApiErrorBody {
  code: string;
  message: string;
  detail: Record<string, unknown> | null;
}
