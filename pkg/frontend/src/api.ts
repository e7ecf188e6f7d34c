import type {
  ApiErrorBody,
  ConflictOut,
  DocOut,
  FinalizeOut,
  IterationSummary,
  ProjectSummary,
  ResolutionIn,
} from "./types.js";

export class ApiError extends Error {
  readonly code: string;
  readonly status: number;
  readonly detail: Record<string, unknown> | null;

  constructor(status: number, body: ApiErrorBody) {
    super(body.message);
    this.code = body.code;
    this.status = status;
    this.detail = body.detail;
  }
}

type FetchLike = typeof fetch;

export class ApiClient {
  constructor(
    private readonly baseUrl: string,
    private readonly fetchImpl: FetchLike = fetch,
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await this.fetchImpl(`${this.baseUrl}${path}`, init);
    if (!response.ok) {
      let body: ApiErrorBody;
      try {
        body = (await response.json()) as ApiErrorBody;
      } catch {
        body = { code: `HTTP${response.status}`, message: response.statusText, detail: null };
      }
      throw new ApiError(response.status, body);
    }
    return (await response.json()) as T;
  }

  getProject(): Promise<ProjectSummary> {
    return this.request("/api/project");
  }

  getIteration(index: number): Promise<IterationSummary> {
    return this.request(`/api/iterations/${index}`);
  }

  getConflicts(index: number, status: "open" | "resolved" | "all" = "all"): Promise<ConflictOut[]> {
    return this.request(`/api/iterations/${index}/conflicts?status=${status}`);
  }

  getDoc(docId: string): Promise<DocOut> {
    return this.request(`/api/docs/${encodeURIComponent(docId)}`);
  }

  postResolution(index: number, resolution: ResolutionIn): Promise<ConflictOut> {
    return this.request(`/api/iterations/${index}/resolutions`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(resolution),
    });
  }

  postFinalize(index: number): Promise<FinalizeOut> {
    return this.request(`/api/iterations/${index}/finalize`, { method: "POST" });
  }
}
