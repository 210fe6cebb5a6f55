/**
 * Typed client for the workbench HTTP API.
 *
 * The fetch implementation is injected so tests can record, replay or stub
 * the wire traffic; the browser entry point passes the global fetch.
 */

import type {
  ImportResponse,
  MindmapResponse,
  PreviewRequest,
  PreviewResponse,
  ResultsResponse,
  SearchRequest,
  SearchStarted,
  SourcesResponse,
  SupportResponse,
  VenueEntry,
} from "./types.js";

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiRequestError extends Error {
  readonly code: string;
  readonly status: number;

  constructor(code: string, message: string, status: number) {
    super(message);
    this.code = code;
    this.status = status;
  }
}

export class WorkbenchClient {
  private readonly base: string;
  private readonly fetchImpl: FetchLike;

  constructor(baseUrl = "", fetchImpl: FetchLike = (...args) => fetch(...args)) {
    this.base = baseUrl.replace(/\/$/, "");
    this.fetchImpl = fetchImpl;
  }

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await this.fetchImpl(`${this.base}${path}`, init);
    const body = await response.json();
    if (!response.ok) {
      const code = body?.error?.code ?? "UnknownError";
      const message = body?.error?.message ?? response.statusText;
      throw new ApiRequestError(code, message, response.status);
    }
    return body as T;
  }

  private post<T>(path: string, payload: unknown): Promise<T> {
    return this.request<T>(path, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(payload),
    });
  }

  getMindmap(): Promise<MindmapResponse> {
    return this.request<MindmapResponse>("/api/mindmap");
  }

  replaceMindmap(xml: string): Promise<{ ok: boolean; node_count: number }> {
    return this.request("/api/mindmap", {
      method: "PUT",
      headers: { "Content-Type": "application/xml" },
      body: xml,
    });
  }

  saveMindmap(): Promise<{ saved_to: string }> {
    return this.post("/api/mindmap/save", {});
  }

  previewExpansion(body: PreviewRequest): Promise<PreviewResponse> {
    return this.post<PreviewResponse>("/api/expansion/preview", body);
  }

  search(body: SearchRequest): Promise<SearchStarted> {
    return this.post<SearchStarted>("/api/search", body);
  }

  results(taskId: string, facet?: string): Promise<ResultsResponse> {
    const suffix = facet ? `?facet=${encodeURIComponent(facet)}` : "";
    return this.request<ResultsResponse>(
      `/api/search/${encodeURIComponent(taskId)}/results${suffix}`);
  }

  support(taskId: string, recordIndex: number, kinds?: string[]): Promise<SupportResponse> {
    return this.post<SupportResponse>(
      `/api/search/${encodeURIComponent(taskId)}/support`,
      { record_index: recordIndex, kinds });
  }

  importRecords(taskId: string, recordIndices: number[],
                targetNodeId: string): Promise<ImportResponse> {
    return this.post<ImportResponse>("/api/import", {
      task_id: taskId,
      record_indices: recordIndices,
      target_node_id: targetNodeId,
    });
  }

  venues(): Promise<{ venues: VenueEntry[] }> {
    return this.request("/api/catalog/venues");
  }

  sources(): Promise<SourcesResponse> {
    return this.request<SourcesResponse>("/api/sources");
  }
}
