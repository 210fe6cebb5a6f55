/**
 * Payload shapes of the workbench JSON API.
 *
 * Every interface here mirrors a documented endpoint body exactly; nothing
 * else is ever read off the wire.
 */

export interface MindmapNode {
  id: string;
  text: string;
  kind: string;
  icons: string[];
  link: string | null;
  children: MindmapNode[];
}

export interface MindmapResponse {
  format_version: string;
  root: MindmapNode;
}

export interface TermScore {
  term: string;
  score: number;
}

export interface PreviewResponse {
  neighbourhood_ids: string[];
  terms: TermScore[];
}

export interface PreviewRequest {
  selected_ids: string[];
  level?: number;
  k?: number;
  add_ids?: string[];
  remove_ids?: string[];
}

export interface SearchRequest {
  base_query: string;
  selected_ids: string[];
  level?: number;
  k?: number;
  sources?: string[];
  limit?: number;
}

export interface SearchStarted {
  task_id: string;
  query: string;
  record_count: number;
}

export interface PublicationRecord {
  title: string;
  authors: string[];
  venue_raw: string;
  venue_norm: [string, string] | null;
  date: number | null;
  url: string | null;
  abstract: string | null;
  source_id: string;
  source_rank: number;
}

export interface ResultGroup {
  label: string;
  record_indices: number[];
}

export interface SourceDiagnostic {
  status: string;
  count?: number;
  message?: string;
}

export interface ResultsResponse {
  task_id: string;
  query: string;
  records: PublicationRecord[];
  diagnostics: Record<string, SourceDiagnostic>;
  groups?: ResultGroup[];
}

export interface SupportMaterial {
  kind: string;
  url: string | null;
  text: string | null;
  verified: boolean;
  evidence: string;
}

export interface SupportResponse {
  materials: SupportMaterial[];
  errors: Record<string, string>;
}

export interface ImportResponse {
  imported: number;
  skipped: number;
  target_node_id: string;
}

export interface VenueEntry {
  acronym: string;
  title: string;
}

export interface SourceInfo {
  name: string;
  priority: number;
}

export interface SourcesResponse {
  sources: SourceInfo[];
  engines: string[];
}

export interface ApiError {
  error: { code: string; message: string };
}
