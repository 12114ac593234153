/**
 * Shared wire types for the query service JSON API. This file is the single
 * source of truth for the schema the UI consumes; nothing in the UI computes
 * scores or labels locally.
 */

export type QueryMode = "knn" | "svm";

export interface ImageRecord {
  id: number;
  label: string;
  thumbnail_url: string;
}

export interface ImagesPage {
  total: number;
  page: number;
  page_size: number;
  items: ImageRecord[];
}

export interface QueryResult {
  id: number;
  label: string;
  score: number;
  thumbnail_url: string;
}

export interface QueryResponse {
  mode: QueryMode;
  predicted_class: string | null;
  results: QueryResult[];
  timing_ms: number;
}

export interface QueryOptions {
  mode: QueryMode;
  k: number;
  metric: string;
}
