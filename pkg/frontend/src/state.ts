/**
 * Pure UI state transitions. The DOM layer calls these and re-renders from
 * the returned state; nothing here touches the network or the document.
 */

import type { QueryMode, QueryResponse } from "./api-types.js";

export type QueryRef =
  | { kind: "id"; id: number }
  | { kind: "upload"; name: string };

export interface Snapshot {
  query: QueryRef;
  results: QueryResponse;
}

export interface UiState {
  mode: QueryMode;
  k: number;
  metric: string;
  currentQuery: QueryRef | null;
  results: QueryResponse | null;
  /** Append-only session log of completed queries. */
  history: Snapshot[];
  /** Index into history of the snapshot currently shown; -1 before any query. */
  cursor: number;
}

export const MIN_K = 1;
export const MAX_K = 100;

export function initialState(): UiState {
  return {
    mode: "knn",
    k: 10,
    metric: "l1",
    currentQuery: null,
    results: null,
    history: [],
    cursor: -1,
  };
}

export function clampK(k: number): number {
  return Math.min(MAX_K, Math.max(MIN_K, Math.round(k)));
}

export function setMode(state: UiState, mode: QueryMode): UiState {
  return { ...state, mode };
}

export function setK(state: UiState, k: number): UiState {
  return { ...state, k: clampK(k) };
}

export function setMetric(state: UiState, metric: string): UiState {
  return { ...state, metric };
}

/** Select a new query target (thumbnail click, result click, or upload). */
export function beginQuery(state: UiState, query: QueryRef): UiState {
  return { ...state, currentQuery: query };
}

/**
 * Record a completed query. The snapshot is appended (history only ever
 * grows) and becomes the shown entry, keeping query and results in step.
 */
export function applyResults(state: UiState, results: QueryResponse): UiState {
  if (state.currentQuery === null) {
    return state;
  }
  const snapshot: Snapshot = { query: state.currentQuery, results };
  const history = [...state.history, snapshot];
  return { ...state, results, history, cursor: history.length - 1 };
}

export function canGoBack(state: UiState): boolean {
  return state.cursor > 0;
}

/** Step the cursor back one snapshot and restore its query and results. */
export function goBack(state: UiState): UiState {
  if (!canGoBack(state)) {
    return state;
  }
  const cursor = state.cursor - 1;
  const snapshot = state.history[cursor]!;
  return {
    ...state,
    cursor,
    currentQuery: snapshot.query,
    results: snapshot.results,
  };
}
