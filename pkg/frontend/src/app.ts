/**
 * DOM wiring for the gallery. All rendering is driven by the pure state in
 * state.ts; every displayed number comes straight from a QueryResponse.
 *
 * The document is passed in (rather than assumed global) so the end-to-end
 * test can drive the app inside jsdom against a live service.
 */

import type { ImageRecord, QueryMode, QueryResponse } from "./api-types.js";
import { ApiClient, ApiError } from "./client.js";
import {
  MAX_K,
  MIN_K,
  QueryRef,
  UiState,
  applyResults,
  beginQuery,
  canGoBack,
  goBack,
  initialState,
  setK,
  setMetric,
  setMode,
} from "./state.js";

export interface AppHandle {
  getState(): UiState;
  /** Resolves once every operation started so far has settled. */
  idle(): Promise<void>;
}

export function initApp(doc: Document, apiBase = ""): AppHandle {
  const client = new ApiClient(apiBase);
  let state = initialState();
  let gallery: ImageRecord[] = [];
  let pending: Promise<void> = Promise.resolve();

  const el = {
    mode: doc.getElementById("mode") as HTMLSelectElement,
    k: doc.getElementById("k") as HTMLInputElement,
    kValue: doc.getElementById("k-value") as HTMLElement,
    metric: doc.getElementById("metric") as HTMLSelectElement,
    back: doc.getElementById("back") as HTMLButtonElement,
    upload: doc.getElementById("upload") as HTMLInputElement,
    banner: doc.getElementById("banner") as HTMLElement,
    status: doc.getElementById("status") as HTMLElement,
    results: doc.getElementById("results") as HTMLElement,
    classFilter: doc.getElementById("class-filter") as HTMLSelectElement,
    gallery: doc.getElementById("gallery") as HTMLElement,
  };

  el.k.min = String(MIN_K);
  el.k.max = String(MAX_K);

  function track(op: Promise<void>): void {
    pending = pending.then(() => op, () => op);
  }

  function renderControls(): void {
    el.mode.value = state.mode;
    el.k.value = String(state.k);
    el.kValue.textContent = String(state.k);
    el.metric.value = state.metric;
    el.back.disabled = !canGoBack(state);
  }

  function renderBanner(results: QueryResponse | null): void {
    if (results && results.mode === "svm" && results.predicted_class !== null) {
      el.banner.hidden = false;
      el.banner.textContent = `predicted class: ${results.predicted_class}`;
    } else {
      el.banner.hidden = true;
      el.banner.textContent = "";
    }
  }

  function resultCard(r: QueryResponse["results"][number]): HTMLElement {
    const card = doc.createElement("button");
    card.type = "button";
    card.className = "card result-card";
    card.dataset.id = String(r.id);
    const img = doc.createElement("img");
    img.src = apiBase + r.thumbnail_url;
    img.alt = `${r.label} #${r.id}`;
    const caption = doc.createElement("span");
    caption.className = "caption";
    caption.textContent = `${r.label} · ${r.score.toFixed(4)}`;
    card.append(img, caption);
    card.addEventListener("click", () => runQuery({ kind: "id", id: r.id }));
    return card;
  }

  function renderResults(): void {
    renderBanner(state.results);
    el.results.replaceChildren();
    if (!state.results) {
      return;
    }
    for (const r of state.results.results) {
      el.results.append(resultCard(r));
    }
  }

  function renderGallery(): void {
    const filter = el.classFilter.value;
    el.gallery.replaceChildren();
    for (const record of gallery) {
      if (filter && record.label !== filter) {
        continue;
      }
      const card = doc.createElement("button");
      card.type = "button";
      card.className = "card gallery-card";
      card.dataset.id = String(record.id);
      const img = doc.createElement("img");
      img.src = apiBase + record.thumbnail_url;
      img.alt = `${record.label} #${record.id}`;
      const caption = doc.createElement("span");
      caption.className = "caption";
      caption.textContent = record.label;
      card.append(img, caption);
      card.addEventListener("click", () => runQuery({ kind: "id", id: record.id }));
      el.gallery.append(card);
    }
  }

  function render(): void {
    renderControls();
    renderResults();
  }

  function showError(err: unknown): void {
    if (err instanceof Error && err.name === "AbortError") {
      return; // superseded by a newer query
    }
    el.status.textContent = err instanceof ApiError
      ? `service error ${err.status}: ${err.message}`
      : String(err);
  }

  function runQuery(query: QueryRef, file?: Blob): Promise<void> {
    state = beginQuery(state, query);
    const opts = { mode: state.mode, k: state.k, metric: state.metric };
    const request = query.kind === "id"
      ? client.queryById(query.id, opts)
      : client.queryByUpload(file!, query.name, opts);
    const op = request
      .then((results) => {
        state = applyResults(state, results);
        el.status.textContent = "";
        render();
      })
      .catch(showError);
    track(op);
    return op;
  }

  function requeryCurrent(): void {
    // mode/k/metric changes re-issue the active query; uploads cannot be
    // replayed without the blob, so only id queries re-run automatically
    if (state.currentQuery?.kind === "id") {
      void runQuery(state.currentQuery);
    }
  }

  el.mode.addEventListener("change", () => {
    state = setMode(state, el.mode.value as QueryMode);
    requeryCurrent();
  });
  el.k.addEventListener("change", () => {
    state = setK(state, Number(el.k.value));
    renderControls();
    requeryCurrent();
  });
  el.metric.addEventListener("change", () => {
    state = setMetric(state, el.metric.value);
    requeryCurrent();
  });
  el.back.addEventListener("click", () => {
    state = goBack(state);
    render();
  });
  el.classFilter.addEventListener("change", renderGallery);
  el.upload.addEventListener("change", () => {
    const file = el.upload.files?.[0];
    if (file) {
      void runQuery({ kind: "upload", name: file.name }, file);
    }
  });

  const boot = client
    .listAllImages()
    .then((items) => {
      gallery = items;
      const labels = [...new Set(items.map((r) => r.label))].sort();
      for (const label of labels) {
        const option = doc.createElement("option");
        option.value = label;
        option.textContent = label;
        el.classFilter.append(option);
      }
      renderGallery();
      renderControls();
    })
    .catch(showError);
  track(boot);

  return {
    getState: () => state,
    idle: async () => {
      // settle chained operations triggered while waiting
      let last;
      do {
        last = pending;
        await last;
      } while (last !== pending);
    },
  };
}
