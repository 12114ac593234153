/**
 * Thin fetch client for the query service. At most one query request is in
 * flight: starting a new one aborts the pending one.
 */

import type { ImagesPage, QueryOptions, QueryResponse } from "./api-types.js";

export class ApiError extends Error {
  constructor(public status: number, message: string) {
    super(message);
  }
}

export class ApiClient {
  private inflight: AbortController | null = null;

  constructor(private base: string = "") {}

  private async getJson<T>(path: string): Promise<T> {
    const response = await fetch(this.base + path);
    if (!response.ok) {
      throw new ApiError(response.status, await response.text());
    }
    return (await response.json()) as T;
  }

  async listImages(page: number, pageSize: number): Promise<ImagesPage> {
    return this.getJson(`/api/images?page=${page}&page_size=${pageSize}`);
  }

  /** Every indexed record, fetched page by page. */
  async listAllImages(pageSize = 200): Promise<ImagesPage["items"]> {
    const first = await this.listImages(0, pageSize);
    const items = [...first.items];
    for (let page = 1; items.length < first.total; page += 1) {
      const next = await this.listImages(page, pageSize);
      if (next.items.length === 0) {
        break;
      }
      items.push(...next.items);
    }
    return items;
  }

  private beginQueryRequest(): AbortSignal {
    this.inflight?.abort();
    this.inflight = new AbortController();
    return this.inflight.signal;
  }

  async queryById(id: number, opts: QueryOptions): Promise<QueryResponse> {
    const signal = this.beginQueryRequest();
    const params = `id=${id}&mode=${opts.mode}&k=${opts.k}&metric=${opts.metric}`;
    const response = await fetch(`${this.base}/api/query?${params}`, { signal });
    if (!response.ok) {
      throw new ApiError(response.status, await response.text());
    }
    return (await response.json()) as QueryResponse;
  }

  async queryByUpload(
    file: Blob,
    name: string,
    opts: QueryOptions,
  ): Promise<QueryResponse> {
    const signal = this.beginQueryRequest();
    const form = new FormData();
    form.append("image", file, name);
    const params = `mode=${opts.mode}&k=${opts.k}&metric=${opts.metric}`;
    const response = await fetch(`${this.base}/api/query?${params}`, {
      method: "POST",
      body: form,
      signal,
    });
    if (!response.ok) {
      throw new ApiError(response.status, await response.text());
    }
    return (await response.json()) as QueryResponse;
  }
}
