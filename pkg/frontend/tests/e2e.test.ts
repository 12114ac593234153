/**
 * End-to-end: fixture corpus -> live query service -> the real UI running in
 * jsdom. Exercises the full loop: browse thumbnails, click one to query,
 * click a result to requery, and toggle knn/svm.
 */

import { spawn, ChildProcess, execFileSync } from "node:child_process";
import { mkdtempSync, readFileSync, readdirSync, rmSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";

import { JSDOM } from "jsdom";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { initApp, AppHandle } from "../src/app.js";

const PORT = 18930 + (process.pid % 50);
const BASE = `http://127.0.0.1:${PORT}`;

const FIXTURE_SCRIPT = `
import sys
from cbir.store import ingest_dataset, save_index, save_model
from cbir.svm.kernels import KernelSpec
from cbir.svm.multiclass import train_one_vs_one
from cbir.synthetic import generate_corpus

root = sys.argv[1]
corpus = generate_corpus(root + "/corpus", n_classes=3, per_class=4, size=48, seed=5)
index = ingest_dataset(corpus)
save_index(index, root + "/index.bin")
model = train_one_vs_one(index, KernelSpec("gaussian"), C=10.0, seed=5)
save_model(model, root + "/model.bin")
print("fixture ready")
`;

let workdir: string;
let service: ChildProcess | undefined;
let dom: JSDOM;
let app: AppHandle;

async function waitForService(): Promise<void> {
  const deadline = Date.now() + 30_000;
  while (Date.now() < deadline) {
    try {
      const r = await fetch(`${BASE}/api/images?page=0&page_size=1`);
      if (r.ok) {
        return;
      }
    } catch {
      // not up yet
    }
    await new Promise((resolve) => setTimeout(resolve, 250));
  }
  throw new Error("query service did not come up");
}

beforeAll(async () => {
  workdir = mkdtempSync(join(tmpdir(), "cbir-e2e-"));
  execFileSync("python3", ["-c", FIXTURE_SCRIPT, workdir], { stdio: "inherit" });
  service = spawn(
    "python3",
    [
      "-m",
      "cbir.cli",
      "serve",
      "--index",
      join(workdir, "index.bin"),
      "--model",
      join(workdir, "model.bin"),
      "--port",
      String(PORT),
    ],
    { stdio: "ignore" },
  );
  await waitForService();

  const html = readFileSync(
    join(__dirname, "..", "src", "index.html"),
    "utf-8",
  );
  dom = new JSDOM(html, { url: BASE });
  app = initApp(dom.window.document, BASE);
  await app.idle();
}, 120_000);

afterAll(() => {
  service?.kill();
  if (workdir) {
    rmSync(workdir, { recursive: true, force: true });
  }
});

function doc(): Document {
  return dom.window.document;
}

describe("gallery loop against the live service", () => {
  it("renders one thumbnail per indexed image, filterable by class", async () => {
    const cards = doc().querySelectorAll("#gallery .gallery-card");
    expect(cards.length).toBe(12); // 3 classes x 4 images

    const filter = doc().getElementById("class-filter") as HTMLSelectElement;
    const firstClass = (filter.options[1] as HTMLOptionElement).value;
    filter.value = firstClass;
    filter.dispatchEvent(new dom.window.Event("change"));
    const filtered = doc().querySelectorAll("#gallery .gallery-card .caption");
    expect(filtered.length).toBe(4);
    for (const caption of filtered) {
      expect(caption.textContent).toBe(firstClass);
    }
    filter.value = "";
    filter.dispatchEvent(new dom.window.Event("change"));
    expect(doc().querySelectorAll("#gallery .gallery-card").length).toBe(12);
  });

  it("clicking a thumbnail issues a knn query with the image first", async () => {
    const card = doc().querySelector(
      '#gallery .gallery-card[data-id="3"]',
    ) as HTMLButtonElement;
    card.click();
    await app.idle();

    const state = app.getState();
    expect(state.currentQuery).toEqual({ kind: "id", id: 3 });
    expect(state.results?.mode).toBe("knn");
    expect(state.results?.results[0]?.id).toBe(3);
    expect(state.results?.results[0]?.score).toBe(0);

    const rendered = doc().querySelectorAll("#results .result-card");
    expect(rendered.length).toBe(state.results!.results.length);
    expect((rendered[0] as HTMLElement).dataset.id).toBe("3");
    // scores shown verbatim from the response
    expect(rendered[0]!.querySelector(".caption")!.textContent).toContain("0.0000");
  });

  it("clicking a result promotes it to the new query and grows history", async () => {
    const before = app.getState();
    const second = doc().querySelectorAll(
      "#results .result-card",
    )[1] as HTMLButtonElement;
    const promotedId = Number(second.dataset.id);
    second.click();
    await app.idle();

    const state = app.getState();
    expect(state.currentQuery).toEqual({ kind: "id", id: promotedId });
    expect(state.results?.results[0]?.id).toBe(promotedId);
    expect(state.history.length).toBe(before.history.length + 1);
  });

  it("back restores the previous results", async () => {
    const back = doc().getElementById("back") as HTMLButtonElement;
    expect(back.disabled).toBe(false);
    back.click();
    const state = app.getState();
    expect(state.currentQuery).toEqual({ kind: "id", id: 3 });
    expect((doc().querySelector("#results .result-card") as HTMLElement).dataset.id).toBe("3");
  });

  it("mode toggle re-issues the same query in svm mode with a banner", async () => {
    const mode = doc().getElementById("mode") as HTMLSelectElement;
    mode.value = "svm";
    mode.dispatchEvent(new dom.window.Event("change"));
    await app.idle();

    const state = app.getState();
    expect(state.mode).toBe("svm");
    expect(state.currentQuery).toEqual({ kind: "id", id: 3 }); // same id re-queried
    expect(state.results?.mode).toBe("svm");
    expect(state.results?.predicted_class).not.toBeNull();

    const banner = doc().getElementById("banner") as HTMLElement;
    expect(banner.hidden).toBe(false);
    expect(banner.textContent).toContain(state.results!.predicted_class!);
    // svm retrieval stays inside the predicted class
    const labels = new Set(state.results!.results.map((r) => r.label));
    expect(labels).toEqual(new Set([state.results!.predicted_class!]));
  });

  it("k slider changes the number of results", async () => {
    const k = doc().getElementById("k") as HTMLInputElement;
    k.value = "2";
    k.dispatchEvent(new dom.window.Event("change"));
    await app.idle();

    const state = app.getState();
    expect(state.k).toBe(2);
    expect(state.results?.results.length).toBe(2);
    expect(doc().querySelectorAll("#results .result-card").length).toBe(2);
  });
});
