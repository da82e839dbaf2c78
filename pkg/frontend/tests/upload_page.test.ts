import { afterEach, describe, expect, it, vi } from "vitest";

import { ApiClient } from "../src/api.js";
import { buildUploadPage } from "../src/pages/upload.js";
import { ViewStore } from "../src/state.js";

function jsonResponse(body: unknown, status = 200): Response {
  return new Response(JSON.stringify(body), { status });
}

async function pickFile(root: HTMLElement, name: string, contents: string): Promise<void> {
  const input = root.querySelector<HTMLInputElement>('input[data-field="file"]')!;
  const file = new File([contents], name, { type: "text/csv" });
  Object.defineProperty(input, "files", { value: [file], configurable: true });
  const confirm = root.querySelector<HTMLButtonElement>('button[data-action="upload"]')!;
  input.dispatchEvent(new Event("change"));
  // the handler reads the file asynchronously; wait until it re-evaluated
  // the confirm button (enabled or problems listed)
  await vi.waitFor(() => {
    const done =
      root.querySelectorAll(".problem").length > 0 || !confirm.hasAttribute("disabled");
    expect(done).toBe(true);
  });
}

function makePage(fetchImpl: (url: string, init?: RequestInit) => Promise<Response>) {
  vi.stubGlobal("fetch", vi.fn(fetchImpl));
  const store = new ViewStore();
  store.setSession("tok", "tester");
  const api = new ApiClient("", () => store.token);
  return { root: buildUploadPage({ api, store }), store };
}

describe("upload page", () => {
  afterEach(() => vi.restoreAllMocks());

  it("rejects a non-CSV file inline, before any network call", async () => {
    const { root } = makePage(async () => jsonResponse({ datasets: [] }));
    await vi.waitFor(() => expect(fetch).toHaveBeenCalledTimes(1)); // initial list load
    await pickFile(root, "notes.txt", "a,label\n1,x\n");

    const problems = [...root.querySelectorAll(".problem")];
    expect(problems.map((p) => (p as HTMLElement).dataset.code)).toEqual(["NotCsv"]);
    expect(root.querySelector('button[data-action="upload"]')!.hasAttribute("disabled")).toBe(
      true,
    );
    expect(fetch).toHaveBeenCalledTimes(1); // still only the list load
  });

  it("flags a missing label column client-side", async () => {
    const { root } = makePage(async () => jsonResponse({ datasets: [] }));
    await pickFile(root, "field.csv", "a,b,target\n1,2,x\n");
    const codes = [...root.querySelectorAll(".problem")].map(
      (p) => (p as HTMLElement).dataset.code,
    );
    expect(codes).toEqual(["MissingLabelColumn"]);
  });

  it("uploads a valid file and refreshes the list without a reload", async () => {
    const uploaded = {
      dataset_id: "d-new",
      owner: "tester",
      name: "spring-field",
      columns: [],
      label_classes: ["x"],
      row_count: 1,
      schema_hash: "h",
      created_at: 0,
    };
    let listed: unknown[] = [];
    const { root } = makePage(async (url, init) => {
      if (init?.method === "POST") {
        listed = [uploaded];
        return jsonResponse(uploaded);
      }
      return jsonResponse({ datasets: listed });
    });

    await pickFile(root, "spring.csv", "a,label\n1,x\n");
    expect(root.querySelectorAll(".problem")).toHaveLength(0);

    root.querySelector<HTMLButtonElement>('button[data-action="upload"]')!.click();
    await vi.waitFor(() => {
      expect(root.querySelector('[data-dataset-id="d-new"]')).toBeTruthy();
    });
    expect(root.querySelector(".banner-ok")).toBeTruthy();
  });

  it("surfaces server-side rejections with their error code", async () => {
    const { root } = makePage(async (_url, init) => {
      if (init?.method === "POST") {
        return jsonResponse({ code: "EmptyFile", message: "header only, no data rows" }, 400);
      }
      return jsonResponse({ datasets: [] });
    });

    await pickFile(root, "empty.csv", "a,label\n"); // passes pre-checks (header present)
    root.querySelector<HTMLButtonElement>('button[data-action="upload"]')!.click();
    await vi.waitFor(() => {
      const bannerNode = root.querySelector<HTMLElement>(".banner-error");
      expect(bannerNode).toBeTruthy();
      expect(bannerNode!.dataset.code).toBe("EmptyFile");
    });
  });
});
