import { afterEach, beforeEach, describe, expect, it, vi } from "vitest";

import { ApiClient, type ModelInfo, type RiskView } from "../src/api.js";
import { readFileText } from "../src/validation.js";
import {
  buildInfoTab,
  buildModelCard,
  buildPlaygroundTab,
  buildRiskTab,
  INFO_FIELDS,
} from "../src/pages/models.js";
import { ViewStore } from "../src/state.js";
import riskFixture from "./fixtures/risk_report.json";

const INFO: ModelInfo = {
  name: "soil-model",
  model_type: "logistic_regression",
  metadata: {
    schema_hash: "h",
    feature_columns: [
      { name: "f0", kind: "numeric" },
      { name: "f1", kind: "numeric" },
    ],
  },
  owner: "tester",
  visibility: "public",
  num_classes: 3,
  class_names: ["low", "mid", "high"],
  training_status: "trained",
  readme: "submit two numbers per row\nline two",
};

function jsonResponse(body: unknown, status = 200): Response {
  return new Response(JSON.stringify(body), { status });
}

beforeEach(() => {
  // jsdom lacks createObjectURL; capture blobs handed to it
  vi.stubGlobal("URL", Object.assign(URL, { createObjectURL: vi.fn(() => "blob:mock") }));
});

afterEach(() => vi.restoreAllMocks());

describe("model info tab", () => {
  it("renders exactly the declared field list", () => {
    const table = buildInfoTab(INFO);
    const fields = [...table.querySelectorAll("[data-info-field]")].map(
      (n) => (n as HTMLElement).dataset.infoField,
    );
    expect(fields).toEqual([...INFO_FIELDS]);
    expect(fields).toHaveLength(9);
  });
});

describe("risk tab", () => {
  it("renders the per-user plot from a fixture report, sorted by risk", () => {
    const tab = buildRiskTab(riskFixture as unknown as RiskView, [
      { user: "casey", timestamp: 0, query_count: 120 },
    ]);
    const bars = [...tab.querySelectorAll<SVGRectElement>(".risk-chart-bar")];
    expect(bars.map((b) => b.dataset.user)).toEqual(["casey", "blair", "arden"]);
    const widths = bars.map((b) => Number(b.getAttribute("width")));
    expect(widths[0]).toBeGreaterThan(widths[1]);
    expect(widths[1]).toBeGreaterThan(widths[2]);

    const ratio = widths[0] / widths[2];
    const riskRatio = 0.6126 / 0.1306;
    expect(Math.abs(ratio - riskRatio) / riskRatio).toBeLessThan(0.05);

    expect(tab.querySelector('[data-role="overall-risk"]')!.textContent).toContain("0.478");
    expect(tab.querySelectorAll('[data-role="per-user"] tr[data-user]')).toHaveLength(3);
    expect(tab.querySelector('[data-role="activity"]')!.textContent).toContain("casey");
  });

  it("is only offered to the model owner", async () => {
    vi.stubGlobal(
      "fetch",
      vi.fn(async (url: RequestInfo | URL) => {
        if (String(url).includes("/info")) return jsonResponse(INFO);
        return jsonResponse({});
      }),
    );
    const store = new ViewStore();
    const api = new ApiClient("", () => "tok");

    store.setSession("tok", "tester"); // owner
    const ownerCard = await buildModelCard(
      { api, store },
      {
        model_id: "m1",
        name: "soil-model",
        model_type: "logistic_regression",
        owner: "tester",
        visibility: "public",
        training_status: "trained",
        created_at: 0,
      },
    );
    expect(ownerCard.querySelector('button[data-tab="risk"]')).toBeTruthy();

    store.setSession("tok", "someone-else");
    const visitorCard = await buildModelCard(
      { api, store },
      {
        model_id: "m1",
        name: "soil-model",
        model_type: "logistic_regression",
        owner: "tester",
        visibility: "public",
        training_status: "trained",
        created_at: 0,
      },
    );
    expect(visitorCard.querySelector('button[data-tab="risk"]')).toBeNull();
    expect(visitorCard.querySelector('button[data-tab="info"]')).toBeTruthy();
    expect(visitorCard.querySelector('button[data-tab="playground"]')).toBeTruthy();
  });
});

describe("playground tab", () => {
  it("renders an input per feature column and probability bars summing to ~100%", async () => {
    vi.stubGlobal(
      "fetch",
      vi.fn(async () =>
        jsonResponse({
          predictions: [
            { probabilities: [1 / 3, 1 / 3, 1 / 3], predicted_class: "low" },
          ],
        }),
      ),
    );
    const api = new ApiClient("", () => "tok");
    const tab = buildPlaygroundTab(api, "m1", INFO);

    const inputs = [...tab.querySelectorAll<HTMLInputElement>("input[data-feature]")];
    expect(inputs.map((i) => i.dataset.feature)).toEqual(["f0", "f1"]);

    inputs[0].value = "1.5";
    inputs[1].value = "2.5";
    tab.querySelector<HTMLButtonElement>('button[data-action="predict"]')!.click();

    await vi.waitFor(() => {
      expect(tab.querySelectorAll(".prob-bar")).toHaveLength(3);
    });
    const shown = [...tab.querySelectorAll<HTMLElement>(".prob-bar")].map((b) => {
      const match = b.textContent!.match(/([\d.]+)%/);
      return Number(match![1]);
    });
    const total = shown.reduce((a, b) => a + b, 0);
    expect(Math.abs(total - 100)).toBeLessThanOrEqual(0.5);
    expect(tab.textContent).toContain("Prediction: low");
  });

  it("disables prediction until the model is trained", () => {
    const api = new ApiClient("", () => "tok");
    const tab = buildPlaygroundTab(api, "m1", { ...INFO, training_status: "training" });
    expect(
      tab.querySelector<HTMLButtonElement>('button[data-action="predict"]')!.hasAttribute(
        "disabled",
      ),
    ).toBe(true);
  });

  it("offers the owner's how-to text as a byte-identical download", async () => {
    const captured: Blob[] = [];
    (URL.createObjectURL as ReturnType<typeof vi.fn>).mockImplementation((blob: Blob) => {
      captured.push(blob);
      return "blob:mock";
    });
    const api = new ApiClient("", () => "tok");
    const tab = buildPlaygroundTab(api, "m1", INFO);
    const link = tab.querySelector<HTMLAnchorElement>('[data-role="download-readme"]')!;
    expect(link.getAttribute("download")).toContain("soil-model");
    expect(captured).toHaveLength(1);
    expect(await readFileText(captured[0])).toBe(INFO.readme);
  });
});
