/**
 * Model repository: one card per model with info, risk (owner only), and
 * playground tabs. The playground renders a feature-entry grid from the
 * model's schema and shows returned class probabilities as percentages;
 * the owner's how-to text is downloadable from the card corner.
 */

import type { ApiClient, ColumnDoc, ModelInfo, ModelSummary, RiskView } from "../api.js";
import { ApiError } from "../api.js";
import { banner, clear, el } from "../dom.js";
import { messageFor } from "../errors.js";
import { renderRiskChart } from "../riskChart.js";
import type { ViewStore } from "../state.js";

export interface ModelsPageContext {
  api: ApiClient;
  store: ViewStore;
}

export const INFO_FIELDS: ReadonlyArray<keyof ModelInfo> = [
  "name",
  "model_type",
  "metadata",
  "owner",
  "visibility",
  "num_classes",
  "class_names",
  "training_status",
  "readme",
];

export function formatPercent(p: number): string {
  return `${(p * 100).toFixed(1)}%`;
}

export function buildInfoTab(info: ModelInfo): HTMLElement {
  const table = el("table", { class: "info-table", "data-role": "info" });
  for (const field of INFO_FIELDS) {
    const value = info[field];
    const rendered =
      typeof value === "object" && value !== null ? JSON.stringify(value) : String(value);
    table.appendChild(
      el("tr", { "data-info-field": field }, [
        el("th", { text: field }),
        el("td", { text: rendered }),
      ]),
    );
  }
  return table;
}

export function buildRiskTab(risk: RiskView, logsActivity: { user: string; timestamp: number; query_count: number }[]): HTMLElement {
  const wrap = el("div", { class: "risk-tab", "data-role": "risk" });
  wrap.appendChild(
    el("div", {
      class: "risk-overall",
      "data-role": "overall-risk",
      text: `Overall risk: ${risk.overall.toFixed(3)}`,
    }),
  );
  const table = el("table", { class: "risk-table", "data-role": "per-user" });
  table.appendChild(
    el("tr", {}, [
      el("th", { text: "user" }),
      el("th", { text: "queries" }),
      el("th", { text: "distinct" }),
      el("th", { text: "risk" }),
    ]),
  );
  for (const u of risk.per_user) {
    table.appendChild(
      el("tr", { "data-user": u.user }, [
        el("td", { text: u.user }),
        el("td", { text: String(u.query_count) }),
        el("td", { text: String(u.distinct_count) }),
        el("td", { text: u.risk.toFixed(4) }),
      ]),
    );
  }
  wrap.appendChild(table);

  const activity = el("ul", { class: "activity", "data-role": "activity" });
  for (const a of logsActivity) {
    activity.appendChild(
      el("li", {
        text: `${a.user} sent ${a.query_count} queries at ${new Date(a.timestamp * 1000).toISOString()}`,
      }),
    );
  }
  wrap.appendChild(activity);

  const chartBox = el("div", { class: "chart-box", "data-role": "risk-plot" });
  renderRiskChart(chartBox, risk.plot_points);
  wrap.appendChild(chartBox);
  return wrap;
}

export function buildPlaygroundTab(
  api: ApiClient,
  modelId: string,
  info: ModelInfo,
): HTMLElement {
  const wrap = el("div", { class: "playground", "data-role": "playground" });
  const grid = el("div", { class: "feature-grid" });
  const inputs: HTMLInputElement[] = [];
  for (const col of info.metadata.feature_columns as ColumnDoc[]) {
    const input = el("input", {
      type: "text",
      "data-feature": col.name,
      placeholder: col.kind === "numeric" ? `${col.name} (number)` : `${col.name} (category)`,
    });
    inputs.push(input);
    grid.append(el("label", { text: col.name }), input);
  }

  const run = el("button", { text: "Predict", "data-action": "predict" });
  if (info.training_status !== "trained") {
    run.setAttribute("disabled", "true");
  }
  const output = el("div", { class: "predictions", "data-role": "predictions" });

  const download = el("a", {
    class: "download-readme",
    "data-role": "download-readme",
    download: `${info.name}-readme.txt`,
    text: "⬇ how-to",
  });
  download.href = URL.createObjectURL(new Blob([info.readme], { type: "text/plain" }));

  run.addEventListener("click", async () => {
    clear(output);
    const row = inputs.map((i) => i.value);
    try {
      const { predictions } = await api.predict(modelId, [row]);
      for (const p of predictions) {
        const box = el("div", { class: "prediction" });
        box.appendChild(
          el("div", { class: "predicted-class", text: `Prediction: ${p.predicted_class}` }),
        );
        p.probabilities.forEach((prob, i) => {
          box.appendChild(
            el("div", {
              class: "prob-bar",
              "data-class": info.class_names[i],
              "data-probability": String(prob),
              text: `${info.class_names[i]}: ${formatPercent(prob)}`,
            }),
          );
        });
        output.appendChild(box);
      }
    } catch (err) {
      if (err instanceof ApiError) {
        output.appendChild(banner("error", messageFor(err.code, err.message), err.code));
      } else {
        output.appendChild(banner("error", String(err)));
      }
    }
  });

  wrap.append(download, grid, run, output);
  return wrap;
}

export async function buildModelCard(
  ctx: ModelsPageContext,
  summary: ModelSummary,
): Promise<HTMLElement> {
  const card = el("article", { class: "model-card", "data-model-id": summary.model_id });
  const tabs = el("nav", { class: "tabs" });
  const body = el("div", { class: "card-body" });

  const info = await ctx.api.modelInfo(summary.model_id);
  const isOwner = ctx.store.subject === info.owner;

  const infoButton = el("button", { text: "info", "data-tab": "info" });
  infoButton.addEventListener("click", () => {
    clear(body);
    body.appendChild(buildInfoTab(info));
  });
  tabs.appendChild(infoButton);

  if (isOwner) {
    const riskButton = el("button", { text: "risk", "data-tab": "risk" });
    riskButton.addEventListener("click", async () => {
      clear(body);
      try {
        const [risk, logs] = await Promise.all([
          ctx.api.modelRisk(summary.model_id),
          ctx.api.modelLogs(summary.model_id),
        ]);
        body.appendChild(buildRiskTab(risk, logs.activity));
      } catch (err) {
        if (err instanceof ApiError) {
          body.appendChild(banner("error", messageFor(err.code, err.message), err.code));
        }
      }
    });
    tabs.appendChild(riskButton);
  }

  const playButton = el("button", { text: "playground", "data-tab": "playground" });
  playButton.addEventListener("click", () => {
    clear(body);
    body.appendChild(buildPlaygroundTab(ctx.api, summary.model_id, info));
  });
  tabs.appendChild(playButton);

  card.append(
    el("header", { text: `${info.name} — ${info.model_type} (${info.training_status})` }),
    tabs,
    body,
  );
  body.appendChild(buildInfoTab(info));
  return card;
}

export function buildModelsPage(ctx: ModelsPageContext): HTMLElement {
  const root = el("section", { class: "page page-models" });
  const list = el("div", { class: "model-cards", "data-role": "model-cards" });
  root.append(el("h2", { text: "Model repository" }), list);

  void (async () => {
    const { models } = await ctx.api.listModels();
    ctx.store.putModels(models);
    for (const summary of models) {
      list.appendChild(await buildModelCard(ctx, summary));
    }
  })().catch(() => undefined);

  return root;
}
