/** Similar-farmer search: pick a dataset, get the ranked username list. */

import type { ApiClient } from "../api.js";
import { ApiError } from "../api.js";
import { banner, clear, el } from "../dom.js";
import { messageFor } from "../errors.js";
import type { ViewStore } from "../state.js";

export interface SimilarPageContext {
  api: ApiClient;
  store: ViewStore;
}

export function buildSimilarPage(ctx: SimilarPageContext): HTMLElement {
  const root = el("section", { class: "page page-similar" });
  const select = el("select", { "data-field": "dataset" });
  for (const ds of ctx.store.getDatasets(300_000) ?? []) {
    select.appendChild(el("option", { value: ds.dataset_id, text: ds.name }));
  }
  const run = el("button", { text: "Identify similar farmers", "data-action": "similar" });
  const results = el("ol", { class: "similar-results", "data-role": "results" });
  const status = el("div", { "data-role": "status" });

  run.addEventListener("click", async () => {
    clear(results);
    clear(status);
    try {
      const body = await ctx.api.findSimilar(select.value);
      ctx.store.putPeers(select.value, body.scores);
      if (body.no_compatible_peers) {
        status.appendChild(banner("ok", "No other farmer shares this dataset layout yet."));
        return;
      }
      for (const entry of body.scores) {
        results.appendChild(
          el("li", { "data-peer": entry.peer }, [
            el("span", { text: `${entry.peer} — similarity ${entry.score.toFixed(3)}` }),
          ]),
        );
      }
    } catch (err) {
      if (err instanceof ApiError) {
        status.appendChild(banner("error", messageFor(err.code, err.message), err.code));
      }
    }
  });

  root.append(el("h2", { text: "Identify similar farmers" }), select, run, results, status);
  return root;
}
