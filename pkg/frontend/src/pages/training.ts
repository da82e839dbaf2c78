/**
 * Training-job form. Field set, in order: reference dataset, model name,
 * model type, visibility, optional readme, collaborator multi-select
 * populated from the latest similar-farmer ranking (ranking order
 * preserved). Submit stays disabled until every required field is valid;
 * after submission a status chip polls the job live.
 */

import type { ApiClient, SimilarityEntry, TrainingForm } from "../api.js";
import { ApiError } from "../api.js";
import { banner, clear, el } from "../dom.js";
import { messageFor } from "../errors.js";
import type { ViewStore } from "../state.js";

export const MODEL_TYPES = ["logistic_regression", "mlp_1hidden"];
export const JOB_POLL_MS = 1000;

export interface TrainingPageContext {
  api: ApiClient;
  store: ViewStore;
  /** peer -> dataset id, resolved when the ranking was computed */
  peerDatasets?: Map<string, string>;
}

export function buildTrainingForm(ctx: TrainingPageContext): HTMLElement {
  const root = el("section", { class: "page page-train" });
  const status = el("div", { "data-role": "status" });
  const chip = el("span", { class: "job-chip", "data-role": "job-chip" });

  const reference = el("select", { "data-field": "reference_dataset_id" });
  for (const ds of ctx.store.getDatasets(300_000) ?? []) {
    reference.appendChild(el("option", { value: ds.dataset_id, text: ds.name }));
  }

  const name = el("input", { type: "text", "data-field": "name", placeholder: "Model name" });

  const modelType = el("select", { "data-field": "model_type" });
  for (const t of MODEL_TYPES) {
    modelType.appendChild(el("option", { value: t, text: t }));
  }

  const visibility = el("select", { "data-field": "visibility" });
  visibility.appendChild(el("option", { value: "public", text: "public" }));
  visibility.appendChild(el("option", { value: "private", text: "private" }));

  const readme = el("textarea", {
    "data-field": "readme",
    placeholder: "How-to instructions for users (optional)",
  });

  const collaborators = el("select", { "data-field": "collaborators", multiple: "true" });
  const ranked: SimilarityEntry[] = ctx.store.latestPeers() ?? [];
  for (const entry of ranked) {
    collaborators.appendChild(
      el("option", {
        value: entry.peer,
        text: `${entry.peer} (similarity ${entry.score.toFixed(3)})`,
      }),
    );
  }

  const submit = el("button", {
    text: "Start Training",
    disabled: "true",
    "data-action": "start-training",
  });
  const validationMessage = el("div", { class: "field-errors", "data-role": "validation" });

  function selectedCollaborators(): string[] {
    return [...collaborators.selectedOptions].map((o) => o.value);
  }

  function validate(): string[] {
    const missing: string[] = [];
    if (!name.value.trim()) missing.push("model name");
    if (!reference.value) missing.push("reference dataset");
    if (!modelType.value) missing.push("model type");
    if (!visibility.value) missing.push("visibility");
    if (selectedCollaborators().length === 0) missing.push("collaborators");
    return missing;
  }

  function refreshValidity(): void {
    const missing = validate();
    submit.toggleAttribute("disabled", missing.length > 0);
    validationMessage.textContent =
      missing.length > 0 ? `Required: ${missing.join(", ")}.` : "";
  }

  for (const field of [reference, name, modelType, visibility, collaborators]) {
    field.addEventListener("change", refreshValidity);
    field.addEventListener("input", refreshValidity);
  }

  async function pollJob(jobId: string): Promise<void> {
    chip.dataset.jobId = jobId;
    const tick = async (): Promise<void> => {
      try {
        const job = await ctx.api.jobStatus(jobId);
        chip.textContent = job.status;
        chip.dataset.status = job.status;
        if (job.status === "failed" && job.failure_reason) {
          chip.textContent = `failed: ${job.failure_reason}`;
        }
        if (job.status !== "completed" && job.status !== "failed") {
          setTimeout(() => void tick(), JOB_POLL_MS);
        }
      } catch {
        setTimeout(() => void tick(), JOB_POLL_MS);
      }
    };
    await tick();
  }

  submit.addEventListener("click", async () => {
    clear(status);
    const peerToDataset = ctx.peerDatasets ?? new Map<string, string>();
    const form: TrainingForm = {
      name: name.value.trim(),
      model_type: modelType.value,
      visibility: visibility.value,
      reference_dataset_id: reference.value,
      readme: readme.value,
      collaborators: selectedCollaborators().map((peer) => ({
        username: peer,
        dataset_id: peerToDataset.get(peer) ?? "",
      })),
    };
    try {
      const { job_id } = await ctx.api.submitJob(form);
      status.appendChild(banner("ok", `Training job ${job_id} submitted.`));
      void pollJob(job_id);
    } catch (err) {
      if (err instanceof ApiError) {
        status.appendChild(banner("error", messageFor(err.code, err.message), err.code));
      } else {
        status.appendChild(banner("error", String(err)));
      }
    }
  });

  root.append(
    el("h2", { text: "Collaborative model training" }),
    el("label", { text: "Reference dataset" }),
    reference,
    el("label", { text: "Model name" }),
    name,
    el("label", { text: "Model type" }),
    modelType,
    el("label", { text: "Visibility" }),
    visibility,
    el("label", { text: "Readme" }),
    readme,
    el("label", { text: "Collaborators (ranked by similarity)" }),
    collaborators,
    submit,
    chip,
    validationMessage,
    status,
  );
  refreshValidity();
  return root;
}
