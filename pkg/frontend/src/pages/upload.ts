/**
 * Dataset upload: name field, file-drop area, confirm button.
 * Pre-checks run locally on file selection; server errors surface verbatim
 * with their code. A successful upload refreshes the list in place.
 */

import type { ApiClient, DatasetMeta } from "../api.js";
import { ApiError } from "../api.js";
import { banner, clear, el } from "../dom.js";
import { messageFor } from "../errors.js";
import { preCheckUpload, readFileText } from "../validation.js";
import type { ViewStore } from "../state.js";

export interface UploadPageContext {
  api: ApiClient;
  store: ViewStore;
}

export function buildUploadPage(ctx: UploadPageContext): HTMLElement {
  const root = el("section", { class: "page page-upload" });
  const problems = el("ul", { class: "problems", "data-role": "problems" });
  const status = el("div", { "data-role": "status" });

  const nameInput = el("input", {
    type: "text",
    placeholder: "Dataset name",
    "data-field": "name",
  });
  const fileInput = el("input", { type: "file", accept: ".csv", "data-field": "file" });
  const dropArea = el("label", { class: "drop-area", text: "Drop your farm data here or " });
  dropArea.appendChild(fileInput);
  const confirm = el("button", {
    text: "Upload Dataset",
    disabled: "true",
    "data-action": "upload",
  });

  const list = el("ul", { class: "dataset-list", "data-role": "dataset-list" });

  let selected: { file: File; text: string } | null = null;

  async function refreshList(): Promise<void> {
    const body = await ctx.api.listDatasets();
    ctx.store.putDatasets(body.datasets);
    clear(list);
    for (const ds of body.datasets) {
      list.appendChild(
        el("li", { "data-dataset-id": ds.dataset_id }, [
          el("span", { text: `${ds.name} (${ds.row_count} rows)` }),
        ]),
      );
    }
  }

  function showProblems(found: { code: string; message: string }[]): void {
    clear(problems);
    for (const p of found) {
      problems.appendChild(el("li", { class: "problem", "data-code": p.code, text: p.message }));
    }
    confirm.toggleAttribute("disabled", found.length > 0 || selected === null);
  }

  fileInput.addEventListener("change", async () => {
    const file = fileInput.files?.[0];
    clear(status);
    if (!file) {
      selected = null;
      showProblems([]);
      return;
    }
    const text = await readFileText(file);
    const found = preCheckUpload(file.name, text);
    selected = found.length === 0 ? { file, text } : null;
    showProblems(found);
  });

  confirm.addEventListener("click", async () => {
    if (!selected) return;
    clear(status);
    try {
      const meta: DatasetMeta = await ctx.api.uploadDataset(
        nameInput.value || selected.file.name.replace(/\.csv$/i, ""),
        selected.file,
        selected.file.name,
      );
      status.appendChild(banner("ok", `Uploaded ${meta.name} (${meta.row_count} rows).`));
      await refreshList();
    } catch (err) {
      if (err instanceof ApiError) {
        status.appendChild(banner("error", messageFor(err.code, err.message), err.code));
      } else {
        status.appendChild(banner("error", String(err)));
      }
    }
  });

  root.append(
    el("h2", { text: "Upload farm data" }),
    nameInput,
    dropArea,
    confirm,
    problems,
    status,
    el("h3", { text: "Your datasets" }),
    list,
  );
  void refreshList().catch(() => undefined);
  return root;
}
