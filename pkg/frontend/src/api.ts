/**
 * Typed client for the platform API.
 *
 * Every request is checked against API_CONTRACT, the recorded list of
 * documented /api/v1 endpoints; the client refuses to call anything else.
 */

export interface ColumnDoc {
  name: string;
  kind: "numeric" | "categorical";
  categories?: string[];
}

export interface DatasetMeta {
  dataset_id: string;
  owner: string;
  name: string;
  columns: ColumnDoc[];
  label_classes: string[];
  row_count: number;
  schema_hash: string;
  created_at: number;
}

export interface SimilarityEntry {
  peer: string;
  score: number;
}

export interface SimilarityResult {
  scores: SimilarityEntry[];
  no_compatible_peers: boolean;
}

export interface ChatMessage {
  message_id: string;
  sender: string;
  recipient: string;
  body: string;
  sent_at: number;
}

export interface JobStatus {
  job_id: string;
  status: string;
  failure_reason?: string | null;
  model_id?: string | null;
  consents?: Record<string, boolean | null>;
}

export interface ModelSummary {
  model_id: string;
  name: string;
  model_type: string;
  owner: string;
  visibility: string;
  training_status: string;
  created_at: number;
}

export interface ModelInfo {
  name: string;
  model_type: string;
  metadata: { schema_hash: string; feature_columns: ColumnDoc[] };
  owner: string;
  visibility: string;
  num_classes: number;
  class_names: string[];
  training_status: string;
  readme: string;
}

export interface Prediction {
  probabilities: number[];
  predicted_class: string;
}

export interface UserQueryStat {
  user: string;
  query_count: number;
  distinct_count: number;
  risk: number;
}

export interface RiskView {
  model_id: string;
  attack_auc: number | null;
  attack_advantage: number | null;
  per_user: UserQueryStat[];
  overall: number;
  plot_points: [string, number][];
}

export interface LogsView {
  model_id: string;
  per_user: UserQueryStat[];
  activity: { user: string; timestamp: number; query_count: number }[];
}

export interface TrainingForm {
  name: string;
  model_type: string;
  visibility: string;
  reference_dataset_id: string;
  readme?: string;
  collaborators: { username: string; dataset_id: string }[];
  hyperparams?: Record<string, number>;
}

export class ApiError extends Error {
  code: string;
  field?: string;

  constructor(code: string, message: string, field?: string) {
    super(message);
    this.code = code;
    this.field = field;
  }
}

/** The documented endpoint surface; requests outside it are refused. */
export const API_CONTRACT: ReadonlyArray<readonly [string, RegExp]> = [
  ["POST", /^\/api\/v1\/auth\/register$/],
  ["POST", /^\/api\/v1\/auth\/login$/],
  ["GET", /^\/api\/v1\/datasets$/],
  ["POST", /^\/api\/v1\/datasets$/],
  ["GET", /^\/api\/v1\/datasets\/[^/]+$/],
  ["DELETE", /^\/api\/v1\/datasets\/[^/]+$/],
  ["POST", /^\/api\/v1\/similar$/],
  ["GET", /^\/api\/v1\/chat\/[^/]+$/],
  ["POST", /^\/api\/v1\/chat\/[^/]+$/],
  ["POST", /^\/api\/v1\/jobs$/],
  ["GET", /^\/api\/v1\/jobs\/[^/]+$/],
  ["POST", /^\/api\/v1\/jobs\/[^/]+\/consent$/],
  ["GET", /^\/api\/v1\/models$/],
  ["GET", /^\/api\/v1\/models\/[^/]+\/info$/],
  ["GET", /^\/api\/v1\/models\/[^/]+\/risk$/],
  ["GET", /^\/api\/v1\/models\/[^/]+\/logs$/],
  ["POST", /^\/api\/v1\/models\/[^/]+\/predict$/],
];

function inContract(method: string, path: string): boolean {
  const bare = path.split("?")[0];
  return API_CONTRACT.some(([m, re]) => m === method && re.test(bare));
}

export class ApiClient {
  constructor(
    private baseUrl: string,
    private getToken: () => string | null,
  ) {}

  private async request<T>(
    method: string,
    path: string,
    body?: unknown,
    form?: FormData,
  ): Promise<T> {
    if (!inContract(method, path)) {
      throw new ApiError("UndocumentedEndpoint", `${method} ${path} is not in the API contract`);
    }
    const headers: Record<string, string> = {};
    const token = this.getToken();
    if (token) headers["Authorization"] = `Bearer ${token}`;
    let payload: BodyInit | undefined;
    if (form !== undefined) {
      payload = form;
    } else if (body !== undefined) {
      headers["Content-Type"] = "application/json";
      payload = JSON.stringify(body);
    }
    const resp = await fetch(`${this.baseUrl}${path}`, { method, headers, body: payload });
    const doc = (await resp.json()) as Record<string, unknown>;
    if (!resp.ok) {
      throw new ApiError(
        String(doc.code ?? "InternalError"),
        String(doc.message ?? "request failed"),
        doc.field === undefined ? undefined : String(doc.field),
      );
    }
    return doc as T;
  }

  register(username: string, credential: string): Promise<{ username: string }> {
    return this.request("POST", "/api/v1/auth/register", { username, credential });
  }

  login(username: string, credential: string): Promise<{ token: string; subject: string; expires_at: number }> {
    return this.request("POST", "/api/v1/auth/login", { username, credential });
  }

  listDatasets(): Promise<{ datasets: DatasetMeta[] }> {
    return this.request("GET", "/api/v1/datasets");
  }

  uploadDataset(name: string, file: File | Blob, fileName: string): Promise<DatasetMeta> {
    const form = new FormData();
    form.append("name", name);
    form.append("file", file, fileName);
    return this.request("POST", "/api/v1/datasets", undefined, form);
  }

  deleteDataset(datasetId: string): Promise<{ deleted: string }> {
    return this.request("DELETE", `/api/v1/datasets/${datasetId}`);
  }

  findSimilar(datasetId: string, epsilon?: number, seed?: number): Promise<SimilarityResult> {
    const body: Record<string, unknown> = { dataset_id: datasetId };
    if (epsilon !== undefined) body.epsilon = epsilon;
    if (seed !== undefined) body.seed = seed;
    return this.request("POST", "/api/v1/similar", body);
  }

  conversation(peer: string, since?: string): Promise<{ messages: ChatMessage[] }> {
    const suffix = since ? `?since=${encodeURIComponent(since)}` : "";
    return this.request("GET", `/api/v1/chat/${encodeURIComponent(peer)}${suffix}`);
  }

  sendMessage(peer: string, body: string): Promise<ChatMessage> {
    return this.request("POST", `/api/v1/chat/${encodeURIComponent(peer)}`, { body });
  }

  submitJob(form: TrainingForm): Promise<{ job_id: string }> {
    return this.request("POST", "/api/v1/jobs", form);
  }

  jobStatus(jobId: string): Promise<JobStatus> {
    return this.request("GET", `/api/v1/jobs/${jobId}`);
  }

  consent(jobId: string, accept: boolean): Promise<{ job_id: string; status: string }> {
    return this.request("POST", `/api/v1/jobs/${jobId}/consent`, { accept });
  }

  listModels(): Promise<{ models: ModelSummary[] }> {
    return this.request("GET", "/api/v1/models");
  }

  modelInfo(modelId: string): Promise<ModelInfo> {
    return this.request("GET", `/api/v1/models/${modelId}/info`);
  }

  predict(modelId: string, rows: (string | number)[][]): Promise<{ predictions: Prediction[] }> {
    return this.request("POST", `/api/v1/models/${modelId}/predict`, { rows });
  }

  modelRisk(modelId: string): Promise<RiskView> {
    return this.request("GET", `/api/v1/models/${modelId}/risk`);
  }

  modelLogs(modelId: string): Promise<LogsView> {
    return this.request("GET", `/api/v1/models/${modelId}/logs`);
  }
}
