/**
 * Typed client for the annotation service HTTP API.
 *
 * This is the UI's only coupling to the backend: /api/task, /api/label,
 * /api/progress, /api/labels, /api/guidelines, /api/export. Responses are
 * validated with zod so a contract drift fails loudly instead of rendering
 * garbage.
 */

import { z } from "zod";

export const TaskSchema = z.object({
  doc_id: z.string(),
  body: z.string(),
  lang: z.string(),
});
export type Task = z.infer<typeof TaskSchema>;

export const LabelInfoSchema = z.object({
  id: z.string(),
  display_name: z.string(),
  description: z.string(),
  kind: z.enum(["topic", "auxiliary"]),
});
export type LabelInfo = z.infer<typeof LabelInfoSchema>;

export const ProgressSchema = z.object({
  done: z.number(),
  total: z.number(),
  per_label: z.record(z.string(), z.number()),
});
export type Progress = z.infer<typeof ProgressSchema>;

export const RecordSchema = z.object({
  doc_id: z.string(),
  annotator_id: z.string(),
  round: z.number(),
  label: z.string(),
  timestamp: z.string(),
});
export type AnnotationRecord = z.infer<typeof RecordSchema>;

export class ApiError extends Error {
  constructor(
    public status: number,
    public detail: unknown,
  ) {
    super(`api error ${status}`);
  }

  /** Valid label ids attached to a 422, when the service provides them. */
  get validLabels(): string[] | null {
    if (
      this.detail &&
      typeof this.detail === "object" &&
      "valid_labels" in this.detail
    ) {
      return (this.detail as { valid_labels: string[] }).valid_labels;
    }
    return null;
  }
}

export interface ApiClientOptions {
  baseUrl?: string;
  token?: string;
  fetchFn?: typeof fetch;
}

export class ApiClient {
  private baseUrl: string;
  private token?: string;
  private fetchFn: typeof fetch;

  constructor(options: ApiClientOptions = {}) {
    this.baseUrl = options.baseUrl ?? "";
    this.token = options.token;
    this.fetchFn = options.fetchFn ?? fetch.bind(globalThis);
  }

  private headers(json: boolean): Record<string, string> {
    const headers: Record<string, string> = {};
    if (json) headers["Content-Type"] = "application/json";
    if (this.token) headers["X-Annotation-Token"] = this.token;
    return headers;
  }

  private async request(path: string, init?: RequestInit): Promise<Response> {
    const response = await this.fetchFn(this.baseUrl + path, init);
    if (!response.ok) {
      let detail: unknown = null;
      try {
        detail = (await response.json()).detail;
      } catch {
        /* non-JSON error body */
      }
      throw new ApiError(response.status, detail);
    }
    return response;
  }

  async nextTask(annotator: string, round: number): Promise<Task | null> {
    const response = await this.request(
      `/api/task?annotator=${encodeURIComponent(annotator)}&round=${round}`,
      { headers: this.headers(false) },
    );
    const payload = (await response.json()) as { task: unknown };
    if (payload.task === null) return null;
    return TaskSchema.parse(payload.task);
  }

  async submitLabel(
    docId: string,
    annotator: string,
    round: number,
    label: string,
  ): Promise<AnnotationRecord> {
    const response = await this.request("/api/label", {
      method: "POST",
      headers: this.headers(true),
      body: JSON.stringify({ doc_id: docId, annotator, round, label }),
    });
    return RecordSchema.parse(await response.json());
  }

  async progress(annotator: string, round: number): Promise<Progress> {
    const response = await this.request(
      `/api/progress?annotator=${encodeURIComponent(annotator)}&round=${round}`,
      { headers: this.headers(false) },
    );
    return ProgressSchema.parse(await response.json());
  }

  async labels(): Promise<LabelInfo[]> {
    const response = await this.request("/api/labels", {
      headers: this.headers(false),
    });
    const payload = (await response.json()) as { labels: unknown[] };
    return payload.labels.map((l) => LabelInfoSchema.parse(l));
  }

  async guidelines(): Promise<string> {
    const response = await this.request("/api/guidelines", {
      headers: this.headers(false),
    });
    return response.text();
  }

  async exportRecords(): Promise<AnnotationRecord[]> {
    const response = await this.request("/api/export", {
      headers: this.headers(false),
    });
    const text = await response.text();
    return text
      .split("\n")
      .filter((line) => line.trim().length > 0)
      .map((line) => RecordSchema.parse(JSON.parse(line)));
  }
}
