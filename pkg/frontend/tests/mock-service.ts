/**
 * In-memory stand-in for the annotation service, speaking the same HTTP
 * surface through a fetch stub. Lets the flow tests exercise the real
 * ApiClient end to end without a server process.
 */

import { LabelInfo } from "../src/api.js";

export interface MockDoc {
  doc_id: string;
  body: string;
  lang: string;
}

export function makeLabels(): LabelInfo[] {
  const topics: LabelInfo[] = Array.from({ length: 17 }, (_, i) => ({
    id: `topic ${String(i + 1).padStart(2, "0")}`,
    display_name: `Topic ${i + 1}`,
    description: `Coverage of topic ${i + 1}.`,
    kind: "topic" as const,
  }));
  const auxiliary: LabelInfo[] = ["do not know", "not news", "multiple"].map(
    (id) => ({
      id,
      display_name: id,
      description: `Discard label: ${id}.`,
      kind: "auxiliary" as const,
    }),
  );
  return [...topics, ...auxiliary];
}

interface StoredRecord {
  doc_id: string;
  annotator_id: string;
  round: number;
  label: string;
  timestamp: string;
}

export class MockService {
  labels = makeLabels();
  records = new Map<string, StoredRecord>();
  submitCount = 0;
  /** Number of upcoming submits that die mid-flight (network drop). */
  dropNextSubmits = 0;

  constructor(
    public docs: MockDoc[],
    public annotators: string[] = ["ann1"],
  ) {}

  nextTask(annotator: string, round: number): MockDoc | null {
    if (!this.annotators.includes(annotator)) throw { status: 403 };
    for (const doc of this.docs) {
      if (!this.records.has(`${doc.doc_id}|${annotator}|${round}`)) return doc;
    }
    return null;
  }

  submit(
    docId: string,
    annotator: string,
    round: number,
    label: string,
  ): StoredRecord {
    if (!this.annotators.includes(annotator)) throw { status: 403 };
    if (!this.docs.some((d) => d.doc_id === docId)) throw { status: 404 };
    if (!this.labels.some((l) => l.id === label)) {
      throw {
        status: 422,
        detail: {
          error: `unknown label: ${label}`,
          valid_labels: this.labels.map((l) => l.id),
        },
      };
    }
    const record: StoredRecord = {
      doc_id: docId,
      annotator_id: annotator,
      round,
      label,
      timestamp: new Date().toISOString(),
    };
    this.records.set(`${docId}|${annotator}|${round}`, record);
    return record;
  }

  progress(annotator: string, round: number) {
    const perLabel: Record<string, number> = {};
    let done = 0;
    for (const record of this.records.values()) {
      if (record.annotator_id === annotator && record.round === round) {
        done += 1;
        perLabel[record.label] = (perLabel[record.label] ?? 0) + 1;
      }
    }
    return { done, total: this.docs.length, per_label: perLabel };
  }

  exportJsonl(): string {
    return [...this.records.values()]
      .sort((a, b) =>
        `${a.doc_id}|${a.annotator_id}|${a.round}`.localeCompare(
          `${b.doc_id}|${b.annotator_id}|${b.round}`,
        ),
      )
      .map((record) => JSON.stringify(record))
      .join("\n");
  }

  /** fetch-compatible dispatcher over the same routes the service exposes. */
  fetch = async (input: RequestInfo | URL, init?: RequestInit): Promise<Response> => {
    const url = new URL(String(input), "http://mock");
    const json = (payload: unknown, status = 200) =>
      new Response(JSON.stringify(payload), { status });
    try {
      if (url.pathname === "/api/task") {
        const task = this.nextTask(
          url.searchParams.get("annotator") ?? "",
          Number(url.searchParams.get("round") ?? "1"),
        );
        return json({ task });
      }
      if (url.pathname === "/api/label") {
        this.submitCount += 1;
        if (this.dropNextSubmits > 0) {
          this.dropNextSubmits -= 1;
          throw new TypeError("network dropped");
        }
        const body = JSON.parse(String(init?.body));
        return json(
          this.submit(body.doc_id, body.annotator, body.round ?? 1, body.label),
        );
      }
      if (url.pathname === "/api/progress") {
        return json(
          this.progress(
            url.searchParams.get("annotator") ?? "",
            Number(url.searchParams.get("round") ?? "1"),
          ),
        );
      }
      if (url.pathname === "/api/labels") return json({ labels: this.labels });
      if (url.pathname === "/api/guidelines") {
        return new Response(
          this.labels.map((l) => `${l.display_name}: ${l.description}`).join("\n"),
        );
      }
      if (url.pathname === "/api/export") return new Response(this.exportJsonl());
      return json({ detail: "not found" }, 404);
    } catch (error) {
      if (error instanceof TypeError) throw error; // simulated network failure
      const { status, detail } = error as { status: number; detail?: unknown };
      return json({ detail: detail ?? "error" }, status);
    }
  };
}
