/**
 * Annotation flow state machine, UI-framework free.
 *
 * Drives one annotator session: fetch task, pick exactly one of the 20
 * labels, submit, auto-advance. A failed submit keeps the selection and can
 * be retried; a null task means the round is complete. All state is derived
 * from the service, so a page reload reconstructs the session losslessly.
 */

import { ApiClient, LabelInfo, Progress, Task } from "./api.js";

export type FlowState =
  | "idle"
  | "loading"
  | "annotating"
  | "submitting"
  | "submit-error"
  | "done";

/** Keyboard shortcuts in schema order: digits 1-9, 0, then the qwerty row. */
export const SHORTCUT_KEYS = [
  "1", "2", "3", "4", "5", "6", "7", "8", "9", "0",
  "q", "w", "e", "r", "t", "y", "u", "i", "o", "p",
];

export function shortcutMap(labels: LabelInfo[]): Map<string, string> {
  const map = new Map<string, string>();
  labels.forEach((label, i) => {
    if (i < SHORTCUT_KEYS.length) map.set(SHORTCUT_KEYS[i], label.id);
  });
  return map;
}

export class AnnotationFlow {
  state: FlowState = "idle";
  task: Task | null = null;
  selectedLabel: string | null = null;
  lastError: string | null = null;
  progress: Progress | null = null;
  labels: LabelInfo[] = [];
  private shortcuts = new Map<string, string>();

  constructor(
    private client: ApiClient,
    private annotator: string,
    private round: number = 1,
  ) {}

  get topicLabels(): LabelInfo[] {
    return this.labels.filter((l) => l.kind === "topic");
  }

  get auxiliaryLabels(): LabelInfo[] {
    return this.labels.filter((l) => l.kind === "auxiliary");
  }

  get canSubmit(): boolean {
    return (
      this.selectedLabel !== null &&
      this.task !== null &&
      (this.state === "annotating" || this.state === "submit-error")
    );
  }

  async start(): Promise<void> {
    this.state = "loading";
    this.labels = await this.client.labels();
    this.shortcuts = shortcutMap(this.labels);
    await this.advance();
  }

  private async advance(): Promise<void> {
    this.selectedLabel = null;
    this.lastError = null;
    this.progress = await this.client.progress(this.annotator, this.round);
    this.task = await this.client.nextTask(this.annotator, this.round);
    this.state = this.task === null ? "done" : "annotating";
  }

  selectLabel(labelId: string): void {
    if (this.state !== "annotating" && this.state !== "submit-error") return;
    if (!this.labels.some((l) => l.id === labelId)) {
      throw new Error(`unknown label: ${labelId}`);
    }
    this.selectedLabel = labelId;
  }

  /** Keyboard entry point; unmapped keys are ignored. */
  selectByKey(key: string): void {
    const labelId = this.shortcuts.get(key.toLowerCase());
    if (labelId !== undefined) this.selectLabel(labelId);
  }

  async submit(): Promise<void> {
    if (!this.canSubmit || this.task === null || this.selectedLabel === null) {
      throw new Error("nothing selected to submit");
    }
    const { task, selectedLabel } = this;
    this.state = "submitting";
    try {
      await this.client.submitLabel(
        task.doc_id,
        this.annotator,
        this.round,
        selectedLabel,
      );
    } catch (error) {
      // keep the selection so the annotator can retry without re-picking
      this.state = "submit-error";
      this.lastError = error instanceof Error ? error.message : String(error);
      return;
    }
    await this.advance();
  }

  async retry(): Promise<void> {
    if (this.state !== "submit-error") throw new Error("nothing to retry");
    await this.submit();
  }
}
