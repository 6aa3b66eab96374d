import { describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import { AnnotationFlow, SHORTCUT_KEYS, shortcutMap } from "../src/flow.js";
import { MockService, makeLabels } from "./mock-service.js";

const DOCS = [
  { doc_id: "d1", body: "first body", lang: "sl" },
  { doc_id: "d2", body: "second body", lang: "hr" },
  { doc_id: "d3", body: "third body", lang: "el" },
];

function makeFlow(service: MockService, round = 1): AnnotationFlow {
  return new AnnotationFlow(
    new ApiClient({ fetchFn: service.fetch }),
    "ann1",
    round,
  );
}

describe("campaign flow on a 3-doc campaign", () => {
  it("labels all documents (one auxiliary) and reaches completion", async () => {
    const service = new MockService(DOCS);
    const flow = makeFlow(service);
    await flow.start();

    const picks = ["topic 01", "multiple", "topic 05"];
    for (const label of picks) {
      expect(flow.state).toBe("annotating");
      expect(flow.canSubmit).toBe(false); // nothing selected yet
      flow.selectLabel(label);
      expect(flow.canSubmit).toBe(true);
      await flow.submit();
    }

    expect(flow.state).toBe("done");
    expect(flow.progress).toMatchObject({ done: 3, total: 3 });
    expect(flow.progress?.per_label["multiple"]).toBe(1);

    // export yields exactly the submitted records, nothing else
    const records = await new ApiClient({ fetchFn: service.fetch }).exportRecords();
    expect(records).toHaveLength(3);
    expect(records.map((r) => [r.doc_id, r.label])).toEqual([
      ["d1", "topic 01"],
      ["d2", "multiple"],
      ["d3", "topic 05"],
    ]);
  });

  it("requires a selection before submit", async () => {
    const flow = makeFlow(new MockService(DOCS));
    await flow.start();
    await expect(flow.submit()).rejects.toThrow("nothing selected");
  });

  it("rejects labels outside the schema", async () => {
    const flow = makeFlow(new MockService(DOCS));
    await flow.start();
    expect(() => flow.selectLabel("bogus")).toThrow("unknown label");
  });
});

describe("submit failure handling", () => {
  it("a network drop mid-submit preserves the selection; retry succeeds", async () => {
    const service = new MockService(DOCS);
    service.dropNextSubmits = 1;
    const flow = makeFlow(service);
    await flow.start();

    flow.selectLabel("topic 02");
    await flow.submit();
    expect(flow.state).toBe("submit-error");
    expect(flow.selectedLabel).toBe("topic 02"); // no re-pick needed
    expect(flow.task?.doc_id).toBe("d1");

    await flow.retry();
    expect(flow.state).toBe("annotating");
    expect(flow.task?.doc_id).toBe("d2");
    expect(service.records.get("d1|ann1|1")?.label).toBe("topic 02");
  });

  it("a service validation error also preserves the selection", async () => {
    const service = new MockService(DOCS);
    const flow = makeFlow(service);
    await flow.start();
    flow.selectLabel("topic 01");
    service.labels = service.labels.filter((l) => l.id !== "topic 01");
    await flow.submit();
    expect(flow.state).toBe("submit-error");
    expect(flow.selectedLabel).toBe("topic 01");
  });
});

describe("blind round 2", () => {
  it("round-2 task payloads carry no prior labels", async () => {
    const service = new MockService(DOCS);
    for (const doc of DOCS) service.submit(doc.doc_id, "ann1", 1, "topic 07");

    const flow = makeFlow(service, 2);
    await flow.start();
    while (flow.state === "annotating") {
      expect(flow.task).not.toBeNull();
      const payload = JSON.stringify(flow.task);
      expect(payload).not.toContain("label");
      expect(payload).not.toContain("topic 07");
      flow.selectLabel("topic 03");
      await flow.submit();
    }
    expect(flow.state).toBe("done");
    expect(service.progress("ann1", 2).done).toBe(3);
    // round-1 records are untouched by re-annotation
    expect(service.records.get("d1|ann1|1")?.label).toBe("topic 07");
  });
});

describe("keyboard shortcuts", () => {
  it("map 1:1 onto the 20 labels in schema order", () => {
    const labels = makeLabels();
    const map = shortcutMap(labels);
    expect(map.size).toBe(20);
    expect(new Set(map.values()).size).toBe(20);
    SHORTCUT_KEYS.forEach((key, i) => {
      expect(map.get(key)).toBe(labels[i].id);
    });
  });

  it("selectByKey picks the mapped label and ignores unmapped keys", async () => {
    const flow = makeFlow(new MockService(DOCS));
    await flow.start();
    flow.selectByKey("2");
    expect(flow.selectedLabel).toBe("topic 02");
    flow.selectByKey("P"); // case-insensitive, last auxiliary
    expect(flow.selectedLabel).toBe("multiple");
    flow.selectByKey("z");
    expect(flow.selectedLabel).toBe("multiple"); // unchanged
  });
});

describe("reload reconstruction", () => {
  it("a fresh flow resumes exactly where the service says", async () => {
    const service = new MockService(DOCS);
    const first = makeFlow(service);
    await first.start();
    first.selectLabel("topic 04");
    await first.submit();

    const reloaded = makeFlow(service);
    await reloaded.start();
    expect(reloaded.progress?.done).toBe(1);
    expect(reloaded.task?.doc_id).toBe("d2");
    expect(reloaded.selectedLabel).toBeNull(); // unacknowledged picks re-present
  });
});
