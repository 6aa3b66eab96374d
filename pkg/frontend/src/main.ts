/**
 * Minimal DOM shell around AnnotationFlow.
 *
 * Layout: document pane (scrollable body + language badge), label picker with
 * the three discard labels visually separated below the topic labels,
 * guidelines panel fetched from the service, and a progress bar. Label
 * descriptions appear as tooltips to keep 20 options scannable.
 */

import { ApiClient } from "./api.js";
import { AnnotationFlow, SHORTCUT_KEYS } from "./flow.js";

const IPTC_TREE_URL = "https://show.newscodes.org/index.html?newscodes=medtop";

function el(tag: string, className: string, text?: string): HTMLElement {
  const node = document.createElement(tag);
  node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

export async function mount(root: HTMLElement): Promise<AnnotationFlow> {
  const params = new URLSearchParams(window.location.search);
  const annotator = params.get("annotator") ?? "";
  const round = Number(params.get("round") ?? "1");
  const token = params.get("token") ?? undefined;

  const client = new ApiClient({ token });
  const flow = new AnnotationFlow(client, annotator, round);

  const docPane = el("div", "doc-pane");
  const pickerPane = el("div", "picker-pane");
  const guidelinesPane = el("details", "guidelines-pane");
  const progressBar = el("div", "progress-bar");
  root.replaceChildren(progressBar, docPane, pickerPane, guidelinesPane);

  guidelinesPane.appendChild(el("summary", "", "Guidelines"));
  const guidelinesBody = el("pre", "guidelines-body");
  guidelinesPane.appendChild(guidelinesBody);
  const treeLink = el("a", "iptc-link", "Browse the full IPTC topic tree");
  treeLink.setAttribute("href", IPTC_TREE_URL);
  treeLink.setAttribute("target", "_blank");
  treeLink.setAttribute("rel", "noopener");
  guidelinesPane.appendChild(treeLink);

  function render(): void {
    if (flow.progress) {
      const { done, total } = flow.progress;
      progressBar.textContent = `${done} / ${total}`;
      progressBar.style.setProperty(
        "--fraction",
        total > 0 ? String(done / total) : "0",
      );
    }

    if (flow.state === "done") {
      docPane.replaceChildren(el("div", "completion", "All documents labeled."));
      pickerPane.replaceChildren();
      return;
    }
    if (flow.task === null) return;

    const badge = el("span", "lang-badge", flow.task.lang);
    const body = el("div", "doc-body", flow.task.body);
    docPane.replaceChildren(badge, body);

    const picker = el("div", "label-picker");
    const groups: [string, typeof flow.topicLabels][] = [
      ["topics", flow.topicLabels],
      ["discard", flow.auxiliaryLabels],
    ];
    let keyIndex = 0;
    for (const [groupName, labels] of groups) {
      const group = el("div", `label-group label-group-${groupName}`);
      for (const label of labels) {
        const key = SHORTCUT_KEYS[keyIndex++];
        const button = el(
          "button",
          "label-button" +
            (flow.selectedLabel === label.id ? " selected" : ""),
          `${key} · ${label.display_name}`,
        );
        button.setAttribute("title", label.description);
        button.addEventListener("click", () => {
          flow.selectLabel(label.id);
          render();
        });
        group.appendChild(button);
      }
      picker.appendChild(group);
    }

    const submit = el("button", "submit-button", "Submit") as HTMLButtonElement;
    submit.disabled = !flow.canSubmit;
    submit.addEventListener("click", async () => {
      await flow.submit();
      render();
    });
    picker.appendChild(submit);

    if (flow.state === "submit-error" && flow.lastError) {
      const error = el("div", "submit-error", `Submit failed: ${flow.lastError}`);
      const retry = el("button", "retry-button", "Retry");
      retry.addEventListener("click", async () => {
        await flow.retry();
        render();
      });
      error.appendChild(retry);
      picker.appendChild(error);
    }
    pickerPane.replaceChildren(picker);
  }

  document.addEventListener("keydown", (event) => {
    if (event.target instanceof HTMLInputElement) return;
    flow.selectByKey(event.key);
    render();
  });

  client.guidelines().then((text) => {
    guidelinesBody.textContent = text;
  });
  await flow.start();
  render();
  return flow;
}

if (typeof document !== "undefined" && document.getElementById("app")) {
  void mount(document.getElementById("app") as HTMLElement);
}
