// Browser wiring: picks a fixture sentence or pasted treebank, opens a
// session, renders service state, and posts answers.  Every render follows
// a confirmed service response; nothing is shown optimistically.

import { ApiClient, ServiceError, SingleFlight } from "./api.js";
import { renderError, renderSession } from "./render.js";
import type { SessionView } from "./types.js";

const SERVICE_URL =
  typeof window === "undefined"
    ? "http://127.0.0.1:8000"
    : ((window as unknown as { ACCORD_SERVICE_URL?: string }).ACCORD_SERVICE_URL ??
      "http://127.0.0.1:8000");

interface FixtureSentence {
  id: string;
  block: string;
}

/** Split a treebank file into sentence blocks for the fixture picker. */
export function splitTreebank(text: string): FixtureSentence[] {
  const sentences: FixtureSentence[] = [];
  for (const raw of text.split(/\n\s*\n/)) {
    const block = raw
      .split("\n")
      .filter((line) => !line.startsWith("#") || line.includes("sent_id"))
      .join("\n")
      .trim();
    if (!block) continue;
    const match = block.match(/# sent_id = (\S+)/);
    if (match) sentences.push({ id: match[1], block: block + "\n" });
  }
  return sentences;
}

function element<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

async function init(): Promise<void> {
  const client = new ApiClient(SERVICE_URL);
  const guard = new SingleFlight();
  const picker = element<HTMLSelectElement>("fixture-picker");
  const input = element<HTMLTextAreaElement>("treebank-input");
  const openButton = element<HTMLButtonElement>("open-session");
  const view = element<HTMLDivElement>("session-view");
  let current: SessionView | null = null;

  try {
    const response = await fetch("./fixtures.tsv");
    if (response.ok) {
      for (const sentence of splitTreebank(await response.text())) {
        const option = document.createElement("option");
        option.value = sentence.block;
        option.textContent = sentence.id;
        picker.appendChild(option);
      }
    }
  } catch {
    // No bundled fixtures: paste-only mode.
  }

  picker.addEventListener("change", () => {
    if (picker.value) input.value = picker.value;
  });

  function show(session: SessionView): void {
    current = session;
    view.innerHTML = renderSession(session);
    for (const button of view.querySelectorAll<HTMLButtonElement>("button.option")) {
      button.addEventListener("click", () => {
        void answer(button.dataset.question ?? "", button.dataset.value ?? "");
      });
    }
  }

  function fail(error: unknown): void {
    if (error instanceof ServiceError) {
      view.innerHTML = renderError(error.body) + view.innerHTML;
    } else {
      view.innerHTML =
        renderError({ code: "connection", message: String(error) }) + view.innerHTML;
    }
  }

  async function answer(questionId: string, value: string): Promise<void> {
    if (!current) return;
    const id = current.id;
    const result = await guard.run(async () => {
      try {
        return await client.postAnswer(id, questionId, value);
      } catch (error) {
        if (error instanceof ServiceError && error.status === 409) {
          // Stale question: reconcile with the server's view of the session.
          return await client.getSession(id);
        }
        fail(error);
        return null;
      }
    });
    if (result) show(result);
  }

  openButton.addEventListener("click", () => {
    void guard.run(async () => {
      try {
        show(await client.createSession(input.value));
      } catch (error) {
        fail(error);
      }
    });
  });
}

if (typeof document !== "undefined") {
  void init();
}
