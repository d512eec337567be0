/** Application bootstrap: pick a dataset, open one session for this tab,
 * then keep the page in sync with the store. All data flows one way:
 * gesture -> store mutation -> server -> new payload -> render. */

import { ApiClient } from "./api.js";
import { SessionStore } from "./state.js";
import { render } from "./render.js";
import { installInteractions } from "./interactions.js";
import { exportPng } from "./exportPng.js";

const EXPORT_SCALE = 2;

function showToast(message: string): void {
  const toast = document.createElement("div");
  toast.className = "toast";
  toast.textContent = message;
  document.body.appendChild(toast);
  setTimeout(() => toast.remove(), 4000);
}

function fatal(root: HTMLElement, message: string): void {
  root.replaceChildren();
  const banner = document.createElement("div");
  banner.className = "error-banner";
  banner.textContent = message;
  root.appendChild(banner);
}

export async function boot(root: HTMLElement, api = new ApiClient("")): Promise<void> {
  let datasetName: string;
  try {
    const datasets = await api.datasets();
    const first = datasets[0];
    if (!first) {
      fatal(root, "no datasets are loaded on the server");
      return;
    }
    const params = new URLSearchParams(window.location.search);
    const requested = params.get("dataset");
    datasetName =
      requested && datasets.some((d) => d.name === requested) ? requested : first.name;
  } catch (err) {
    fatal(root, `could not reach the server: ${err instanceof Error ? err.message : err}`);
    return;
  }

  let store: SessionStore;
  try {
    const session = await api.createSession(datasetName);
    store = new SessionStore(api, session.session_id, session.dataset);
  } catch (err) {
    fatal(root, `could not open a session: ${err instanceof Error ? err.message : err}`);
    return;
  }

  store.subscribe((state) => render(root, state, store.dataset));
  installInteractions(root, store, {
    exportPng: () => {
      void exportPng(api, store.sessionId, store.dataset, EXPORT_SCALE, showToast);
    },
  });
  await store.load();
}

const rootNode = document.getElementById("app");
if (rootNode) {
  void boot(rootNode);
}
