import { ApiClient } from "./api.js";
import { handleKey } from "./keyboard.js";
import { render } from "./render.js";
import { SessionStore } from "./session.js";

const POLL_MS = 3000;

async function boot(): Promise<void> {
  const root = document.getElementById("app");
  if (!root) throw new Error("missing #app element");

  const params = new URLSearchParams(window.location.search);
  const resolver = params.get("resolver") ?? "collective";
  const iteration = params.get("iteration");

  const store = new SessionStore(new ApiClient(window.location.origin), resolver);
  const repaint = () => void render(root, store);
  store.subscribe(repaint);

  await store.load(iteration !== null ? Number(iteration) : undefined);

  window.addEventListener("keydown", (event: KeyboardEvent) => {
    if (event.target instanceof HTMLInputElement || event.target instanceof HTMLTextAreaElement) {
      return;
    }
    const action = handleKey(store.keyContext(), event.key);
    if (action) {
      event.preventDefault();
      void store.dispatch(action);
    }
  });

  // other browsers in the session write too; last write wins, poll reflects it
  setInterval(() => void store.refresh().catch(() => undefined), POLL_MS);
}

void boot();
