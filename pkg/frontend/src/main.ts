// Browser entry point: binds an AnnotatorApp to #app with event delegation
// and re-renders after every interaction. Service URL defaults to the page
// origin so the UI can be served next to the API.

import { ApiClient, ApiError } from "./api.js";
import { renderApp } from "./render.js";
import { AnnotatorApp } from "./state.js";

function attr(el: Element, name: string): string {
  return el.getAttribute(name) ?? "";
}

function localId(el: Element): number {
  return Number(attr(el, "data-local-id"));
}

export function mount(root: HTMLElement, api: ApiClient): AnnotatorApp {
  const app = new AnnotatorApp(api);

  const redraw = (): void => {
    root.innerHTML = renderApp(app);
  };

  const run = (work: Promise<unknown> | void): void => {
    Promise.resolve(work)
      .catch((error: unknown) => {
        app.notice =
          error instanceof ApiError ? error.detail : String(error);
      })
      .finally(redraw);
  };

  root.addEventListener("click", (event) => {
    const target = (event.target as Element).closest("[data-action]");
    if (target === null) return;
    const session = app.session;
    switch (attr(target, "data-action")) {
      case "block":
        session?.clickBlock(
          attr(target, "data-side") === "pred" ? "pred" : "cur",
          localId(target),
        );
        redraw();
        break;
      case "no-pred":
        session?.markNoPredecessor(localId(target));
        redraw();
        break;
      case "clear":
        session?.clearAnnotation(localId(target));
        redraw();
        break;
      case "diff":
        run(app.toggleDiff(localId(target)));
        break;
      case "save":
        run(app.save());
        break;
      case "next":
        run(app.next());
        break;
      case "prev":
        run(app.previous());
        break;
      case "reload":
        run(app.reload());
        break;
      case "skip":
        app.skipFullyAuto = (target as HTMLInputElement).checked;
        break;
      default:
        break;
    }
  });

  root.addEventListener("change", (event) => {
    const target = event.target as Element;
    if (attr(target, "data-action") !== "comment") return;
    app.session?.setComment(localId(target), (target as HTMLInputElement).value);
    redraw();
  });

  run(app.start().then(() => app.refreshCompletion()));
  return app;
}

declare global {
  interface Window {
    annotator?: AnnotatorApp;
  }
}

const rootEl = typeof document === "undefined" ? null : document.getElementById("app");
if (rootEl !== null) {
  window.annotator = mount(rootEl, new ApiClient(""));
}
