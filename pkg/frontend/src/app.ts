/** Entry point: tab navigation over the four views, all state server-side. */

import { ApiClient } from "./api.js";
import { clear, el } from "./dom.js";
import { CodingView } from "./views/coding_view.js";
import { ComponentsView } from "./views/components_view.js";
import { ContrastView } from "./views/contrast_view.js";
import { LexiconView } from "./views/lexicon_view.js";
import { TablesView } from "./views/tables_view.js";

declare global {
  interface Window {
    SUFA_API_BASE?: string;
  }
}

export async function bootstrap(root: HTMLElement, api?: ApiClient): Promise<void> {
  const client = api ?? new ApiClient(window.SUFA_API_BASE ?? "");

  const [stats, lexicons] = await Promise.all([client.stats(), client.lexicons()]);
  const entities = lexicons.entities.map((lx) => lx.entity);
  const outlets = Object.keys(stats.per_outlet);

  const componentsView = new ComponentsView(client);
  componentsView.setFilterChoices(entities, outlets);
  const tablesView = new TablesView(client);
  tablesView.setEntities(entities);
  const contrastView = new ContrastView(client);
  contrastView.setEntities(entities);
  const lexiconView = new LexiconView(client);
  const codingView = new CodingView(client);
  codingView.setEntities(entities);

  lexiconView.onExtracted = () => {
    void componentsView.refresh();
    void tablesView.refresh();
    void contrastView.refresh();
  };

  const views: Record<string, HTMLElement> = {
    components: componentsView.root,
    tables: tablesView.root,
    contrast: contrastView.root,
    lexicons: lexiconView.root,
    coding: codingView.root,
  };

  const main = el("main");
  const nav = el("nav", { class: "tabs" });
  for (const name of Object.keys(views)) {
    const button = el("button", { "data-tab": name }, name);
    button.addEventListener("click", () => {
      clear(main);
      main.append(views[name]);
      for (const other of nav.querySelectorAll("button")) {
        other.classList.toggle("active", other === button);
      }
    });
    nav.append(button);
  }

  const header = el("header", {},
    el("h1", {}, "sufa"),
    el("span", { class: "corpus-stats", "data-role": "corpus-stats" },
      `${stats.total} tokens across ${outlets.length} outlet(s)`),
    nav);

  clear(root);
  root.append(header, main);

  await Promise.all([
    componentsView.refresh(),
    tablesView.refresh(),
    contrastView.refresh(),
    lexiconView.refresh(),
    codingView.refreshSessionList(),
  ]);
  (nav.querySelector("button[data-tab=components]") as HTMLButtonElement).click();
}

if (typeof document !== "undefined" && document.getElementById("app")) {
  void bootstrap(document.getElementById("app") as HTMLElement);
}
