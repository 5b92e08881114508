/** Keyword and relation-whitelist editor, one entity at a time, with an
 * explicit re-extract step so edits take effect atomically server-side. */

import { ApiClient, Lexicon } from "../api.js";
import { clear, el, option } from "../dom.js";

function parseList(text: string): string[] {
  return text
    .split(/[\n,]+/)
    .map((part) => part.trim())
    .filter((part) => part.length > 0);
}

export class LexiconView {
  readonly root: HTMLElement;
  private entitySelect: HTMLSelectElement;
  private keywordsArea: HTMLTextAreaElement;
  private relationsArea: HTMLTextAreaElement;
  private status: HTMLElement;
  private error: HTMLElement;
  private lexicons = new Map<string, Lexicon>();
  onExtracted: (() => void) | null = null;

  constructor(private api: ApiClient) {
    this.entitySelect = el("select", { "data-role": "lexicon-entity" });
    this.entitySelect.addEventListener("change", () => this.showCurrent());
    this.keywordsArea = el("textarea", { rows: "6", "data-role": "keywords" });
    this.relationsArea = el("textarea", { rows: "4", "data-role": "relations" });
    this.status = el("span", { class: "status", "data-role": "lexicon-status" });
    this.error = el("p", { class: "error hidden", "data-role": "lexicon-error" });

    const save = el("button", { "data-role": "save-lexicon" }, "Save");
    save.addEventListener("click", () => void this.save());
    const reextract = el("button", { "data-role": "reextract" }, "Re-extract");
    reextract.addEventListener("click", () => void this.reextract());

    this.root = el("section", { class: "view lexicon-view" },
      el("div", { class: "toolbar" },
        el("label", {}, "Entity "), this.entitySelect, save, reextract, this.status),
      this.error,
      el("div", { class: "editor-grid" },
        el("label", {}, "Keywords (comma or newline separated)", this.keywordsArea),
        el("label", {}, "Relation whitelist", this.relationsArea)),
    );
  }

  async refresh(): Promise<void> {
    const payload = await this.api.lexicons();
    this.lexicons.clear();
    clear(this.entitySelect);
    for (const lexicon of payload.entities) {
      this.lexicons.set(lexicon.entity, lexicon);
      this.entitySelect.append(option(lexicon.entity));
    }
    this.showCurrent();
  }

  private showCurrent(): void {
    const lexicon = this.lexicons.get(this.entitySelect.value);
    if (!lexicon) return;
    this.keywordsArea.value = lexicon.keywords.join("\n");
    this.relationsArea.value = lexicon.relations.join("\n");
    this.error.classList.add("hidden");
  }

  /** Validate locally; an empty keyword or relation list never reaches the
   * server. Returns the saved lexicon, or null when validation failed. */
  async save(): Promise<Lexicon | null> {
    const entity = this.entitySelect.value;
    const keywords = parseList(this.keywordsArea.value);
    const relations = parseList(this.relationsArea.value);
    if (keywords.length === 0 || relations.length === 0) {
      this.error.textContent = keywords.length === 0
        ? "Keyword list must not be empty."
        : "Relation whitelist must not be empty.";
      this.error.classList.remove("hidden");
      return null;
    }
    this.error.classList.add("hidden");
    const current = this.lexicons.get(entity);
    try {
      const saved = await this.api.putLexicon(entity, {
        keywords,
        relations,
        keyword_match: current?.keyword_match ?? "both",
      });
      this.lexicons.set(entity, saved);
      this.status.textContent = `saved ${entity} (re-extract to apply)`;
      return saved;
    } catch (err) {
      this.error.textContent = (err as Error).message;
      this.error.classList.remove("hidden");
      return null;
    }
  }

  async reextract(): Promise<void> {
    const summary = await this.api.extract();
    const parts = Object.entries(summary.by_entity).map(([e, n]) => `${e}: ${n}`);
    this.status.textContent =
      `generation ${summary.generation}, ${summary.component_count} component(s)` +
      (parts.length ? ` (${parts.join(", ")})` : "");
    this.onExtracted?.();
  }

  removeRelation(relation: string): void {
    const relations = parseList(this.relationsArea.value).filter((r) => r !== relation);
    this.relationsArea.value = relations.join("\n");
  }
}
