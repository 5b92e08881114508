/** Left-vs-right bar pairs per modifier, straight from the contrast payload.
 * The server already ranks rows by absolute difference, zero-delta rows last;
 * the view preserves that order and renders, never recomputes, the deltas. */

import { ApiClient, ApiError, ContrastPayload } from "../api.js";
import { clear, el, option } from "../dom.js";

export class ContrastView {
  readonly root: HTMLElement;
  private entitySelect: HTMLSelectElement;
  private body: HTMLElement;
  lastPayload: ContrastPayload | null = null;

  constructor(private api: ApiClient) {
    this.entitySelect = el("select", { "data-role": "contrast-entity" });
    this.entitySelect.addEventListener("change", () => void this.refresh());
    this.body = el("div", { "data-role": "contrast-body" });
    this.root = el("section", { class: "view contrast-view" },
      el("div", { class: "toolbar" }, el("label", {}, "Entity "), this.entitySelect),
      this.body);
  }

  setEntities(entities: string[]): void {
    clear(this.entitySelect);
    for (const entity of entities) this.entitySelect.append(option(entity));
  }

  async refresh(): Promise<ContrastPayload> {
    const entity = this.entitySelect.value;
    let payload: ContrastPayload;
    try {
      payload = await this.api.contrast(entity);
    } catch (err) {
      if (err instanceof ApiError && err.code === "UnknownEntity") {
        payload = { entity, rows: [] }; // no components for this entity yet
      } else {
        throw err;
      }
    }
    this.lastPayload = payload;
    this.render(payload);
    return payload;
  }

  private render(payload: ContrastPayload): void {
    clear(this.body);
    if (payload.rows.length === 0) {
      this.body.append(el("p", { class: "empty-state" }, "No components for this entity."));
      return;
    }
    const max = Math.max(1, ...payload.rows.map((r) => Math.max(r.left, r.right)));
    for (const row of payload.rows) {
      const deltaText = row.delta > 0 ? `+${row.delta}` : String(row.delta);
      const item = el("div", { class: "contrast-row", "data-modifier": row.modifier,
                               "data-relation": row.relation },
        el("span", { class: "contrast-label" }, `${row.modifier} (${row.relation})`),
        el("span", { class: "bar-pair" },
          el("span", { class: "bar bar-left",
                       style: `width:${(row.left / max) * 100}%` }),
          el("span", { class: "count count-left", "data-field": "left" }, String(row.left)),
          el("span", { class: "count count-right", "data-field": "right" }, String(row.right)),
          el("span", { class: "bar bar-right",
                       style: `width:${(row.right / max) * 100}%` })),
        el("span", { class: `delta-badge ${row.delta === 0 ? "delta-zero" : ""}`,
                     "data-field": "delta" }, deltaText),
      );
      this.body.append(item);
    }
  }
}
