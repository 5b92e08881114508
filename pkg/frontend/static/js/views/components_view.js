/** Filterable component browser with per-row provenance drill-down. */
import { clear, el, option } from "../dom.js";
export class ComponentsView {
    constructor(api) {
        this.api = api;
        this.filters = { page: 1 };
        this.lastPage = null;
        this.entitySelect = el("select", { "data-role": "filter-entity" }, option("", "all entities"));
        this.outletSelect = el("select", { "data-role": "filter-outlet" }, option("", "all outlets"));
        this.relationInput = el("input", {
            "data-role": "filter-relation", placeholder: "relation (e.g. amod)",
        });
        this.modifierInput = el("input", {
            "data-role": "filter-modifier", placeholder: "modifier",
        });
        this.status = el("span", { class: "status", "data-role": "components-status" });
        this.pageLabel = el("span", { "data-role": "page-label" });
        this.tableBody = el("tbody");
        const apply = el("button", { "data-role": "apply-filters" }, "Apply");
        apply.addEventListener("click", () => {
            this.filters = {
                entity: this.entitySelect.value || undefined,
                outlet: this.outletSelect.value || undefined,
                relation: this.relationInput.value.trim() || undefined,
                modifier: this.modifierInput.value.trim() || undefined,
                page: 1,
            };
            void this.refresh();
        });
        const prev = el("button", { "data-role": "page-prev" }, "<");
        prev.addEventListener("click", () => this.turnPage(-1));
        const next = el("button", { "data-role": "page-next" }, ">");
        next.addEventListener("click", () => this.turnPage(1));
        this.root = el("section", { class: "view components-view" }, el("div", { class: "toolbar" }, this.entitySelect, this.outletSelect, this.relationInput, this.modifierInput, apply, prev, this.pageLabel, next, this.status), el("table", { class: "data-table" }, el("thead", {}, el("tr", {}, el("th", {}, "Entity"), el("th", {}, "Anchor"), el("th", {}, "Modifier"), el("th", {}, "Relation"), el("th", {}, "Direction"), el("th", {}, "Outlet"), el("th", {}, "Leaning"))), this.tableBody));
    }
    setFilterChoices(entities, outlets) {
        for (const entity of entities)
            this.entitySelect.append(option(entity));
        for (const outlet of outlets)
            this.outletSelect.append(option(outlet));
    }
    turnPage(step) {
        const page = Math.max(1, (this.filters.page ?? 1) + step);
        this.filters = { ...this.filters, page };
        void this.refresh();
    }
    async refresh() {
        const payload = await this.api.components(this.filters);
        this.lastPage = payload;
        this.render(payload);
        return payload;
    }
    render(payload) {
        clear(this.tableBody);
        this.status.textContent = `${payload.total} component(s), generation ${payload.generation}`;
        this.pageLabel.textContent = `page ${payload.page}`;
        if (payload.components.length === 0) {
            this.tableBody.append(el("tr", { class: "empty-state" }, el("td", { colspan: "7" }, "No components match the current filters.")));
            return;
        }
        for (const row of payload.components) {
            const tr = el("tr", { class: "component-row" }, el("td", { "data-field": "entity" }, row.entity), el("td", { "data-field": "anchor" }, row.anchor), el("td", { "data-field": "modifier" }, row.modifier), el("td", { "data-field": "relation" }, row.relation), el("td", { "data-field": "direction" }, row.direction), el("td", { "data-field": "outlet" }, row.outlet), el("td", { "data-field": "leaning" }, row.leaning));
            const detail = el("tr", { class: "provenance hidden" }, el("td", { colspan: "7" }, el("blockquote", { "data-field": "text" }, row.text), el("code", { "data-field": "where" }, `${row.doc_id} / ${row.sent_id} / tokens ${row.anchor_token}->${row.modifier_token}`)));
            tr.addEventListener("click", () => detail.classList.toggle("hidden"));
            this.tableBody.append(tr, detail);
        }
    }
}
