/** Frequency table per entity, rendered straight from the nested JSON
 * payload: outlet rows, relation-grouped cells, parenthesized counts. */
import { ApiError } from "../api.js";
import { clear, el, option } from "../dom.js";
export class TablesView {
    constructor(api) {
        this.api = api;
        this.lastPayload = null;
        this.entitySelect = el("select", { "data-role": "table-entity" });
        this.entitySelect.addEventListener("change", () => void this.refresh());
        this.body = el("div", { "data-role": "table-body" });
        this.root = el("section", { class: "view tables-view" }, el("div", { class: "toolbar" }, el("label", {}, "Entity "), this.entitySelect), this.body);
    }
    setEntities(entities) {
        clear(this.entitySelect);
        for (const entity of entities)
            this.entitySelect.append(option(entity));
    }
    async refresh() {
        const entity = this.entitySelect.value;
        let payload;
        try {
            payload = await this.api.table(entity);
        }
        catch (err) {
            if (err instanceof ApiError && err.code === "UnknownEntity") {
                payload = { [entity]: {} }; // no components for this entity yet
            }
            else {
                throw err;
            }
        }
        this.lastPayload = payload;
        this.render(entity, payload);
        return payload;
    }
    render(entity, payload) {
        clear(this.body);
        const byOutlet = payload[entity] ?? {};
        const outlets = Object.keys(byOutlet);
        if (outlets.length === 0) {
            this.body.append(el("p", { class: "empty-state" }, "No components for this entity."));
            return;
        }
        const tbody = el("tbody");
        for (const outlet of outlets) {
            const cell = el("td", { "data-field": "cells" });
            for (const [relation, modifiers] of Object.entries(byOutlet[outlet])) {
                const group = el("span", { class: "relation-group", "data-relation": relation }, el("strong", {}, `${relation}: `));
                const parts = Object.entries(modifiers).map(([modifier, count]) => `${modifier} (${count})`);
                group.append(parts.join(", "), "; ");
                cell.append(group);
            }
            tbody.append(el("tr", { "data-outlet": outlet }, el("td", { "data-field": "outlet" }, outlet), cell));
        }
        this.body.append(el("table", { class: "data-table" }, el("thead", {}, el("tr", {}, el("th", {}, "Outlet"), el("th", {}, "Components"))), tbody));
    }
}
