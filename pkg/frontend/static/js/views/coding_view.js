/** Coding board: one column per frame group plus the unassigned pool.
 *
 * Drags call the same actions the tests call directly: a plain drag moves a
 * chip (assign to target, then unassign from the source group), a copy-drag
 * (Alt/Ctrl held) adds a second membership. Updates are optimistic and one
 * mutation is in flight per session at a time; on error the board rolls
 * back to the server's last state and surfaces the error message.
 */
import { clear, el, option } from "../dom.js";
export class CodingView {
    constructor(api) {
        this.api = api;
        this.state = null;
        this.queue = Promise.resolve();
        this.lastExport = null;
        this.entitySelect = el("select", { "data-role": "session-entity" });
        this.sessionSelect = el("select", { "data-role": "session-picker" });
        this.sessionSelect.addEventListener("change", () => void this.openExisting());
        this.board = el("div", { class: "board", "data-role": "board" });
        this.error = el("p", { class: "error hidden", "data-role": "coding-error" });
        this.staleBanner = el("p", { class: "warning hidden", "data-role": "stale-banner" }, "This session is stale: components were re-extracted since it was opened.");
        const create = el("button", { "data-role": "new-session" }, "New session");
        create.addEventListener("click", () => {
            this.createSession().catch((err) => {
                this.error.textContent = err.message;
                this.error.classList.remove("hidden");
            });
        });
        const exportBtn = el("button", { "data-role": "export-codebook" }, "Export codebook");
        exportBtn.addEventListener("click", () => void this.exportCodebook());
        this.root = el("section", { class: "view coding-view" }, el("div", { class: "toolbar" }, el("label", {}, "Entity "), this.entitySelect, create, el("label", {}, " Session "), this.sessionSelect, exportBtn), this.staleBanner, this.error, this.board);
    }
    setEntities(entities) {
        clear(this.entitySelect);
        for (const entity of entities)
            this.entitySelect.append(option(entity));
    }
    async refreshSessionList() {
        const payload = await this.api.sessions();
        clear(this.sessionSelect);
        this.sessionSelect.append(option("", "pick a session"));
        for (const s of payload.sessions) {
            this.sessionSelect.append(option(s.session_id, `${s.session_id} (${s.entity})`));
        }
        if (this.state)
            this.sessionSelect.value = this.state.session_id;
    }
    async createSession() {
        const session = await this.api.createSession(this.entitySelect.value);
        this.setState(session);
        await this.refreshSessionList();
        return session;
    }
    async openExisting() {
        const id = this.sessionSelect.value;
        if (!id)
            return;
        this.setState(await this.api.session(id));
    }
    async open(id) {
        const session = await this.api.session(id);
        this.setState(session);
        return session;
    }
    setState(session) {
        this.state = session;
        this.staleBanner.classList.toggle("hidden", !session.stale);
        this.render();
    }
    /** Enqueue a mutation; the UI applies `optimistic` immediately, then
     * reconciles with the server response (or rolls back on failure). */
    mutate(optimistic, call) {
        const run = async () => {
            if (!this.state)
                return null;
            const before = this.state;
            const draft = structuredClone(before);
            optimistic(draft);
            this.state = draft;
            this.render();
            try {
                const confirmed = await call();
                this.setState(confirmed);
                this.error.classList.add("hidden");
                return confirmed;
            }
            catch (err) {
                this.setState(before); // rollback
                this.error.textContent = err.message;
                this.error.classList.remove("hidden");
                return null;
            }
        };
        const next = this.queue.then(run);
        this.queue = next.catch(() => undefined);
        return next;
    }
    assign(modifier, relation, label) {
        const id = this.state?.session_id ?? "";
        return this.mutate((draft) => {
            const member = this.findMember(draft, modifier, relation);
            draft.unassigned = draft.unassigned.filter((m) => !(m.modifier === modifier && m.relation === relation));
            let group = draft.groups.find((g) => g.label === label);
            if (!group) {
                group = { label, note: "", members: [] };
                draft.groups.push(group);
            }
            if (!group.members.some((m) => m.modifier === modifier && m.relation === relation)) {
                group.members.push(member);
            }
        }, () => this.api.assign(id, modifier, relation, label));
    }
    unassign(modifier, relation, label) {
        const id = this.state?.session_id ?? "";
        return this.mutate((draft) => {
            const member = this.findMember(draft, modifier, relation);
            const group = draft.groups.find((g) => g.label === label);
            if (group) {
                group.members = group.members.filter((m) => !(m.modifier === modifier && m.relation === relation));
            }
            const elsewhere = draft.groups.some((g) => g.members.some((m) => m.modifier === modifier && m.relation === relation));
            if (!elsewhere) {
                draft.unassigned.push(member);
            }
        }, () => this.api.unassign(id, modifier, relation, label));
    }
    move(modifier, relation, from, to) {
        void this.assign(modifier, relation, to);
        return this.unassign(modifier, relation, from);
    }
    merge(a, b, newLabel) {
        const id = this.state?.session_id ?? "";
        return this.mutate(() => undefined, () => this.api.merge(id, a, b, newLabel));
    }
    async exportCodebook() {
        if (!this.state)
            return null;
        const text = await this.api.codebookMarkdown(this.state.session_id);
        this.lastExport = text;
        if (typeof URL.createObjectURL === "function") {
            try {
                const url = URL.createObjectURL(new Blob([text], { type: "text/markdown" }));
                const a = el("a", { href: url, download: `${this.state.session_id}-codebook.md` });
                a.click();
                URL.revokeObjectURL(url);
            }
            catch {
                /* download is a convenience; the export itself already succeeded */
            }
        }
        return text;
    }
    findMember(draft, modifier, relation) {
        const known = draft.pair_counts.find((m) => m.modifier === modifier && m.relation === relation);
        return known ?? { modifier, relation, count: 0 };
    }
    chip(member, from) {
        const chip = el("span", {
            class: "chip",
            draggable: "true",
            "data-modifier": member.modifier,
            "data-relation": member.relation,
        }, `${member.modifier} `, el("small", {}, `(${member.relation}, ${member.count})`));
        chip.addEventListener("dragstart", (event) => {
            const payload = {
                modifier: member.modifier, relation: member.relation, from,
            };
            event.dataTransfer?.setData("application/json", JSON.stringify(payload));
            if (event.dataTransfer) {
                event.dataTransfer.effectAllowed = "copyMove";
            }
        });
        return chip;
    }
    column(label, members, note) {
        const title = label ?? "unassigned";
        const body = el("div", { class: "chips" });
        for (const member of members)
            body.append(this.chip(member, label));
        const column = el("div", {
            class: `column ${label === null ? "unassigned-column" : "group-column"}`,
            "data-label": title,
        }, el("h3", {}, title), body);
        if (label !== null) {
            const noteArea = el("textarea", {
                class: "note", rows: "2", placeholder: "notes",
                "data-role": `note-${label}`,
            });
            noteArea.value = note ?? "";
            column.append(noteArea);
        }
        column.addEventListener("dragover", (event) => event.preventDefault());
        column.addEventListener("drop", (event) => {
            event.preventDefault();
            const raw = event.dataTransfer?.getData("application/json");
            if (!raw)
                return;
            const source = JSON.parse(raw);
            this.handleDrop(source, label, event.altKey || event.ctrlKey);
        });
        return column;
    }
    /** Exactly what a drop does; tests exercise this path directly. */
    handleDrop(source, target, copy) {
        if (target === null) {
            if (source.from !== null) {
                void this.unassign(source.modifier, source.relation, source.from);
            }
            return;
        }
        if (source.from === target)
            return;
        if (source.from === null || copy) {
            void this.assign(source.modifier, source.relation, target);
        }
        else {
            void this.move(source.modifier, source.relation, source.from, target);
        }
    }
    async idle() {
        await this.queue;
    }
    render() {
        clear(this.board);
        if (!this.state) {
            this.board.append(el("p", { class: "empty-state" }, "No session open."));
            return;
        }
        this.board.append(this.column(null, this.state.unassigned));
        for (const group of this.state.groups) {
            this.board.append(this.column(group.label, group.members, group.note));
        }
        const newGroup = el("div", { class: "column new-group-target", "data-label": "" }, el("h3", {}, "drop here for a new group"));
        newGroup.addEventListener("dragover", (event) => event.preventDefault());
        newGroup.addEventListener("drop", (event) => {
            event.preventDefault();
            const raw = event.dataTransfer?.getData("application/json");
            if (!raw || !this.state)
                return;
            const source = JSON.parse(raw);
            const label = window.prompt("New group label") ?? "";
            if (label)
                this.handleDrop(source, label, event.altKey || event.ctrlKey);
        });
        this.board.append(newGroup);
    }
}
