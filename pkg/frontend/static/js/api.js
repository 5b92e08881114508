/** Typed client for the sufa JSON API. The UI computes nothing itself:
 * every count and grouping shown on screen comes from these payloads. */
export class ApiError extends Error {
    constructor(code, message, status) {
        super(message);
        this.code = code;
        this.status = status;
    }
}
async function parseError(response) {
    try {
        const body = await response.json();
        if (body && body.error) {
            return new ApiError(body.error.code, body.error.message, response.status);
        }
    }
    catch {
        /* non-JSON error body */
    }
    return new ApiError("http", `HTTP ${response.status}`, response.status);
}
export class ApiClient {
    constructor(base = "") {
        this.base = base;
    }
    async request(path, init) {
        const response = await fetch(this.base + path, init);
        if (!response.ok) {
            throw await parseError(response);
        }
        return (await response.json());
    }
    async requestText(path) {
        const response = await fetch(this.base + path);
        if (!response.ok) {
            throw await parseError(response);
        }
        return response.text();
    }
    post(path, body) {
        return this.request(path, {
            method: "POST",
            headers: { "Content-Type": "application/json" },
            body: JSON.stringify(body),
        });
    }
    health() {
        return this.request("/health");
    }
    stats() {
        return this.request("/stats");
    }
    lexicons() {
        return this.request("/lexicons");
    }
    putLexicon(entity, body) {
        return this.request(`/lexicons/${encodeURIComponent(entity)}`, {
            method: "PUT",
            headers: { "Content-Type": "application/json" },
            body: JSON.stringify(body),
        });
    }
    extract() {
        return this.post("/extract", {});
    }
    components(filters = {}) {
        const params = new URLSearchParams();
        for (const [key, value] of Object.entries(filters)) {
            if (value !== undefined && value !== "") {
                params.set(key, String(value));
            }
        }
        const query = params.toString();
        return this.request(`/components${query ? "?" + query : ""}`);
    }
    table(entity) {
        return this.request(`/tables/${encodeURIComponent(entity)}`);
    }
    contrast(entity) {
        return this.request(`/contrast/${encodeURIComponent(entity)}`);
    }
    cluster(entity, k, seed) {
        return this.post("/cluster", { entity, k, seed });
    }
    sessions() {
        return this.request("/sessions");
    }
    createSession(entity) {
        return this.post("/sessions", { entity });
    }
    session(id) {
        return this.request(`/sessions/${encodeURIComponent(id)}`);
    }
    assign(id, modifier, relation, label) {
        return this.post(`/sessions/${encodeURIComponent(id)}/assign`, { modifier, relation, label });
    }
    unassign(id, modifier, relation, label) {
        return this.post(`/sessions/${encodeURIComponent(id)}/unassign`, { modifier, relation, label });
    }
    merge(id, a, b, newLabel) {
        return this.post(`/sessions/${encodeURIComponent(id)}/merge`, { a, b, new_label: newLabel });
    }
    codebookMarkdown(id) {
        return this.requestText(`/sessions/${encodeURIComponent(id)}/codebook?format=markdown`);
    }
}
