/** Typed client for the sufa JSON API. The UI computes nothing itself:
 * every count and grouping shown on screen comes from these payloads. */

export interface StatsPayload {
  per_outlet: Record<string, number>;
  total: number;
}

export interface Lexicon {
  entity: string;
  keywords: string[];
  relations: string[];
  keyword_match: string;
}

export interface ComponentRow {
  entity: string;
  anchor: string;
  modifier: string;
  relation: string;
  direction: string;
  doc_id: string;
  sent_id: string;
  outlet: string;
  leaning: string;
  anchor_token: number;
  modifier_token: number;
  text: string;
}

export interface ComponentsPage {
  generation: number;
  total: number;
  page: number;
  page_size: number;
  components: ComponentRow[];
}

export interface ComponentFilters {
  entity?: string;
  outlet?: string;
  relation?: string;
  modifier?: string;
  page?: number;
  page_size?: number;
}

/** entity -> outlet -> relation -> modifier -> count */
export type TablePayload = Record<string, Record<string, Record<string, Record<string, number>>>>;

export interface ContrastRow {
  modifier: string;
  relation: string;
  left: number;
  right: number;
  delta: number;
}

export interface ContrastPayload {
  entity: string;
  rows: ContrastRow[];
}

export interface ExtractSummary {
  generation: number;
  component_count: number;
  by_entity: Record<string, number>;
}

export interface SessionMember {
  modifier: string;
  relation: string;
  count: number;
}

export interface SessionGroup {
  label: string;
  note: string;
  members: SessionMember[];
}

export interface SessionPayload {
  session_id: string;
  entity: string;
  stale: boolean;
  source_fingerprint: string;
  groups: SessionGroup[];
  unassigned: SessionMember[];
  pair_counts: SessionMember[];
  history: { timestamp: string; action: string; payload: Record<string, unknown> }[];
}

export interface SessionSummary {
  session_id: string;
  entity: string;
  groups: number;
}

export interface ClusterGroupPayload {
  label: string;
  modifiers: { word: string; count: number }[];
  inertia_share: number;
}

export interface ClusterReportPayload {
  entity: string;
  k: number;
  seed: number;
  groups: ClusterGroupPayload[];
  oov: string[];
  silhouette: number | null;
  inertia: number;
  iterations: number;
}

export class ApiError extends Error {
  constructor(public code: string, message: string, public status: number) {
    super(message);
  }
}

async function parseError(response: Response): Promise<ApiError> {
  try {
    const body = await response.json();
    if (body && body.error) {
      return new ApiError(body.error.code, body.error.message, response.status);
    }
  } catch {
    /* non-JSON error body */
  }
  return new ApiError("http", `HTTP ${response.status}`, response.status);
}

export class ApiClient {
  constructor(private base: string = "") {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await fetch(this.base + path, init);
    if (!response.ok) {
      throw await parseError(response);
    }
    return (await response.json()) as T;
  }

  private async requestText(path: string): Promise<string> {
    const response = await fetch(this.base + path);
    if (!response.ok) {
      throw await parseError(response);
    }
    return response.text();
  }

  private post<T>(path: string, body: unknown): Promise<T> {
    return this.request<T>(path, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
    });
  }

  health(): Promise<{ status: string }> {
    return this.request("/health");
  }

  stats(): Promise<StatsPayload> {
    return this.request("/stats");
  }

  lexicons(): Promise<{ entities: Lexicon[] }> {
    return this.request("/lexicons");
  }

  putLexicon(entity: string, body: Omit<Lexicon, "entity">): Promise<Lexicon> {
    return this.request(`/lexicons/${encodeURIComponent(entity)}`, {
      method: "PUT",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
    });
  }

  extract(): Promise<ExtractSummary> {
    return this.post("/extract", {});
  }

  components(filters: ComponentFilters = {}): Promise<ComponentsPage> {
    const params = new URLSearchParams();
    for (const [key, value] of Object.entries(filters)) {
      if (value !== undefined && value !== "") {
        params.set(key, String(value));
      }
    }
    const query = params.toString();
    return this.request(`/components${query ? "?" + query : ""}`);
  }

  table(entity: string): Promise<TablePayload> {
    return this.request(`/tables/${encodeURIComponent(entity)}`);
  }

  contrast(entity: string): Promise<ContrastPayload> {
    return this.request(`/contrast/${encodeURIComponent(entity)}`);
  }

  cluster(entity: string, k: number, seed: number): Promise<ClusterReportPayload> {
    return this.post("/cluster", { entity, k, seed });
  }

  sessions(): Promise<{ sessions: SessionSummary[] }> {
    return this.request("/sessions");
  }

  createSession(entity: string): Promise<SessionPayload> {
    return this.post("/sessions", { entity });
  }

  session(id: string): Promise<SessionPayload> {
    return this.request(`/sessions/${encodeURIComponent(id)}`);
  }

  assign(id: string, modifier: string, relation: string, label: string): Promise<SessionPayload> {
    return this.post(`/sessions/${encodeURIComponent(id)}/assign`, { modifier, relation, label });
  }

  unassign(id: string, modifier: string, relation: string, label: string): Promise<SessionPayload> {
    return this.post(`/sessions/${encodeURIComponent(id)}/unassign`, { modifier, relation, label });
  }

  merge(id: string, a: string, b: string, newLabel: string): Promise<SessionPayload> {
    return this.post(`/sessions/${encodeURIComponent(id)}/merge`, { a, b, new_label: newLabel });
  }

  codebookMarkdown(id: string): Promise<string> {
    return this.requestText(`/sessions/${encodeURIComponent(id)}/codebook?format=markdown`);
  }
}
