/** Gateway client: the single origin this UI ever talks to.
 *
 * Every request URL is appended to `requestLog` so tests can assert that
 * no other origin is contacted.
 */

import type {
  AreaFeature,
  DocumentSource,
  Envelope,
  HeatmapData,
  MonthlyData,
  RestrictionRecord,
  StatementRecord,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
  ) {
    super(message);
  }
}

type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class GatewayClient {
  token: string | null = null;
  readonly requestLog: string[] = [];

  constructor(
    readonly baseUrl: string,
    private readonly fetchFn: FetchLike = (url, init) => globalThis.fetch(url, init),
  ) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const url = this.baseUrl.replace(/\/$/, "") + path;
    this.requestLog.push(url);
    const headers: Record<string, string> = {};
    if (this.token) headers["Authorization"] = `Bearer ${this.token}`;
    if (body !== undefined) headers["Content-Type"] = "application/json";
    const response = await this.fetchFn(url, {
      method,
      headers,
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    const envelope = (await response.json()) as Envelope<T>;
    if (envelope.status !== "ok" || envelope.data === undefined) {
      const err = envelope.error ?? { code: "internal", message: "malformed envelope" };
      throw new ApiError(response.status, err.code, err.message);
    }
    return envelope.data;
  }

  async login(username: string, password: string): Promise<string[]> {
    const data = await this.request<{ token: string; rights: string[] }>(
      "POST",
      "/auth/login",
      { username, password },
    );
    this.token = data.token;
    return data.rights;
  }

  areas(): Promise<{ features: AreaFeature[] }> {
    return this.request("GET", "/areas");
  }

  heatmap(bbox: [number, number, number, number], cell: number, categories?: string[]): Promise<HeatmapData> {
    let path = `/heatmap?bbox=${bbox.join(",")}&cell=${cell}`;
    if (categories && categories.length) path += `&categories=${categories.join(",")}`;
    return this.request("GET", path);
  }

  activeRestrictions(at?: string): Promise<{ active: RestrictionRecord[]; unverifiable: RestrictionRecord[] }> {
    return this.request("GET", at ? `/restrictions/active?at=${encodeURIComponent(at)}` : "/restrictions/active");
  }

  inferredRestrictions(at?: string): Promise<{ inferred: RestrictionRecord[] }> {
    return this.request("GET", at ? `/restrictions/inferred?at=${encodeURIComponent(at)}` : "/restrictions/inferred");
  }

  restrictionsByMonth(): Promise<MonthlyData> {
    return this.request("GET", "/restrictions/by-month");
  }

  documentSource(documentId: string): Promise<DocumentSource> {
    return this.request("GET", `/documents/${encodeURIComponent(documentId)}/source`);
  }

  documentStatements(documentId: string): Promise<{ documentId: string; statements: StatementRecord[] }> {
    return this.request("GET", `/documents/${encodeURIComponent(documentId)}/statements`);
  }

  projects(): Promise<{ projects: { id: string; name: string }[] }> {
    return this.request("GET", "/projects");
  }

  projectDocuments(projectId: string): Promise<{ documents: { id: string; title: string }[] }> {
    return this.request("GET", `/projects/${encodeURIComponent(projectId)}/documents`);
  }

  latestReading(station: string, parameter: string, at?: string): Promise<{ reading: { value: number; unit: string; timestamp: string } | null }> {
    const suffix = at ? `?at=${encodeURIComponent(at)}` : "";
    return this.request(
      "GET",
      `/sensors/${encodeURIComponent(station)}/${encodeURIComponent(parameter)}/latest${suffix}`,
    );
  }
}
