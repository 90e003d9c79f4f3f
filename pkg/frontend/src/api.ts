import {
  ConceptDetail,
  ConceptDetailSchema,
  GraphCreatedSchema,
  ImportReport,
  ImportReportSchema,
  PluginInfo,
  PluginInfoSchema,
  PluginResult,
  PluginResultSchema,
  SelectResults,
  SelectResultsSchema,
  ViewGraph,
  ViewGraphSchema,
} from "./types.js";

/**
 * Minimal transport abstraction so tests can intercept every request
 * (the UI performs no graph mutation of its own — all structural change
 * must round-trip through here).
 */
export interface Transport {
  request(
    method: "GET" | "POST",
    url: string,
    body?: unknown,
  ): Promise<{ status: number; body: unknown }>;
}

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly detail: unknown,
  ) {
    super(`API error ${status}`);
  }
}

export function fetchTransport(fetchImpl: typeof fetch = fetch): Transport {
  return {
    async request(method, url, body) {
      const resp = await fetchImpl(url, {
        method,
        headers: body === undefined ? {} : { "Content-Type": "application/json" },
        body: body === undefined ? undefined : JSON.stringify(body),
      });
      const text = await resp.text();
      let parsed: unknown = text;
      try {
        parsed = JSON.parse(text);
      } catch {
        // non-JSON bodies (e.g. export.nt) pass through as text
      }
      return { status: resp.status, body: parsed };
    },
  };
}

/** Bootstrap configuration: a single JSON blob naming the API base URL. */
export interface Bootstrap {
  apiBase: string;
}

export class ApiClient {
  constructor(
    private readonly bootstrap: Bootstrap,
    private readonly transport: Transport,
  ) {}

  private async call(method: "GET" | "POST", path: string, body?: unknown) {
    const { status, body: resp } = await this.transport.request(
      method,
      `${this.bootstrap.apiBase}${path}`,
      body,
    );
    if (status >= 400) {
      throw new ApiError(status, resp);
    }
    return resp;
  }

  async createGraph(): Promise<string> {
    return GraphCreatedSchema.parse(await this.call("POST", "/graphs")).id;
  }

  async getView(graphId: string): Promise<ViewGraph> {
    return ViewGraphSchema.parse(
      await this.call("GET", `/graphs/${graphId}/view`),
    );
  }

  async importSparql(
    graphId: string,
    endpoint: string,
    query: string,
    source: string,
  ): Promise<ImportReport> {
    return ImportReportSchema.parse(
      await this.call("POST", `/graphs/${graphId}/import/sparql`, {
        endpoint,
        query,
        source,
      }),
    );
  }

  async runPlugin(
    graphId: string,
    name: string,
    params: Record<string, unknown>,
  ): Promise<PluginResult> {
    return PluginResultSchema.parse(
      await this.call("POST", `/graphs/${graphId}/plugins/${name}`, params),
    );
  }

  async getConcept(graphId: string, nodeId: number): Promise<ConceptDetail> {
    return ConceptDetailSchema.parse(
      await this.call("GET", `/graphs/${graphId}/concepts/${nodeId}`),
    );
  }

  async listPlugins(): Promise<PluginInfo[]> {
    const resp = await this.call("GET", "/plugins");
    return (resp as unknown[]).map((p) => PluginInfoSchema.parse(p));
  }

  /** SELECT preview straight against a SPARQL endpoint (no import). */
  async selectPreview(endpoint: string, query: string): Promise<SelectResults> {
    const url = `${endpoint}?query=${encodeURIComponent(query)}`;
    const { status, body } = await this.transport.request("GET", url);
    if (status >= 400) {
      throw new ApiError(status, body);
    }
    return SelectResultsSchema.parse(body);
  }
}
