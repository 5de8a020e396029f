import { API_BASE } from "./config";
import type { EdgeDetail, EdgeKey, GraphPayload, OverviewPayload, Radius, SearchResult } from "./types";

export class ApiError extends Error {
  constructor(
    public readonly code: string,
    message: string,
    public readonly status: number,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

/** Thin typed client over the read-only graph endpoints. */
export class ApiClient {
  constructor(
    private readonly base: string = API_BASE,
    private readonly fetchFn: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async get<T>(path: string): Promise<T> {
    let response: Response;
    try {
      response = await this.fetchFn(`${this.base}${path}`);
    } catch (err) {
      throw new ApiError("unreachable", String(err), 0);
    }
    if (!response.ok) {
      let code = "internal";
      let message = `${response.status}`;
      try {
        const body = (await response.json()) as { code?: string; message?: string };
        code = body.code ?? code;
        message = body.message ?? message;
      } catch {
        // non-JSON error body: keep the status text
      }
      throw new ApiError(code, message, response.status);
    }
    return (await response.json()) as T;
  }

  overview(): Promise<OverviewPayload> {
    return this.get("/graph/overview");
  }

  fullGraph(): Promise<GraphPayload> {
    return this.get("/graph/full");
  }

  ego(companyId: string, radius: Radius): Promise<GraphPayload> {
    return this.get(`/company/${encodeURIComponent(companyId)}/ego?radius=${radius}`);
  }

  search(query: string): Promise<SearchResult[]> {
    return this.get(`/search?q=${encodeURIComponent(query)}`);
  }

  edge(key: EdgeKey): Promise<EdgeDetail> {
    const { source, target, year } = key;
    return this.get(`/edge/${encodeURIComponent(source)}/${encodeURIComponent(target)}/${year}`);
  }
}
