// Thin typed client over fetch. The bearer token, once entered, lives in
// session storage and rides along on every call.

import { ApiError, Flag, ScreenRequest, ScreenResponse, TenderRecord } from "./types";

export type ApiResult<T> =
  | { ok: true; value: T }
  | { ok: false; status: number; error: ApiError };

export interface FetchLike {
  (input: string, init?: RequestInit): Promise<Response>;
}

export class ApiClient {
  private base: string;
  private fetcher: FetchLike;
  private tokenStore: Storage | null;

  constructor(base = "", fetcher: FetchLike = fetch.bind(globalThis),
              tokenStore: Storage | null = typeof sessionStorage === "undefined" ? null : sessionStorage) {
    this.base = base.replace(/\/$/, "");
    this.fetcher = fetcher;
    this.tokenStore = tokenStore;
  }

  setToken(token: string): void {
    this.tokenStore?.setItem("tenderscreen_token", token);
  }

  get token(): string | null {
    return this.tokenStore?.getItem("tenderscreen_token") ?? null;
  }

  private headers(): Record<string, string> {
    const h: Record<string, string> = { "Content-Type": "application/json" };
    const token = this.token;
    if (token) h["Authorization"] = `Bearer ${token}`;
    return h;
  }

  private async request<T>(method: string, path: string, body?: unknown): Promise<ApiResult<T>> {
    let response: Response;
    try {
      response = await this.fetcher(this.base + path, {
        method,
        headers: this.headers(),
        body: body === undefined ? undefined : JSON.stringify(body),
      });
    } catch (err) {
      return { ok: false, status: 0, error: { error: "NetworkError", detail: String(err) } };
    }
    if (response.ok) {
      return { ok: true, value: (await response.json()) as T };
    }
    let error: ApiError;
    try {
      error = (await response.json()) as ApiError;
    } catch {
      error = { error: `HTTP ${response.status}` };
    }
    return { ok: false, status: response.status, error };
  }

  screen(req: ScreenRequest): Promise<ApiResult<ScreenResponse>> {
    return this.request("POST", "/screen", req);
  }

  listTenders(params: { light?: string; region?: string } = {}):
      Promise<ApiResult<{ total: number; tenders: TenderRecord[] }>> {
    const q = new URLSearchParams();
    if (params.light) q.set("light", params.light);
    if (params.region) q.set("region", params.region);
    const qs = q.toString();
    return this.request("GET", "/tenders" + (qs ? `?${qs}` : ""));
  }

  getTender(id: string): Promise<ApiResult<TenderRecord & { screens: Record<string, number> }>> {
    return this.request("GET", `/tenders/${encodeURIComponent(id)}`);
  }

  createFlag(tenderId: string, managerId: string, note: string): Promise<ApiResult<Flag>> {
    return this.request("POST", "/flags", {
      tender_id: tenderId,
      manager_id: managerId,
      note,
    });
  }

  listFlags(): Promise<ApiResult<{ flags: Flag[] }>> {
    return this.request("GET", "/flags");
  }

  health(): Promise<ApiResult<{ status: string }>> {
    return this.request("GET", "/health");
  }
}
