// Thin typed client for the correction service.  The fetch implementation
// is injectable so contract tests can replay recorded exchanges.

import type { ApiErrorBody, ProfileView, ReportView, SessionView } from "./types.js";

export interface FetchResponse {
  status: number;
  json(): Promise<unknown>;
}

export type FetchLike = (
  url: string,
  init?: { method?: string; headers?: Record<string, string>; body?: string },
) => Promise<FetchResponse>;

export class ServiceError extends Error {
  constructor(
    readonly status: number,
    readonly body: ApiErrorBody,
  ) {
    super(`${body.code}: ${body.message}`);
  }
}

export class ApiClient {
  constructor(
    private readonly baseUrl: string,
    private readonly fetchImpl: FetchLike = (url, init) => fetch(url, init),
  ) {}

  private async call(method: string, path: string, body?: unknown): Promise<unknown> {
    const response = await this.fetchImpl(this.baseUrl + path, {
      method,
      headers: body === undefined ? undefined : { "content-type": "application/json" },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    const payload = await response.json();
    if (response.status >= 400) {
      throw new ServiceError(response.status, payload as ApiErrorBody);
    }
    return payload;
  }

  async createSession(treebank: string, profile?: ProfileView): Promise<SessionView> {
    const body: Record<string, unknown> = { treebank };
    if (profile) body.profile = profile;
    const payload = (await this.call("POST", "/v1/sessions", body)) as {
      session: SessionView;
    };
    return payload.session;
  }

  async getSession(id: string): Promise<SessionView> {
    const payload = (await this.call("GET", `/v1/sessions/${id}`)) as {
      session: SessionView;
    };
    return payload.session;
  }

  async postAnswer(id: string, questionId: string, value: string): Promise<SessionView> {
    const payload = (await this.call("POST", `/v1/sessions/${id}/answers`, {
      question_id: questionId,
      value,
    })) as { session: SessionView };
    return payload.session;
  }

  async checkTreebank(treebank: string): Promise<ReportView[]> {
    const payload = (await this.call("POST", "/v1/check", { treebank })) as {
      reports: ReportView[];
    };
    return payload.reports;
  }

  async getProfile(id: string): Promise<ProfileView> {
    const payload = (await this.call("GET", `/v1/profiles/${id}`)) as {
      profile: ProfileView;
    };
    return payload.profile;
  }
}

// Serializes user actions: while one submission is in flight, further
// calls are dropped (the double-click guard on answer buttons).
export class SingleFlight {
  private busy = false;

  async run<T>(action: () => Promise<T>): Promise<T | null> {
    if (this.busy) return null;
    this.busy = true;
    try {
      return await action();
    } finally {
      this.busy = false;
    }
  }
}
