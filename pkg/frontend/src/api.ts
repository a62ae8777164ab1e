/** Thin typed client for the play service. All game logic stays server-side;
 * this module only moves JSON and surfaces rejections as ApiError. */

export interface SessionSpec {
  schema: number;
  geometry: string;
  dimension: number;
  root: number[];
  radius?: number;
  side?: number;
}

export interface Counters {
  burnt: number;
  defended: number;
  saved: number;
  b_shell: number[];
  r_reserve: number;
}

/** Burnt cells carry their ignition step, defended cells their placement
 * turn, both as a trailing coordinate: [x, y, t] or [x, y, z, t]. */
export interface SessionView {
  schema: number;
  id: string;
  phase: string;
  turn: number;
  f: number;
  spec: SessionSpec;
  burnt: number[][];
  defended: number[][];
  counters: Counters;
}

export interface GrowthBound {
  burnt_in_shell_at: number;
  at_least: number;
  note: string;
}

export interface HintResponse {
  schema: number;
  placements: number[][];
  status?: string;
  objective?: number;
  lower_bound?: number;
  nodes?: number;
  note?: string;
  bound?: GrowthBound;
}

export interface CreateSessionBody {
  spec?: SessionSpec;
  f?: number;
  outbreak?: number[][];
}

/** What the app needs from the service; Client is the fetch-backed one. */
export interface GameApi {
  createSession(body: CreateSessionBody): Promise<SessionView>;
  getSession(id: string): Promise<SessionView>;
  submitTurn(id: string, placements: number[][]): Promise<SessionView>;
  undo(id: string): Promise<SessionView>;
  hint(id: string, budget: number, signal?: AbortSignal): Promise<HintResponse>;
}

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly detail: string,
  ) {
    super(detail);
    this.name = "ApiError";
  }
}

async function request<T>(
  url: string,
  init?: RequestInit & { signal?: AbortSignal },
): Promise<T> {
  const response = await fetch(url, {
    headers: { "content-type": "application/json" },
    ...init,
  });
  const body = await response.json().catch(() => ({}));
  if (!response.ok) {
    const detail =
      typeof body.detail === "string" ? body.detail : response.statusText;
    throw new ApiError(response.status, detail);
  }
  return body as T;
}

export class Client implements GameApi {
  constructor(private readonly base: string = "") {}

  createSession(body: CreateSessionBody): Promise<SessionView> {
    return request(`${this.base}/sessions`, {
      method: "POST",
      body: JSON.stringify(body),
    });
  }

  getSession(id: string): Promise<SessionView> {
    return request(`${this.base}/sessions/${id}`);
  }

  submitTurn(id: string, placements: number[][]): Promise<SessionView> {
    return request(`${this.base}/sessions/${id}/turns`, {
      method: "POST",
      body: JSON.stringify({ placements }),
    });
  }

  undo(id: string): Promise<SessionView> {
    return request(`${this.base}/sessions/${id}/undo`, { method: "POST" });
  }

  hint(id: string, budget: number, signal?: AbortSignal): Promise<HintResponse> {
    return request(`${this.base}/sessions/${id}/hint?budget=${budget}`, {
      signal,
    });
  }
}
