/** Typed client for the packit HTTP service. All state lives server-side. */

export interface PlacementDto {
  turn: number;
  h: number;
  v: number;
  x: number;
  y: number;
}

export interface GameStateDto {
  schema_version: number;
  id: string;
  mode: string;
  rows: number;
  cols: number;
  turn: number;
  /** row-major; null = empty, 0 = prefilled, otherwise the placing turn */
  cells: (number | null)[][];
  prefilled_tag: number;
  transcript: PlacementDto[];
  covered: number;
  full: boolean;
  perfect: boolean;
  movable: boolean;
  mover?: number;
  finished?: boolean;
  loser?: number | null;
}

export interface VerdictDto {
  kind: string;
  witness: string;
  rows: number;
  cols: number;
  area: number;
  rect_count: number;
  gap: number;
  blocked_primes: number[];
  successor_prime: boolean;
}

export interface LegalDto {
  turn: number;
  placements: PlacementDto[];
}

export interface HintDto {
  answer: "Yes" | "No" | "Unknown";
  detail: string | null;
  suggestion: PlacementDto | null;
  witness?: PlacementDto[];
}

export class ApiError extends Error {
  constructor(
    public status: number,
    public code: string,
    message: string,
    public detail: unknown = null,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

async function request<T>(
  fetchLike: FetchLike,
  path: string,
  init?: RequestInit,
): Promise<T> {
  let response: Response;
  try {
    response = await fetchLike(path, init);
  } catch (err) {
    if (err instanceof DOMException && err.name === "AbortError") throw err;
    throw new ApiError(0, "network", `cannot reach the server: ${err}`);
  }
  const body = await response.json().catch(() => null);
  if (!response.ok) {
    const code = body && typeof body.code === "string" ? body.code : "unknown";
    const message =
      body && typeof body.message === "string"
        ? body.message
        : `request failed with status ${response.status}`;
    throw new ApiError(response.status, code, message, body?.detail ?? null);
  }
  return body as T;
}

function post(payload: unknown, signal?: AbortSignal): RequestInit {
  return {
    method: "POST",
    headers: { "content-type": "application/json" },
    body: JSON.stringify(payload),
    signal,
  };
}

export class Api {
  constructor(private fetchLike: FetchLike) {}

  async createGame(n: number, mode: string): Promise<GameStateDto> {
    const created = await request<{ id: string; state: GameStateDto }>(
      this.fetchLike,
      "/games",
      post({ n, mode }),
    );
    return created.state;
  }

  getGame(id: string): Promise<GameStateDto> {
    return request(this.fetchLike, `/games/${id}`);
  }

  legal(id: string): Promise<LegalDto> {
    return request(this.fetchLike, `/games/${id}/legal`);
  }

  move(id: string, placement: PlacementDto): Promise<GameStateDto> {
    return request(this.fetchLike, `/games/${id}/moves`, post(placement));
  }

  undo(id: string): Promise<GameStateDto> {
    return request(this.fetchLike, `/games/${id}/undo`, post({}));
  }

  hint(id: string, budgetS: number, signal?: AbortSignal): Promise<HintDto> {
    return request(
      this.fetchLike,
      `/games/${id}/hint`,
      post({ budget_s: budgetS }, signal),
    );
  }

  verdict(m: number, n: number): Promise<VerdictDto> {
    return request(this.fetchLike, `/verdict/${m}/${n}`);
  }
}
