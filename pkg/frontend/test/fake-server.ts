/** In-memory stand-in for the packit service, close enough for UI tests.
 *
 * Implements the same routes, status codes and payload shapes, with a
 * small rules mirror so playthroughs behave like the real engine. Hints
 * are scripted per test through `hintMode`.
 */

import type { GameStateDto, HintDto, PlacementDto } from "../src/api.js";

interface Session {
  id: string;
  mode: string;
  rows: number;
  cols: number;
  transcript: PlacementDto[];
}

export type HintMode =
  | { kind: "yes" }
  | { kind: "no" }
  | { kind: "unknown" }
  | { kind: "error503" }
  | { kind: "hang" };

const VERDICTS: Record<number, string> = {
  5: "Open",
  6: "SmallGapImpossible",
  18: "LargeGapImpossible",
};

function json(status: number, body: unknown): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "content-type": "application/json" },
  });
}

function reject(status: number, code: string, message: string): Response {
  return json(status, { code, message, detail: null });
}

export class FakeServer {
  sessions = new Map<string, Session>();
  hintMode: HintMode = { kind: "yes" };
  /** resolved before every move reply; lets tests hold a move open */
  moveGate: Promise<void> = Promise.resolve();
  log: string[] = [];
  private nextId = 1;

  fetch = async (input: string, init?: RequestInit): Promise<Response> => {
    const method = (init?.method ?? "GET").toUpperCase();
    const url = new URL(input, "http://fake");
    const path = url.pathname;
    this.log.push(`${method} ${path}`);
    const body = init?.body ? JSON.parse(String(init.body)) : {};

    if (method === "POST" && path === "/games") return this.createGame(body);
    let m = path.match(/^\/games\/([^/]+)$/);
    if (method === "GET" && m) return this.withSession(m[1], (s) => json(200, this.statePayload(s)));
    m = path.match(/^\/games\/([^/]+)\/legal$/);
    if (method === "GET" && m)
      return this.withSession(m[1], (s) =>
        json(200, { turn: this.turnOf(s), placements: this.legalMoves(s) }),
      );
    m = path.match(/^\/games\/([^/]+)\/moves$/);
    if (method === "POST" && m) {
      await this.moveGate;
      return this.withSession(m[1], (s) => this.applyMove(s, body));
    }
    m = path.match(/^\/games\/([^/]+)\/undo$/);
    if (method === "POST" && m) return this.withSession(m[1], (s) => this.undo(s));
    m = path.match(/^\/games\/([^/]+)\/hint$/);
    if (method === "POST" && m)
      return this.withSession(m[1], (s) => this.hint(s, init?.signal ?? null));
    m = path.match(/^\/verdict\/(\d+)\/(\d+)$/);
    if (method === "GET" && m) return this.verdict(Number(m[1]), Number(m[2]));
    return reject(404, "route", `no such route: ${method} ${path}`);
  };

  private withSession(
    id: string,
    handler: (s: Session) => Response | Promise<Response>,
  ): Response | Promise<Response> {
    const session = this.sessions.get(id);
    if (!session) return reject(404, "session", `no session ${id}`);
    return handler(session);
  }

  private createGame(body: { n?: number; rows?: number; cols?: number; mode?: string }): Response {
    const rows = body.n ?? body.rows;
    const cols = body.n ?? body.cols;
    if (!rows || !cols || rows < 1 || cols < 1) {
      return reject(400, "invalid-dims", "bad dimensions");
    }
    const session: Session = {
      id: `fake-${this.nextId++}`,
      mode: body.mode ?? "solitaire",
      rows,
      cols,
      transcript: [],
    };
    this.sessions.set(session.id, session);
    return json(201, { id: session.id, state: this.statePayload(session) });
  }

  private grid(session: Session): (number | null)[][] {
    const cells: (number | null)[][] = Array.from({ length: session.rows }, () =>
      Array<number | null>(session.cols).fill(null),
    );
    for (const p of session.transcript) {
      for (let r = p.y; r < p.y + p.v; r++) {
        for (let c = p.x; c < p.x + p.h; c++) cells[r][c] = p.turn;
      }
    }
    return cells;
  }

  private turnOf(session: Session): number {
    return session.transcript.length + 1;
  }

  private legalMoves(session: Session): PlacementDto[] {
    const turn = this.turnOf(session);
    const cells = this.grid(session);
    const out: PlacementDto[] = [];
    for (const area of [turn, turn + 1]) {
      for (let h = 1; h <= area; h++) {
        if (area % h) continue;
        const v = area / h;
        if (h > session.cols || v > session.rows) continue;
        for (let y = 0; y + v <= session.rows; y++) {
          for (let x = 0; x + h <= session.cols; x++) {
            let free = true;
            for (let r = y; r < y + v && free; r++) {
              for (let c = x; c < x + h && free; c++) {
                if (cells[r][c] !== null) free = false;
              }
            }
            if (free) out.push({ turn, h, v, x, y });
          }
        }
      }
    }
    out.sort((a, b) => a.h - b.h || a.v - b.v || a.y - b.y || a.x - b.x);
    return out;
  }

  private statePayload(session: Session): GameStateDto {
    const cells = this.grid(session);
    const covered = session.transcript.reduce((acc, p) => acc + p.h * p.v, 0);
    const full = covered === session.rows * session.cols;
    const finished = this.legalMoves(session).length === 0;
    const turn = this.turnOf(session);
    const mover = turn % 2 === 1 ? 1 : 2;
    const payload: GameStateDto = {
      schema_version: 1,
      id: session.id,
      mode: session.mode,
      rows: session.rows,
      cols: session.cols,
      turn,
      cells,
      prefilled_tag: 0,
      transcript: [...session.transcript],
      covered,
      full,
      perfect: full,
      movable: !finished,
    };
    if (session.mode === "two-player") {
      payload.mover = mover;
      payload.finished = finished;
      payload.loser = finished ? mover : null;
    } else {
      payload.finished = finished;
    }
    return payload;
  }

  private applyMove(session: Session, body: Record<string, number>): Response {
    const turn = this.turnOf(session);
    const asked = body.turn ?? body.t ?? turn;
    const { h, v, x, y } = body;
    if (asked !== turn) {
      return reject(409, "turn", `expected turn ${turn}, got ${asked}`);
    }
    if (h * v !== turn && h * v !== turn + 1) {
      return reject(409, "area", `turn ${turn} wants area ${turn} or ${turn + 1}`);
    }
    if (x < 0 || y < 0 || x + h > session.cols || y + v > session.rows) {
      return reject(409, "bounds", "rectangle leaves the board");
    }
    const cells = this.grid(session);
    for (let r = y; r < y + v; r++) {
      for (let c = x; c < x + h; c++) {
        if (cells[r][c] !== null) {
          return reject(409, "overlap", `cell (${r}, ${c}) is already covered`);
        }
      }
    }
    session.transcript.push({ turn, h, v, x, y });
    return json(200, this.statePayload(session));
  }

  private undo(session: Session): Response {
    if (!session.transcript.length) {
      return reject(409, "turn", "nothing to undo");
    }
    session.transcript.pop();
    return json(200, this.statePayload(session));
  }

  private hint(session: Session, signal: AbortSignal | null): Response | Promise<Response> {
    const mode = this.hintMode;
    if (mode.kind === "hang") {
      return new Promise<Response>((_, rejectPromise) => {
        signal?.addEventListener("abort", () =>
          rejectPromise(new DOMException("hint canceled", "AbortError")),
        );
      });
    }
    if (mode.kind === "error503") {
      return reject(503, "solver", "solver process failed");
    }
    let payload: HintDto;
    if (mode.kind === "yes") {
      const first = this.legalMoves(session)[0] ?? null;
      payload = { answer: "Yes", detail: null, suggestion: first };
    } else if (mode.kind === "no") {
      payload = { answer: "No", detail: "no completion exists", suggestion: null };
    } else {
      payload = { answer: "Unknown", detail: "budget exhausted", suggestion: null };
    }
    return json(200, payload);
  }

  private verdict(m: number, n: number): Response {
    if (m < 1 || n < 1) return reject(400, "invalid-dims", "bad dimensions");
    const kind = m === n ? VERDICTS[m] ?? "Open" : "Open";
    return json(200, {
      kind,
      witness: "scripted",
      rows: m,
      cols: n,
      area: m * n,
      rect_count: 0,
      gap: 0,
      blocked_primes: [],
      successor_prime: false,
    });
  }
}
