import { describe, expect, it } from "vitest";

import { Api, ApiError } from "../src/api.js";
import { FakeServer } from "./fake-server.js";

describe("Api", () => {
  it("unwraps the created game state", async () => {
    const server = new FakeServer();
    const api = new Api(server.fetch);
    const state = await api.createGame(5, "solitaire");
    expect(state.rows).toBe(5);
    expect(state.turn).toBe(1);
    expect(server.log).toContain("POST /games");
  });

  it("raises ApiError with the service error code", async () => {
    const server = new FakeServer();
    const api = new Api(server.fetch);
    const state = await api.createGame(3, "solitaire");
    const bad = api.move(state.id, { turn: 9, h: 1, v: 1, x: 0, y: 0 });
    await expect(bad).rejects.toMatchObject({
      name: "ApiError",
      status: 409,
      code: "turn",
    });
  });

  it("maps unknown sessions to 404", async () => {
    const api = new Api(new FakeServer().fetch);
    await expect(api.getGame("nope")).rejects.toMatchObject({
      status: 404,
      code: "session",
    });
  });

  it("wraps transport failures as a network ApiError", async () => {
    const api = new Api(() => Promise.reject(new TypeError("refused")));
    const err = await api.verdict(5, 5).catch((e) => e);
    expect(err).toBeInstanceOf(ApiError);
    expect(err.status).toBe(0);
    expect(err.code).toBe("network");
  });

  it("lets abort errors through untouched", async () => {
    const api = new Api(() =>
      Promise.reject(new DOMException("stopped", "AbortError")),
    );
    const err = await api.hint("id", 1).catch((e) => e);
    expect(err).toBeInstanceOf(DOMException);
    expect(err.name).toBe("AbortError");
  });
});
