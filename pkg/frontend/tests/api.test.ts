import { describe, expect, it } from "vitest";

import { ApiError, GatewayClient } from "../src/api.js";
import { DEMO_ROUTES, fakeFetch } from "./helpers.js";

const BASE = "http://gateway.test:9000";

describe("GatewayClient", () => {
  it("talks only to the gateway origin and logs every request", async () => {
    const { fetchFn } = fakeFetch(DEMO_ROUTES);
    const client = new GatewayClient(BASE, fetchFn);
    await client.login("u", "p");
    await client.areas();
    await client.restrictionsByMonth();
    await client.documentSource("doc-uc2");
    expect(client.requestLog.length).toBe(4);
    for (const url of client.requestLog) {
      expect(url.startsWith(BASE + "/")).toBe(true);
    }
  });

  it("sends the bearer token after login", async () => {
    const seen: string[] = [];
    const fetchFn = async (url: string, init?: RequestInit) => {
      const headers = (init?.headers ?? {}) as Record<string, string>;
      seen.push(headers["Authorization"] ?? "");
      const body = url.endsWith("/auth/login")
        ? { status: "ok", data: { token: "tok-123", rights: [] }, elapsedMs: 0 }
        : { status: "ok", data: { features: [] }, elapsedMs: 0 };
      return new Response(JSON.stringify(body), { status: 200 });
    };
    const client = new GatewayClient(BASE, fetchFn);
    await client.login("u", "p");
    await client.areas();
    expect(seen).toEqual(["", "Bearer tok-123"]);
  });

  it("raises typed errors from error envelopes", async () => {
    const { fetchFn } = fakeFetch({
      "/documents/secret/source": {
        error: { status: 403, code: "forbidden", message: "insufficient rights" },
      },
    });
    const client = new GatewayClient(BASE, fetchFn);
    const failure = client.documentSource("secret");
    await expect(failure).rejects.toBeInstanceOf(ApiError);
    await failure.catch((err: ApiError) => {
      expect(err.status).toBe(403);
      expect(err.code).toBe("forbidden");
    });
  });
});
