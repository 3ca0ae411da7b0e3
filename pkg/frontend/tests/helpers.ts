/** Test scaffolding: a canned gateway and fixture payloads mirroring the
 * backend demo dataset. */

import type {
  MonthlyData,
  RestrictionRecord,
  SelectionMessage,
  Panel,
} from "../src/types.js";

type CannedRoute =
  | { data: unknown }
  | { error: { status: number; code: string; message: string } };

export function fakeFetch(routes: Record<string, CannedRoute>, log: string[] = []) {
  const fetchFn = async (url: string): Promise<Response> => {
    log.push(url);
    const parsed = new URL(url);
    const route = routes[parsed.pathname];
    if (!route) {
      return envelopeResponse(404, undefined, { code: "not_found", message: "unknown route" });
    }
    if ("error" in route) {
      return envelopeResponse(route.error.status, undefined, route.error);
    }
    return envelopeResponse(200, route.data);
  };
  return { fetchFn, log };
}

function envelopeResponse(
  status: number,
  data?: unknown,
  error?: { code: string; message: string },
): Response {
  const envelope: Record<string, unknown> = { status: error ? "error" : "ok", elapsedMs: 0.1 };
  if (error) envelope.error = { code: error.code, message: error.message };
  else envelope.data = data;
  return new Response(JSON.stringify(envelope), {
    status,
    headers: { "Content-Type": "application/json" },
  });
}

export class RecordingPanel implements Panel {
  readonly element = document.createElement("div");
  readonly received: SelectionMessage[] = [];

  constructor(
    readonly id: string,
    readonly type: Panel["type"] = "map",
  ) {}

  receive(msg: SelectionMessage): void {
    this.received.push(msg);
  }
}

// -- fixture payloads ------------------------------------------------------------

export const UC2_PAGE_2 =
  "Work must be suspended when wind speed exceeds 12 m/s. Die Regelung gilt ganzjährig.";

export const DOC_UC2_SOURCE = {
  id: "doc-uc2",
  project: "p-west",
  title: "Gutachten Windverhältnisse Westfeld",
  pages: ["Zur Standsicherheit liegt ein Gutachten vor.", UC2_PAGE_2],
};

export const UC2_STATEMENT = {
  sentence: {
    documentId: "doc-uc2",
    page: 2,
    startOffset: 0,
    endOffset: 55,
    text: UC2_PAGE_2.slice(0, 55),
  },
  category: "weather_restriction",
  parameter: "wind_speed",
  comparator: "GT",
  threshold: 12,
  unit: "m/s",
};

export const ACTIVE_RESTRICTION: RestrictionRecord = {
  areaId: "area-west",
  projectId: "p-west",
  kind: "weather",
  inferred: false,
  statement: UC2_STATEMENT,
  explanation: {
    chain: [],
    reading: {
      station: "st-1",
      parameter: "wind_speed",
      timestamp: "2026-03-10T09:00:00Z",
      value: 14.2,
      unit: "m/s",
    },
    unknownStations: [],
  },
};

export const BREEDING_MONTHS: MonthlyData = {
  months: Object.fromEntries(
    Array.from({ length: 12 }, (_, i) => {
      const month = i + 1;
      const entries =
        month >= 3 && month <= 7
          ? [
              {
                projectId: "p-breed",
                statement: {
                  sentence: {
                    documentId: "doc-breed",
                    page: 1,
                    startOffset: 0,
                    endOffset: 54,
                    text: "No clearing from March to July due to breeding season.".slice(0, 54),
                  },
                  category: "time_restriction",
                  months: [3, 4, 5, 6, 7],
                },
              },
            ]
          : [];
      return [String(month), entries];
    }),
  ),
};

export const AREAS = {
  type: "FeatureCollection",
  features: [
    {
      type: "Feature",
      geometry: {
        type: "Polygon",
        coordinates: [[[13.0, 51.0], [13.5, 51.0], [13.5, 51.4], [13.0, 51.4], [13.0, 51.0]]],
      },
      properties: { id: "area-west", category: "restoration", project: "p-west" },
    },
    {
      type: "Feature",
      geometry: {
        type: "Polygon",
        coordinates: [[[13.25, 51.0], [13.75, 51.0], [13.75, 51.4], [13.25, 51.4], [13.25, 51.0]]],
      },
      properties: { id: "area-east", category: "forestry", project: "p-east" },
    },
  ],
};

export const DEMO_ROUTES: Record<string, CannedRoute> = {
  "/auth/login": { data: { token: "tok", rights: ["read_projects"] } },
  "/areas": { data: AREAS },
  "/heatmap": {
    data: {
      grid: { bbox: [13.0, 51.0, 13.75, 51.4], cellSize: 0.25, cols: 3, rows: 2 },
      values: [
        [1, 2, 1],
        [1, 2, 1],
      ],
    },
  },
  "/restrictions/active": { data: { at: "", active: [ACTIVE_RESTRICTION], unverifiable: [] } },
  "/restrictions/inferred": {
    data: {
      inferred: [
        {
          ...ACTIVE_RESTRICTION,
          areaId: "area-east",
          projectId: "p-east",
          inferred: true,
          explanation: { ...ACTIVE_RESTRICTION.explanation, overlapFraction: 0.5 },
        },
      ],
    },
  },
  "/restrictions/by-month": { data: BREEDING_MONTHS },
  "/documents/doc-uc2/source": { data: DOC_UC2_SOURCE },
  "/sensors/st-1/wind_speed/latest": {
    data: { reading: { value: 14.2, unit: "m/s", timestamp: "2026-03-10T09:00:00Z" } },
  },
  "/projects": { data: { projects: [{ id: "p-west", name: "p-west" }] } },
};
