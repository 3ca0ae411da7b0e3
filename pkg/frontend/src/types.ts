/** Shared types for panels, messages, and gateway payloads. */

export type SelectionKind = "polygon" | "project" | "statement" | "sensor";

export interface SelectionMessage {
  origin: string; // panel id
  kind: SelectionKind;
  id: string;
}

export type PanelType = "map" | "heatmap" | "external" | "monthly" | "sensor" | "documents";

export interface Viewport {
  bbox: [number, number, number, number]; // lonMin, latMin, lonMax, latMax
  cell?: number;
}

export interface PanelSpec {
  id: string;
  type: PanelType;
  viewport?: Viewport;
}

export interface ViewLayout {
  panels: PanelSpec[];
}

export interface Panel {
  readonly id: string;
  readonly type: PanelType;
  readonly element: HTMLElement;
  /** Handle a selection made elsewhere. Must never re-broadcast. */
  receive(msg: SelectionMessage): void;
}

// -- gateway payloads ---------------------------------------------------------

export interface Envelope<T> {
  status: "ok" | "error";
  data?: T;
  error?: { code: string; message: string };
  elapsedMs: number;
}

export interface AreaFeature {
  type: "Feature";
  geometry: { type: "Polygon"; coordinates: number[][][] };
  properties: { id: string; category: string; project: string | null };
}

export interface SentenceRef {
  documentId: string;
  page: number;
  startOffset: number;
  endOffset: number;
  text: string;
}

export interface StatementRecord {
  sentence: SentenceRef;
  category: string;
  parameter?: string;
  comparator?: string;
  threshold?: number;
  unit?: string;
  months?: number[];
}

export interface RestrictionRecord {
  areaId: string;
  projectId: string;
  kind: string;
  inferred: boolean;
  statement: StatementRecord;
  explanation: {
    chain: { kind: string; id: string; label: string; name?: string }[];
    reading?: { station: string; parameter: string; timestamp: string; value: number; unit: string };
    overlapFraction?: number;
    unknownStations: string[];
  };
}

export interface MonthlyData {
  months: Record<string, { projectId: string; statement: StatementRecord }[]>;
}

export interface DocumentSource {
  id: string;
  project: string;
  title: string;
  pages: string[];
}

export interface HeatmapData {
  grid: { bbox: [number, number, number, number]; cellSize: number; cols: number; rows: number };
  values: number[][];
}
