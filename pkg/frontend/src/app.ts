/** Application wiring: builds panels from a layout, registers them on the
 * message bus, and loads their data from the gateway. The gateway base URL
 * is the single bootstrap value. */

import { GatewayClient } from "./api.js";
import { MessageBus } from "./bus.js";
import { ExternalPanel } from "./panels/external.js";
import { HeatmapPanel } from "./panels/heatmap.js";
import { MapPanel } from "./panels/map.js";
import { MonthlyPanel } from "./panels/monthly.js";
import { RestrictionsPanel } from "./panels/documents.js";
import { SensorPanel } from "./panels/sensor.js";
import { ViewerPanel } from "./panels/viewer.js";
import type { Panel, ViewLayout, Viewport } from "./types.js";

const DEFAULT_VIEWPORT: Viewport = { bbox: [13.0, 51.0, 13.75, 51.4], cell: 0.05 };

export const DEFAULT_LAYOUT: ViewLayout = {
  panels: [
    { id: "map-a", type: "map", viewport: DEFAULT_VIEWPORT },
    { id: "heat-b", type: "heatmap", viewport: DEFAULT_VIEWPORT },
    { id: "external-c", type: "external" },
    { id: "monthly-d", type: "monthly" },
    { id: "sensor-e", type: "sensor" },
    { id: "viewer-f", type: "documents" },
  ],
};

export interface App {
  client: GatewayClient;
  bus: MessageBus;
  panels: Panel[];
  restrictions: RestrictionsPanel;
  load(at?: string): Promise<void>;
}

export function createApp(
  root: HTMLElement,
  gatewayUrl: string,
  layout: ViewLayout = DEFAULT_LAYOUT,
  client: GatewayClient = new GatewayClient(gatewayUrl),
): App {
  if (layout.panels.length === 0) {
    throw new Error("layout needs at least one panel");
  }
  const ids = new Set(layout.panels.map((p) => p.id));
  if (ids.size !== layout.panels.length) {
    throw new Error("panel ids must be unique");
  }
  const bus = new MessageBus();
  const panels: Panel[] = [];
  let viewerUsed = false;
  for (const spec of layout.panels) {
    let panel: Panel;
    switch (spec.type) {
      case "map":
        panel = new MapPanel(spec.id, client, bus, spec.viewport ?? DEFAULT_VIEWPORT);
        break;
      case "heatmap":
        panel = new HeatmapPanel(spec.id, client, spec.viewport ?? DEFAULT_VIEWPORT);
        break;
      case "external":
        panel = new ExternalPanel(spec.id);
        break;
      case "monthly":
        panel = new MonthlyPanel(spec.id, client, bus);
        break;
      case "sensor":
        panel = new SensorPanel(spec.id, client);
        break;
      case "documents":
        // First documents panel is the viewer, further ones dashboards.
        panel = viewerUsed
          ? new RestrictionsPanel(spec.id, client, bus)
          : new ViewerPanel(spec.id, client);
        viewerUsed = true;
        break;
    }
    bus.register(panel);
    panels.push(panel);
    root.appendChild(panel.element);
  }
  const restrictions = new RestrictionsPanel("restrictions-g", client, bus);
  bus.register(restrictions);
  panels.push(restrictions);
  root.appendChild(restrictions.element);

  async function load(at?: string): Promise<void> {
    for (const panel of panels) {
      if (panel instanceof MapPanel || panel instanceof HeatmapPanel || panel instanceof MonthlyPanel) {
        await panel.load();
      }
    }
    await restrictions.load(at);
  }

  return { client, bus, panels, restrictions, load };
}
