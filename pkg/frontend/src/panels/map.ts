/** Area map panel: renders polygons from the gateway as SVG and turns
 * clicks into polygon selections. Receives polygon/project selections and
 * highlights the matching shapes. */

import type { GatewayClient } from "../api.js";
import type { MessageBus } from "../bus.js";
import type { AreaFeature, Panel, SelectionMessage, Viewport } from "../types.js";

const SVG_NS = "http://www.w3.org/2000/svg";

export class MapPanel implements Panel {
  readonly type = "map";
  readonly element: HTMLElement;
  private readonly svg: SVGSVGElement;
  private features: AreaFeature[] = [];

  constructor(
    readonly id: string,
    private readonly client: GatewayClient,
    private readonly bus: MessageBus,
    private readonly viewport: Viewport,
  ) {
    this.element = document.createElement("section");
    this.element.className = "panel panel-map";
    this.element.dataset.panelId = id;
    this.svg = document.createElementNS(SVG_NS, "svg");
    this.svg.setAttribute("viewBox", "0 0 100 100");
    this.element.appendChild(this.svg);
  }

  async load(): Promise<void> {
    const collection = await this.client.areas();
    this.features = collection.features;
    this.render();
  }

  private project([lon, lat]: number[]): [number, number] {
    const [lonMin, latMin, lonMax, latMax] = this.viewport.bbox;
    const x = ((lon - lonMin) / (lonMax - lonMin)) * 100;
    const y = 100 - ((lat - latMin) / (latMax - latMin)) * 100; // north up
    return [x, y];
  }

  private render(): void {
    this.svg.replaceChildren();
    for (const feature of this.features) {
      const ring = feature.geometry.coordinates[0];
      const points = ring.map((pos) => this.project(pos).join(",")).join(" ");
      const shape = document.createElementNS(SVG_NS, "polygon");
      shape.setAttribute("points", points);
      shape.setAttribute("data-area-id", feature.properties.id);
      shape.setAttribute("data-project-id", feature.properties.project ?? "");
      shape.classList.add("area", `category-${feature.properties.category}`);
      shape.addEventListener("click", () => {
        this.highlight(feature.properties.id);
        this.bus.broadcast({ origin: this.id, kind: "polygon", id: feature.properties.id });
      });
      this.svg.appendChild(shape);
    }
  }

  private highlight(areaId: string | null, projectId?: string): void {
    for (const shape of Array.from(this.svg.querySelectorAll("polygon"))) {
      const matches =
        (areaId !== null && shape.getAttribute("data-area-id") === areaId) ||
        (projectId !== undefined && shape.getAttribute("data-project-id") === projectId);
      shape.classList.toggle("selected", matches);
    }
  }

  receive(msg: SelectionMessage): void {
    if (msg.kind === "polygon") {
      this.highlight(msg.id);
    } else if (msg.kind === "project") {
      this.highlight(null, msg.id);
    }
    // statement/sensor selections are not renderable on the map
  }
}
