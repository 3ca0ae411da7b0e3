/** Heatmap panel: server-side aggregated polygon density as shaded cells. */

import type { GatewayClient } from "../api.js";
import type { HeatmapData, Panel, SelectionMessage, Viewport } from "../types.js";

const SVG_NS = "http://www.w3.org/2000/svg";

export class HeatmapPanel implements Panel {
  readonly type = "heatmap";
  readonly element: HTMLElement;
  private readonly svg: SVGSVGElement;
  categories: string[] | undefined;

  constructor(
    readonly id: string,
    private readonly client: GatewayClient,
    private readonly viewport: Viewport,
  ) {
    this.element = document.createElement("section");
    this.element.className = "panel panel-heatmap";
    this.element.dataset.panelId = id;
    this.svg = document.createElementNS(SVG_NS, "svg");
    this.svg.setAttribute("viewBox", "0 0 100 100");
    this.element.appendChild(this.svg);
  }

  async load(): Promise<void> {
    const data = await this.client.heatmap(
      this.viewport.bbox,
      this.viewport.cell ?? 0.05,
      this.categories,
    );
    this.render(data);
  }

  private render(data: HeatmapData): void {
    this.svg.replaceChildren();
    const { cols, rows } = data.grid;
    const peak = Math.max(1, ...data.values.map((row) => Math.max(0, ...row)));
    const cellWidth = 100 / cols;
    const cellHeight = 100 / rows;
    data.values.forEach((row, r) => {
      row.forEach((value, c) => {
        if (value === 0) return;
        const rect = document.createElementNS(SVG_NS, "rect");
        rect.setAttribute("x", String(c * cellWidth));
        // Row 0 is the southernmost band; flip so north is up.
        rect.setAttribute("y", String(100 - (r + 1) * cellHeight));
        rect.setAttribute("width", String(cellWidth));
        rect.setAttribute("height", String(cellHeight));
        rect.setAttribute("fill-opacity", String(value / peak));
        rect.setAttribute("data-count", String(value));
        rect.classList.add("heat-cell");
        this.svg.appendChild(rect);
      });
    });
  }

  receive(_msg: SelectionMessage): void {
    // Aggregate view; individual selections are not renderable here.
  }
}
