/** Monthly chart: twelve buckets of time-restricted projects.
 *
 * Clicking a bucket broadcasts one project selection per distinct project
 * in that month.
 */

import type { GatewayClient } from "../api.js";
import type { MessageBus } from "../bus.js";
import type { MonthlyData, Panel, SelectionMessage } from "../types.js";

const MONTH_LABELS = ["Jan", "Feb", "Mar", "Apr", "May", "Jun", "Jul", "Aug", "Sep", "Oct", "Nov", "Dec"];

export class MonthlyPanel implements Panel {
  readonly type = "monthly";
  readonly element: HTMLElement;
  private data: MonthlyData = { months: {} };

  constructor(
    readonly id: string,
    private readonly client: GatewayClient,
    private readonly bus: MessageBus,
  ) {
    this.element = document.createElement("section");
    this.element.className = "panel panel-monthly";
    this.element.dataset.panelId = id;
  }

  async load(): Promise<void> {
    this.renderMonthly(await this.client.restrictionsByMonth());
  }

  renderMonthly(data: MonthlyData): void {
    this.data = data;
    this.element.replaceChildren();
    const chart = document.createElement("ol");
    chart.className = "month-buckets";
    for (let month = 1; month <= 12; month++) {
      const entries = data.months[String(month)] ?? [];
      const projects = [...new Set(entries.map((e) => e.projectId))];
      const bucket = document.createElement("li");
      bucket.className = "month-bucket" + (entries.length ? " non-empty" : "");
      bucket.dataset.month = String(month);
      bucket.dataset.count = String(entries.length);
      const bar = document.createElement("div");
      bar.className = "bar";
      bar.style.height = `${entries.length * 14}px`;
      const label = document.createElement("span");
      label.textContent = `${MONTH_LABELS[month - 1]} (${entries.length})`;
      bucket.append(bar, label);
      bucket.addEventListener("click", () => {
        for (const project of projects) {
          this.bus.broadcast({ origin: this.id, kind: "project", id: project });
        }
      });
      chart.appendChild(bucket);
    }
    this.element.appendChild(chart);
  }

  receive(_msg: SelectionMessage): void {
    // The chart is an aggregate; selections elsewhere do not change it.
  }
}
