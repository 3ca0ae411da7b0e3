/** Environmental data panel: latest reading for the selected sensor.
 *
 * Sensor selections carry a composite id "station/parameter" so the panel
 * knows which series to query.
 */

import { ApiError, GatewayClient } from "../api.js";
import type { Panel, SelectionMessage } from "../types.js";

export class SensorPanel implements Panel {
  readonly type = "sensor";
  readonly element: HTMLElement;
  /** Resolves when the most recent receive() finished its fetch. */
  pending: Promise<void> = Promise.resolve();
  private generation = 0;

  constructor(readonly id: string, private readonly client: GatewayClient) {
    this.element = document.createElement("section");
    this.element.className = "panel panel-sensor";
    this.element.dataset.panelId = id;
    this.element.textContent = "no sensor selected";
  }

  receive(msg: SelectionMessage): void {
    if (msg.kind !== "sensor") return;
    const [station, parameter] = msg.id.split("/");
    if (!station || !parameter) return;
    // Newer selections cancel the rendering of older responses.
    const generation = ++this.generation;
    this.pending = this.client
      .latestReading(station, parameter)
      .then(({ reading }) => {
        if (generation !== this.generation) return;
        if (reading === null) {
          this.element.textContent = `${station} ${parameter}: no data`;
        } else {
          this.element.textContent =
            `${station} ${parameter}: ${reading.value} ${reading.unit} @ ${reading.timestamp}`;
        }
      })
      .catch((err: unknown) => {
        if (generation !== this.generation) return;
        const note = err instanceof ApiError ? err.message : "request failed";
        this.element.textContent = `${station} ${parameter}: ${note}`;
      });
  }
}
