/** Restriction dashboard: active and inferred restrictions with their
 * explanations. Clicking an entry broadcasts the statement selection (the
 * viewer opens the exact page) and, for weather entries, the triggering
 * sensor. */

import type { GatewayClient } from "../api.js";
import type { MessageBus } from "../bus.js";
import type { Panel, RestrictionRecord, SelectionMessage } from "../types.js";

export class RestrictionsPanel implements Panel {
  readonly type = "documents";
  readonly element: HTMLElement;

  constructor(
    readonly id: string,
    private readonly client: GatewayClient,
    private readonly bus: MessageBus,
  ) {
    this.element = document.createElement("section");
    this.element.className = "panel panel-restrictions";
    this.element.dataset.panelId = id;
  }

  async load(at?: string): Promise<void> {
    const [active, inferred] = await Promise.all([
      this.client.activeRestrictions(at),
      this.client.inferredRestrictions(at),
    ]);
    this.render(active.active, inferred.inferred, active.unverifiable);
  }

  render(
    active: RestrictionRecord[],
    inferred: RestrictionRecord[],
    unverifiable: RestrictionRecord[],
  ): void {
    this.element.replaceChildren();
    this.element.appendChild(this.section("Active restrictions", active));
    this.element.appendChild(this.section("Inherited via overlap", inferred));
    this.element.appendChild(this.section("Unverifiable (no sensor data)", unverifiable));
  }

  private section(titleText: string, records: RestrictionRecord[]): HTMLElement {
    const wrapper = document.createElement("div");
    const title = document.createElement("h3");
    title.textContent = `${titleText} (${records.length})`;
    wrapper.appendChild(title);
    const list = document.createElement("ul");
    for (const record of records) {
      list.appendChild(this.entry(record));
    }
    wrapper.appendChild(list);
    return wrapper;
  }

  private entry(record: RestrictionRecord): HTMLElement {
    const item = document.createElement("li");
    item.className = "restriction" + (record.inferred ? " inferred" : "");
    item.dataset.areaId = record.areaId;
    const sentence = record.statement.sentence;
    const label = document.createElement("button");
    label.type = "button";
    label.textContent = `${record.areaId}: ${sentence.text}`;
    label.addEventListener("click", () => {
      this.bus.broadcast({ origin: this.id, kind: "polygon", id: record.areaId });
      this.bus.broadcast({
        origin: this.id,
        kind: "statement",
        id: `${sentence.documentId}/${sentence.page}/${sentence.startOffset}/${sentence.endOffset}`,
      });
      const reading = record.explanation.reading;
      if (reading) {
        this.bus.broadcast({
          origin: this.id,
          kind: "sensor",
          id: `${reading.station}/${reading.parameter}`,
        });
      }
    });
    item.appendChild(label);
    if (record.explanation.overlapFraction !== undefined) {
      const note = document.createElement("small");
      note.textContent = ` inherited, overlap ${record.explanation.overlapFraction}`;
      item.appendChild(note);
    }
    return item;
  }

  receive(_msg: SelectionMessage): void {
    // The dashboard is a source of selections, not a target.
  }
}
