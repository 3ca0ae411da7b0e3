/** Selection broadcast between panels.
 *
 * Delivery rules: every registered panel except the origin receives the
 * message exactly once; messages are delivered in FIFO order even when a
 * handler triggers another broadcast; a message identical to one already
 * in flight is dropped, so coordination cannot cycle.
 */

import type { Panel, SelectionMessage } from "./types.js";

export class MessageBus {
  private readonly panels = new Map<string, Panel>();
  private readonly queue: SelectionMessage[] = [];
  private readonly inFlight = new Set<string>();
  private delivering = false;

  register(panel: Panel): void {
    if (this.panels.has(panel.id)) {
      throw new Error(`duplicate panel id: ${panel.id}`);
    }
    this.panels.set(panel.id, panel);
  }

  unregister(panelId: string): void {
    this.panels.delete(panelId);
  }

  broadcast(msg: SelectionMessage): void {
    const key = `${msg.kind}:${msg.id}`;
    if (this.inFlight.has(key)) {
      return; // re-broadcast of a message being delivered: cycle guard
    }
    this.queue.push(msg);
    if (this.delivering) return;
    this.delivering = true;
    try {
      while (this.queue.length > 0) {
        const current = this.queue.shift()!;
        const currentKey = `${current.kind}:${current.id}`;
        this.inFlight.add(currentKey);
        try {
          for (const panel of this.panels.values()) {
            if (panel.id === current.origin) continue;
            panel.receive(current);
          }
        } finally {
          this.inFlight.delete(currentKey);
        }
      }
    } finally {
      this.delivering = false;
    }
  }
}
