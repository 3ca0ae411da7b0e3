/** Bridge to an embedded external web app (point-cloud viewer stand-in).
 *
 * The external tool runs in an iframe and gets every foreign selection via
 * the page messaging channel; the bundled stub page just echoes what it
 * receives, which is enough to demonstrate the integration contract.
 */

import type { Panel, SelectionMessage } from "../types.js";

type PostFn = (msg: SelectionMessage) => void;

export class ExternalPanel implements Panel {
  readonly type = "external";
  readonly element: HTMLElement;
  private readonly iframe: HTMLIFrameElement;
  private readonly post: PostFn;

  constructor(readonly id: string, stubUrl = "./external-stub.html", post?: PostFn) {
    this.element = document.createElement("section");
    this.element.className = "panel panel-external";
    this.element.dataset.panelId = id;
    this.iframe = document.createElement("iframe");
    this.iframe.src = stubUrl;
    this.iframe.title = "external viewer";
    this.element.appendChild(this.iframe);
    this.post =
      post ??
      ((msg) => {
        this.iframe.contentWindow?.postMessage({ type: "geolink-selection", ...msg }, "*");
      });
  }

  receive(msg: SelectionMessage): void {
    this.post(msg);
  }
}
