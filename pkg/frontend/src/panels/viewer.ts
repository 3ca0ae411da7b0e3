/** Document viewer: shows the stored page text and highlights exactly the
 * character range a statement was extracted from. On a permission error
 * nothing of the document is shown, only a notice. */

import { ApiError, GatewayClient } from "../api.js";
import type { Panel, SelectionMessage } from "../types.js";

export class ViewerPanel implements Panel {
  readonly type = "documents";
  readonly element: HTMLElement;
  pending: Promise<void> = Promise.resolve();
  private generation = 0;

  constructor(readonly id: string, private readonly client: GatewayClient) {
    this.element = document.createElement("section");
    this.element.className = "panel panel-viewer";
    this.element.dataset.panelId = id;
  }

  async openDocumentAt(
    documentId: string,
    page: number,
    startOffset: number,
    endOffset: number,
  ): Promise<void> {
    // A newer open cancels the rendering of an older, slower response.
    const generation = ++this.generation;
    let source;
    try {
      source = await this.client.documentSource(documentId);
    } catch (err) {
      if (generation !== this.generation) return;
      if (err instanceof ApiError && err.status === 403) {
        this.renderNotice("You are not permitted to view this document.");
        return;
      }
      this.renderNotice("The document could not be loaded.");
      return;
    }
    if (generation !== this.generation) return;
    const pageText = source.pages[page - 1];
    if (
      pageText === undefined ||
      startOffset < 0 ||
      endOffset > pageText.length ||
      startOffset >= endOffset
    ) {
      this.renderNotice("The referenced position does not exist in this document.");
      return;
    }
    this.element.replaceChildren();
    const heading = document.createElement("h3");
    heading.textContent = `${source.title || source.id} - page ${page}`;
    this.element.appendChild(heading);
    source.pages.forEach((text, index) => {
      const section = document.createElement("pre");
      section.className = "doc-page";
      section.dataset.page = String(index + 1);
      if (index + 1 === page) {
        section.append(
          document.createTextNode(text.slice(0, startOffset)),
          this.mark(text.slice(startOffset, endOffset)),
          document.createTextNode(text.slice(endOffset)),
        );
        section.classList.add("current-page");
      } else {
        section.textContent = text;
      }
      this.element.appendChild(section);
    });
    this.element
      .querySelector(".current-page")
      ?.scrollIntoView?.({ block: "start" });
  }

  private mark(text: string): HTMLElement {
    const mark = document.createElement("mark");
    mark.className = "statement-highlight";
    mark.textContent = text;
    return mark;
  }

  private renderNotice(message: string): void {
    this.element.replaceChildren();
    const notice = document.createElement("p");
    notice.className = "notice";
    notice.textContent = message;
    this.element.appendChild(notice);
  }

  receive(msg: SelectionMessage): void {
    if (msg.kind !== "statement") return;
    // Statement selections carry "documentId/page/start/end".
    const [documentId, page, start, end] = msg.id.split("/");
    if (!documentId) return;
    this.pending = this.openDocumentAt(
      documentId,
      Number(page),
      Number(start),
      Number(end),
    );
  }
}
