import { ApiClient } from "./api";
import type { EdgeKey, GraphPayload } from "./types";

/**
 * Side panel showing where an edge came from: filer, competitor, fiscal
 * year, accession number, and the disclosure snippet fetched from the
 * edge endpoint. The snippet is written as text content, never markup,
 * so it appears exactly as stored.
 */
export class ProvenancePanel {
  private readonly root: HTMLElement;

  constructor(
    container: HTMLElement,
    private readonly api: ApiClient,
    private readonly onClose: () => void,
  ) {
    this.root = document.createElement("aside");
    this.root.className = "provenance-panel";
    this.root.hidden = true;
    container.appendChild(this.root);
  }

  async show(key: EdgeKey, graph: GraphPayload | null): Promise<void> {
    const names = new Map((graph?.nodes ?? []).map((n) => [n.id, n.name]));
    this.root.hidden = false;
    this.root.replaceChildren();

    const close = document.createElement("button");
    close.className = "close";
    close.textContent = "×";
    close.addEventListener("click", () => this.onClose());
    this.root.appendChild(close);

    const heading = document.createElement("h2");
    heading.textContent = "Disclosure";
    this.root.appendChild(heading);

    const meta = document.createElement("dl");
    const pairs: [string, string][] = [
      ["Filer", names.get(key.source) ?? key.source],
      ["Competitor", names.get(key.target) ?? key.target],
      ["Fiscal year", String(key.year)],
    ];
    let detail;
    try {
      detail = await this.api.edge(key);
      pairs.push(["Accession", detail.accession]);
    } catch {
      detail = null;
    }
    for (const [label, value] of pairs) {
      const dt = document.createElement("dt");
      dt.textContent = label;
      const dd = document.createElement("dd");
      dd.textContent = value;
      meta.append(dt, dd);
    }
    this.root.appendChild(meta);

    const snippet = document.createElement("blockquote");
    snippet.className = "snippet";
    snippet.textContent = detail ? detail.snippet : "provenance unavailable";
    this.root.appendChild(snippet);
  }

  hide(): void {
    this.root.hidden = true;
    this.root.replaceChildren();
  }

  get element(): HTMLElement {
    return this.root;
  }
}
