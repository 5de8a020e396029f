import { ApiClient } from "./api";
import { GraphView } from "./graph-view";
import { ProvenancePanel } from "./provenance";
import { ExplorerStore } from "./state";
import type { Radius, SearchResult, ViewState } from "./types";
import { edgeKeyOf } from "./types";

function toast(message: string): void {
  const host = document.getElementById("toast");
  if (!host) return;
  host.textContent = message;
  host.classList.add("visible");
  window.setTimeout(() => host.classList.remove("visible"), 3500);
}

function parseHash(): { focus: string | null; radius: Radius } {
  const params = new URLSearchParams(window.location.hash.replace(/^#/, ""));
  const focus = params.get("focus");
  const radius = Number(params.get("radius"));
  return {
    focus: focus || null,
    radius: radius === 2 || radius === 3 ? (radius as Radius) : 1,
  };
}

function writeHash(state: ViewState): void {
  const params = new URLSearchParams();
  if (state.focus) params.set("focus", state.focus);
  params.set("radius", String(state.radius));
  const next = `#${params.toString()}`;
  if (window.location.hash !== next) {
    history.replaceState(null, "", next);
  }
}

function main(): void {
  const api = new ApiClient();
  const store = new ExplorerStore(api, toast);

  const canvasHost = document.getElementById("canvas")!;
  const view = new GraphView(canvasHost, {
    onNodeClick: (node) => void store.expandEgo(node.id),
    onEdgeClick: (edge) => store.selectEdge(edgeKeyOf(edge)),
  });
  const panel = new ProvenancePanel(document.body, api, () => store.clearEdge());

  const searchInput = document.getElementById("search") as HTMLInputElement;
  const resultsList = document.getElementById("search-results")!;
  const radiusSelect = document.getElementById("radius") as HTMLSelectElement;
  const overviewButton = document.getElementById("show-overview")!;
  const statusLine = document.getElementById("status")!;

  let searchTimer = 0;
  searchInput.addEventListener("input", () => {
    store.setSearchQuery(searchInput.value);
    window.clearTimeout(searchTimer);
    const query = searchInput.value.trim();
    if (!query) {
      resultsList.replaceChildren();
      return;
    }
    searchTimer = window.setTimeout(async () => {
      let results: SearchResult[];
      try {
        results = await api.search(query);
      } catch {
        return;
      }
      resultsList.replaceChildren(
        ...results.map((r) => {
          const item = document.createElement("li");
          item.textContent = r.ticker ? `${r.name} (${r.ticker})` : r.name;
          item.addEventListener("click", () => {
            resultsList.replaceChildren();
            searchInput.value = "";
            void store.expandEgo(r.id);
          });
          return item;
        }),
      );
    }, 150);
  });

  radiusSelect.addEventListener("change", () => {
    void store.setRadius(Number(radiusSelect.value) as Radius);
  });
  overviewButton.addEventListener("click", () => void store.loadOverview());

  let lastEdgeKey: string | null = null;
  store.subscribe((state) => {
    if (state.visibleGraph) {
      view.render(state.visibleGraph, state.focus);
      const what = state.focus
        ? `ego of ${state.visibleGraph.nodes.find((n) => n.id === state.focus)?.name ?? state.focus} (radius ${state.radius})`
        : `overview of ${state.visibleGraph.corpus_tag}`;
      statusLine.textContent =
        `${what}: ${state.visibleGraph.nodes.length} companies, ` +
        `${state.visibleGraph.edges.length} relationships`;
    }
    radiusSelect.value = String(state.radius);
    writeHash(state);

    const key = state.selectedEdge
      ? `${state.selectedEdge.source}|${state.selectedEdge.target}|${state.selectedEdge.year}`
      : null;
    if (key !== lastEdgeKey) {
      lastEdgeKey = key;
      if (state.selectedEdge) {
        void panel.show(state.selectedEdge, state.visibleGraph);
      } else {
        panel.hide();
      }
    }
  });

  const initial = parseHash();
  if (initial.focus) {
    void store.expandEgo(initial.focus, initial.radius);
  } else {
    void store.setRadius(initial.radius).then(() => store.loadOverview());
  }
}

document.addEventListener("DOMContentLoaded", main);
