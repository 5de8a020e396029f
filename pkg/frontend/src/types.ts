// Wire types mirroring the graph API's JSON schemas. All graph data is
// readonly on the client: the explorer renders what the server sent and
// never invents or mutates nodes or edges.

export interface GraphNode {
  readonly id: string;
  readonly name: string;
  readonly ticker: string | null;
  readonly in_degree: number;
  readonly out_degree: number;
}

export interface GraphEdge {
  readonly source: string;
  readonly target: string;
  readonly year: number;
  readonly accession: string;
  readonly snippet: string;
}

export interface GraphPayload {
  readonly nodes: readonly GraphNode[];
  readonly edges: readonly GraphEdge[];
  readonly corpus_tag: string;
  readonly built_at: string;
}

export interface HubEntry {
  readonly id: string;
  readonly name: string;
  readonly degree: number;
}

export interface OverviewPayload {
  readonly corpus_tag: string;
  readonly n_nodes: number;
  readonly n_edges: number;
  readonly top_hubs: readonly HubEntry[];
}

export interface SearchResult {
  readonly id: string;
  readonly name: string;
  readonly ticker: string | null;
}

export interface EdgeDetail {
  readonly source: string;
  readonly target: string;
  readonly year: number;
  readonly accession: string;
  readonly snippet: string;
}

export type Radius = 1 | 2 | 3;

export interface EdgeKey {
  readonly source: string;
  readonly target: string;
  readonly year: number;
}

export interface ViewState {
  readonly focus: string | null;
  readonly radius: Radius;
  readonly visibleGraph: GraphPayload | null;
  readonly selectedEdge: EdgeKey | null;
  readonly searchQuery: string;
}

export function edgeKeyOf(edge: GraphEdge): EdgeKey {
  return { source: edge.source, target: edge.target, year: edge.year };
}

export function edgeKeyString(key: EdgeKey): string {
  return `${key.source}->${key.target}@${key.year}`;
}

export function degreeOf(node: GraphNode): number {
  return node.in_degree + node.out_degree;
}
