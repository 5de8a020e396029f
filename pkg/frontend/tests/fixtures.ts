// Mock payloads shaped like the fixture corpus: a Microsoft-centered ego
// (Cisco / IBM / Intel plus the filer citing Microsoft) and its radius-2
// superset.
import type { EdgeDetail, EdgeKey, GraphEdge, GraphNode, GraphPayload, Radius } from "../src/types";

export function node(id: string, name: string, outDegree = 0, inDegree = 0): GraphNode {
  return { id, name, ticker: null, in_degree: inDegree, out_degree: outDegree };
}

export function edge(source: string, target: string, snippet = ""): GraphEdge {
  return { source, target, year: 2020, accession: `${source}-20-000001`, snippet };
}

export const MSFT = "012141";
export const CSCO = "020779";
export const IBM = "006066";
export const INTC = "001686";
export const AAPL = "001690";
export const GOOG = "010846";
export const AMZN = "064768";

export function payload(nodes: GraphNode[], edges: GraphEdge[]): GraphPayload {
  return { nodes, edges, corpus_tag: "mock", built_at: "2021-01-01T00:00:00+00:00" };
}

export const msftEgoRadius1 = payload(
  [
    node(MSFT, "Microsoft Corporation", 3, 1),
    node(CSCO, "Cisco Systems, Inc.", 0, 1),
    node(IBM, "International Business Machines Corporation", 0, 1),
    node(INTC, "Intel Corporation", 0, 1),
    node(AAPL, "Apple Inc.", 1, 0),
  ],
  [
    edge(MSFT, CSCO, "We compete with Cisco Systems in networking."),
    edge(MSFT, IBM),
    edge(MSFT, INTC),
    edge(AAPL, MSFT),
  ],
);

export const msftEgoRadius2 = payload(
  [
    ...msftEgoRadius1.nodes,
    node(GOOG, "Alphabet Inc.", 0, 1),
    node(AMZN, "Amazon.com, Inc.", 0, 1),
  ],
  [...msftEgoRadius1.edges, edge(AAPL, GOOG), edge(AAPL, AMZN)],
);

export const overviewGraph = payload(
  [...msftEgoRadius2.nodes, node("008007", "Pfizer Inc.", 2, 0)],
  [...msftEgoRadius2.edges],
);

type Deferred<T> = { promise: Promise<T>; resolve: (v: T) => void; reject: (e: unknown) => void };

export function deferred<T>(): Deferred<T> {
  let resolve!: (v: T) => void;
  let reject!: (e: unknown) => void;
  const promise = new Promise<T>((res, rej) => {
    resolve = res;
    reject = rej;
  });
  return { promise, resolve, reject };
}

/** ApiClient stand-in with per-call scripting. */
export class MockApi {
  egoCalls: Array<{ id: string; radius: Radius }> = [];
  egoResponses = new Map<string, GraphPayload | Error>();
  pending: Array<Deferred<GraphPayload>> = [];
  manual = false;
  full: GraphPayload = overviewGraph;
  edgeDetail: EdgeDetail | Error | null = null;

  setEgo(id: string, radius: Radius, response: GraphPayload | Error): void {
    this.egoResponses.set(`${id}@${radius}`, response);
  }

  async fullGraph(): Promise<GraphPayload> {
    return this.full;
  }

  ego(id: string, radius: Radius): Promise<GraphPayload> {
    this.egoCalls.push({ id, radius });
    if (this.manual) {
      const d = deferred<GraphPayload>();
      this.pending.push(d);
      return d.promise;
    }
    const scripted = this.egoResponses.get(`${id}@${radius}`);
    if (scripted instanceof Error) return Promise.reject(scripted);
    if (scripted) return Promise.resolve(scripted);
    return Promise.reject(new Error(`unscripted ego ${id}@${radius}`));
  }

  async search(): Promise<never[]> {
    return [];
  }

  edge(_key: EdgeKey): Promise<EdgeDetail> {
    if (this.edgeDetail instanceof Error) return Promise.reject(this.edgeDetail);
    if (this.edgeDetail) return Promise.resolve(this.edgeDetail);
    return Promise.reject(new Error("no edge scripted"));
  }
}
