import * as d3 from "d3";
import type { GraphEdge, GraphNode, GraphPayload } from "./types";
import { degreeOf, edgeKeyOf, edgeKeyString } from "./types";

export interface ViewCallbacks {
  onNodeClick?: (node: GraphNode) => void;
  onEdgeClick?: (edge: GraphEdge) => void;
}

interface SimNode extends d3.SimulationNodeDatum {
  id: string;
  data: GraphNode;
}

interface SimLink extends d3.SimulationLinkDatum<SimNode> {
  key: string;
  data: GraphEdge;
}

const MIN_RADIUS = 7;
const RADIUS_GAIN = 3.2;
const TICKS = 200;

/** Circle radius, strictly monotone in total degree so hubs dominate. */
export function nodeRadius(node: GraphNode): number {
  return MIN_RADIUS + RADIUS_GAIN * Math.sqrt(degreeOf(node));
}

/**
 * Force-directed rendering of exactly one API payload. Every render
 * replaces the displayed node and edge sets wholesale; the layout is run
 * synchronously for a fixed tick budget, so a given payload always lands
 * in the same positions. Edges draw as plain lines (direction is in the
 * tooltip, not an arrowhead).
 */
export class GraphView {
  private svg: d3.Selection<SVGSVGElement, unknown, null, undefined>;
  private edgeLayer: d3.Selection<SVGGElement, unknown, null, undefined>;
  private nodeLayer: d3.Selection<SVGGElement, unknown, null, undefined>;
  private emptyNote: d3.Selection<SVGTextElement, unknown, null, undefined>;

  constructor(
    private readonly container: HTMLElement,
    private readonly callbacks: ViewCallbacks = {},
    private readonly width = 960,
    private readonly height = 640,
  ) {
    this.svg = d3
      .select(container)
      .append("svg")
      .attr("viewBox", `0 0 ${this.width} ${this.height}`)
      .attr("class", "graph-canvas");
    const zoomTarget = this.svg.append("g").attr("class", "zoom-layer");
    this.edgeLayer = zoomTarget.append("g").attr("class", "edges");
    this.nodeLayer = zoomTarget.append("g").attr("class", "nodes");
    this.emptyNote = this.svg
      .append("text")
      .attr("class", "empty-note")
      .attr("x", this.width / 2)
      .attr("y", this.height / 2)
      .attr("text-anchor", "middle")
      .style("display", "none")
      .text("no companies to show");
    this.svg.call(
      d3
        .zoom<SVGSVGElement, unknown>()
        .scaleExtent([0.25, 6])
        .on("zoom", (event) => zoomTarget.attr("transform", event.transform)) as never,
    );
  }

  render(payload: GraphPayload, focus: string | null): void {
    const nodes: SimNode[] = payload.nodes.map((n) => ({ id: n.id, data: n }));
    const links: SimLink[] = payload.edges.map((e) => ({
      source: e.source,
      target: e.target,
      key: edgeKeyString(edgeKeyOf(e)),
      data: e,
    }));
    this.emptyNote.style("display", nodes.length === 0 ? "block" : "none");

    const simulation = d3
      .forceSimulation(nodes)
      .force("link", d3.forceLink<SimNode, SimLink>(links).id((d) => d.id).distance(90))
      .force("charge", d3.forceManyBody().strength(-220))
      .force("center", d3.forceCenter(this.width / 2, this.height / 2))
      .force("collide", d3.forceCollide<SimNode>((d) => nodeRadius(d.data) + 4))
      .stop();
    simulation.tick(TICKS);

    const names = new Map(payload.nodes.map((n) => [n.id, n.name]));
    const edgeSel = this.edgeLayer
      .selectAll<SVGLineElement, SimLink>("line")
      .data(links, (d) => d.key);
    edgeSel.exit().remove();
    const edgeEnter = edgeSel.enter().append("line").attr("class", "edge");
    edgeEnter.append("title");
    const mergedEdges = edgeEnter.merge(edgeSel as never);
    mergedEdges
      .attr("data-key", (d) => d.key)
      .attr("x1", (d) => (d.source as SimNode).x ?? 0)
      .attr("y1", (d) => (d.source as SimNode).y ?? 0)
      .attr("x2", (d) => (d.target as SimNode).x ?? 0)
      .attr("y2", (d) => (d.target as SimNode).y ?? 0)
      .on("click", (_event, d) => this.callbacks.onEdgeClick?.(d.data));
    mergedEdges
      .select("title")
      .text((d) => `${names.get(d.data.source)} → ${names.get(d.data.target)} (${d.data.year})`);

    const nodeSel = this.nodeLayer
      .selectAll<SVGGElement, SimNode>("g.node")
      .data(nodes, (d) => d.id);
    nodeSel.exit().remove();
    const nodeEnter = nodeSel.enter().append("g").attr("class", "node");
    nodeEnter.append("circle");
    nodeEnter.append("text").attr("class", "label").attr("dy", "0.32em");
    nodeEnter.append("title");
    const mergedNodes = nodeEnter.merge(nodeSel as never);
    mergedNodes
      .attr("data-id", (d) => d.id)
      .attr("transform", (d) => `translate(${d.x ?? 0},${d.y ?? 0})`)
      .classed("focus", (d) => d.id === focus)
      .on("click", (_event, d) => this.callbacks.onNodeClick?.(d.data));
    mergedNodes.select("circle").attr("r", (d) => nodeRadius(d.data));
    mergedNodes
      .select("text.label")
      .attr("x", (d) => nodeRadius(d.data) + 4)
      .text((d) => d.data.name);
    mergedNodes
      .select("title")
      .text((d) => `${d.data.name} (out ${d.data.out_degree}, in ${d.data.in_degree})`);
  }

  /** Ids of the currently rendered nodes (for tests and debugging). */
  renderedNodeIds(): string[] {
    const ids: string[] = [];
    this.nodeLayer.selectAll<SVGGElement, SimNode>("g.node").each(function () {
      ids.push(this.getAttribute("data-id") ?? "");
    });
    return ids.sort();
  }

  /** Keys of the currently rendered edges. */
  renderedEdgeKeys(): string[] {
    const keys: string[] = [];
    this.edgeLayer.selectAll<SVGLineElement, SimLink>("line").each(function () {
      keys.push(this.getAttribute("data-key") ?? "");
    });
    return keys.sort();
  }

  renderedRadiusOf(nodeId: string): number {
    const circle = this.container.querySelector(`g.node[data-id="${nodeId}"] circle`);
    return circle ? Number(circle.getAttribute("r")) : NaN;
  }

  renderedPositionOf(nodeId: string): string {
    const group = this.container.querySelector(`g.node[data-id="${nodeId}"]`);
    return group?.getAttribute("transform") ?? "";
  }
}
