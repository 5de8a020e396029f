"""Builds, persists and exports the competition graph.

Edges are directed filer -> mentioned competitor, since disclosure is
asymmetric; a UI may render them undirected. Each edge carries provenance:
the accession number and the exact filing-text offsets of the disclosure
snippet, so every edge can be traced back to the cached filing.
"""
from __future__ import annotations

import datetime as dt
import json
import logging
from collections import deque
from dataclasses import dataclass, field, replace
from pathlib import Path
from xml.etree import ElementTree as ET

from .edgar_client import FilingRef
from .errors import IoError, SchemaError, UnknownFiler, UnknownNode
from .linker import KnowledgeBase, LinkedEntity

logger = logging.getLogger(__name__)

SNIPPET_MAX_CHARS = 300


@dataclass(frozen=True)
class EdgeProvenance:
    accession_number: str
    char_start: int
    char_end: int
    snippet: str

    def __post_init__(self):
        if len(self.snippet) > SNIPPET_MAX_CHARS:
            object.__setattr__(self, "snippet", self.snippet[:SNIPPET_MAX_CHARS])


@dataclass(frozen=True)
class CompetitionEdge:
    source_id: str
    target_id: str
    fiscal_year: int
    provenance: EdgeProvenance

    def __post_init__(self):
        if self.source_id == self.target_id:
            raise ValueError("self-loop edges are not allowed")

    def key(self) -> tuple[str, str, int]:
        return (self.source_id, self.target_id, self.fiscal_year)


@dataclass
class NodeInfo:
    name: str
    ticker: str | None = None
    out_degree: int = 0
    in_degree: int = 0


@dataclass
class CompetitionGraph:
    nodes: dict[str, NodeInfo]
    edges: list[CompetitionEdge]
    corpus_tag: str
    built_at: str = field(default_factory=lambda: dt.datetime.now(dt.timezone.utc).isoformat())

    def edge_keys(self) -> set[tuple[str, str, int]]:
        return {e.key() for e in self.edges}

    def degree(self, node_id: str) -> int:
        info = self.nodes[node_id]
        return info.in_degree + info.out_degree

    def find_edge(self, source: str, target: str, year: int) -> CompetitionEdge | None:
        for edge in self.edges:
            if edge.key() == (source, target, year):
                return edge
        return None

    def validate(self):
        """Raise if any structural invariant is broken."""
        keys = [e.key() for e in self.edges]
        if len(keys) != len(set(keys)):
            raise SchemaError("duplicate (source, target, year) edge keys")
        recomputed = _degrees(self.edges)
        for node_id, info in self.nodes.items():
            out_d, in_d = recomputed.get(node_id, (0, 0))
            if (info.out_degree, info.in_degree) != (out_d, in_d):
                raise SchemaError(f"stored degrees of {node_id} disagree with edges")
        for edge in self.edges:
            if edge.source_id not in self.nodes or edge.target_id not in self.nodes:
                raise SchemaError(f"edge {edge.key()} references a missing node")


def _degrees(edges: list[CompetitionEdge]) -> dict[str, tuple[int, int]]:
    degrees: dict[str, list[int]] = {}
    for edge in edges:
        degrees.setdefault(edge.source_id, [0, 0])[0] += 1
        degrees.setdefault(edge.target_id, [0, 0])[1] += 1
    return {k: (v[0], v[1]) for k, v in degrees.items()}


def _canonical_edges(edges) -> list[CompetitionEdge]:
    return sorted(edges, key=lambda e: e.key())


def build_graph(records: list[tuple[FilingRef, str, list[LinkedEntity]]],
                kb: KnowledgeBase, corpus_tag: str = "") -> CompetitionGraph:
    """Assemble the graph from per-filing linked entities.

    Every linked entity adds a filer -> competitor edge for the filing's
    fiscal year; duplicates collapse keeping the first provenance seen, and
    a filer naming itself is dropped (boilerplate, not competition).
    """
    edges: dict[tuple[str, str, int], CompetitionEdge] = {}
    self_loops_dropped = 0
    for ref, filer_id, entities in records:
        if filer_id not in kb.by_id:
            raise UnknownFiler(f"filer id {filer_id} not in the knowledge base")
        for entity in entities:
            if not entity.linked:
                continue
            if entity.company_id == filer_id:
                self_loops_dropped += 1
                continue
            key = (filer_id, entity.company_id, ref.fiscal_year)
            if key in edges:
                continue
            mention = entity.mention
            prov = mention.provenance or EdgeProvenance(
                accession_number=ref.accession_number,
                char_start=mention.char_start, char_end=mention.char_end,
                snippet=mention.surface)
            edges[key] = CompetitionEdge(source_id=filer_id,
                                         target_id=entity.company_id,
                                         fiscal_year=ref.fiscal_year,
                                         provenance=prov)
    nodes: dict[str, NodeInfo] = {}
    for edge in edges.values():
        for node_id in (edge.source_id, edge.target_id):
            if node_id not in nodes:
                entry = kb.by_id[node_id]
                nodes[node_id] = NodeInfo(name=entry.canonical_name, ticker=entry.ticker)
    edge_list = _canonical_edges(edges.values())
    for node_id, (out_d, in_d) in _degrees(edge_list).items():
        nodes[node_id].out_degree = out_d
        nodes[node_id].in_degree = in_d
    if self_loops_dropped:
        logger.info("dropped %d self-mention(s)", self_loops_dropped)
    return CompetitionGraph(nodes=dict(sorted(nodes.items())), edges=edge_list,
                            corpus_tag=corpus_tag)


def ego_network(graph: CompetitionGraph, center: str, radius: int) -> CompetitionGraph:
    """Induced subgraph of nodes within undirected hop distance <= radius."""
    if center not in graph.nodes:
        raise UnknownNode(center)
    if radius < 0:
        raise ValueError("radius must be >= 0")
    neighbors: dict[str, set[str]] = {}
    for edge in graph.edges:
        neighbors.setdefault(edge.source_id, set()).add(edge.target_id)
        neighbors.setdefault(edge.target_id, set()).add(edge.source_id)
    reached = {center}
    frontier = deque([(center, 0)])
    while frontier:
        node, dist = frontier.popleft()
        if dist == radius:
            continue
        for nxt in neighbors.get(node, ()):
            if nxt not in reached:
                reached.add(nxt)
                frontier.append((nxt, dist + 1))
    sub_edges = _canonical_edges(e for e in graph.edges
                                 if e.source_id in reached and e.target_id in reached)
    sub_nodes = {node_id: replace_node(graph.nodes[node_id]) for node_id in sorted(reached)}
    for node in sub_nodes.values():
        node.out_degree = node.in_degree = 0
    for node_id, (out_d, in_d) in _degrees(sub_edges).items():
        sub_nodes[node_id].out_degree = out_d
        sub_nodes[node_id].in_degree = in_d
    return CompetitionGraph(nodes=sub_nodes, edges=sub_edges,
                            corpus_tag=graph.corpus_tag, built_at=graph.built_at)


def replace_node(info: NodeInfo) -> NodeInfo:
    return NodeInfo(name=info.name, ticker=info.ticker,
                    out_degree=info.out_degree, in_degree=info.in_degree)


# --- persistence ---

def graph_to_dict(graph: CompetitionGraph) -> dict:
    """Canonical JSON form: nodes by id, edges by (source, target, year)."""
    return {
        "nodes": [{"id": node_id, "name": info.name, "ticker": info.ticker,
                   "in_degree": info.in_degree, "out_degree": info.out_degree}
                  for node_id, info in sorted(graph.nodes.items())],
        "edges": [{"source": e.source_id, "target": e.target_id, "year": e.fiscal_year,
                   "accession": e.provenance.accession_number,
                   "snippet": e.provenance.snippet,
                   "char_start": e.provenance.char_start,
                   "char_end": e.provenance.char_end}
                  for e in _canonical_edges(graph.edges)],
        "corpus_tag": graph.corpus_tag,
        "built_at": graph.built_at,
    }


def graph_from_dict(payload: dict) -> CompetitionGraph:
    try:
        nodes = {n["id"]: NodeInfo(name=n["name"], ticker=n.get("ticker"),
                                   in_degree=int(n["in_degree"]),
                                   out_degree=int(n["out_degree"]))
                 for n in payload["nodes"]}
        edges = [CompetitionEdge(
            source_id=e["source"], target_id=e["target"], fiscal_year=int(e["year"]),
            provenance=EdgeProvenance(accession_number=e["accession"],
                                      char_start=int(e.get("char_start", 0)),
                                      char_end=int(e.get("char_end", 0)),
                                      snippet=e["snippet"]))
            for e in payload["edges"]]
        graph = CompetitionGraph(nodes=dict(sorted(nodes.items())),
                                 edges=_canonical_edges(edges),
                                 corpus_tag=payload["corpus_tag"],
                                 built_at=payload["built_at"])
    except (KeyError, TypeError, ValueError) as exc:
        raise SchemaError(f"graph file does not match schema: {exc}") from exc
    graph.validate()
    return graph


def save_graph(graph: CompetitionGraph, path: str | Path):
    path = Path(path)
    try:
        path.write_text(json.dumps(graph_to_dict(graph), indent=1), "utf-8")
    except OSError as exc:
        raise IoError(f"cannot write graph to {path}: {exc}") from exc


def load_graph(path: str | Path) -> CompetitionGraph:
    path = Path(path)
    try:
        payload = json.loads(path.read_text("utf-8"))
    except OSError as exc:
        raise IoError(f"cannot read graph from {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise SchemaError(f"graph file is not valid JSON: {exc}") from exc
    if not isinstance(payload, dict):
        raise SchemaError("graph file must hold a JSON object")
    return graph_from_dict(payload)


# --- interchange exports ---

def export_graph(graph: CompetitionGraph, fmt: str, path: str | Path):
    """Write the graph as json, dot or graphml."""
    path = Path(path)
    if fmt == "json":
        save_graph(graph, path)
        return
    if fmt == "dot":
        content = _to_dot(graph)
    elif fmt == "graphml":
        content = _to_graphml(graph)
    else:
        raise ValueError(f"unknown export format {fmt!r}")
    try:
        path.write_text(content, "utf-8")
    except OSError as exc:
        raise IoError(f"cannot write {fmt} export to {path}: {exc}") from exc


def _dot_quote(value: str) -> str:
    return '"' + value.replace("\\", "\\\\").replace('"', '\\"') + '"'


def _to_dot(graph: CompetitionGraph) -> str:
    lines = ["digraph competition {"]
    for node_id, info in sorted(graph.nodes.items()):
        lines.append(f"  {_dot_quote(node_id)} [label={_dot_quote(info.name)}];")
    for edge in _canonical_edges(graph.edges):
        lines.append(f"  {_dot_quote(edge.source_id)} -> {_dot_quote(edge.target_id)}"
                     f" [label={_dot_quote(str(edge.fiscal_year))}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _to_graphml(graph: CompetitionGraph) -> str:
    ET.register_namespace("", "http://graphml.graphdrawing.org/xmlns")
    root = ET.Element("{http://graphml.graphdrawing.org/xmlns}graphml")
    keys = [("d_name", "node", "name", "string"),
            ("d_ticker", "node", "ticker", "string"),
            ("d_year", "edge", "year", "int"),
            ("d_accession", "edge", "accession", "string"),
            ("d_snippet", "edge", "snippet", "string")]
    for key_id, domain, name, typ in keys:
        ET.SubElement(root, "{http://graphml.graphdrawing.org/xmlns}key",
                      {"id": key_id, "for": domain, "attr.name": name, "attr.type": typ})
    g_el = ET.SubElement(root, "{http://graphml.graphdrawing.org/xmlns}graph",
                         {"id": graph.corpus_tag or "competition", "edgedefault": "directed"})
    ns = "{http://graphml.graphdrawing.org/xmlns}"
    for node_id, info in sorted(graph.nodes.items()):
        n_el = ET.SubElement(g_el, f"{ns}node", {"id": node_id})
        _data(n_el, ns, "d_name", info.name)
        if info.ticker:
            _data(n_el, ns, "d_ticker", info.ticker)
    for i, edge in enumerate(_canonical_edges(graph.edges)):
        e_el = ET.SubElement(g_el, f"{ns}edge", {"id": f"e{i}", "source": edge.source_id,
                                                 "target": edge.target_id})
        _data(e_el, ns, "d_year", str(edge.fiscal_year))
        _data(e_el, ns, "d_accession", edge.provenance.accession_number)
        _data(e_el, ns, "d_snippet", edge.provenance.snippet)
    return ET.tostring(root, encoding="unicode", xml_declaration=True)


def _data(parent, ns, key, value):
    el = ET.SubElement(parent, f"{ns}data", {"key": key})
    el.text = value
