import datetime as dt
import json
from collections import deque

import networkx as nx
import pytest

from compgraph.edgar_client import FilingRef
from compgraph.errors import SchemaError, UnknownFiler, UnknownNode
from compgraph.graph_store import (CompetitionEdge, CompetitionGraph,
                                   EdgeProvenance, NodeInfo, build_graph,
                                   ego_network, export_graph, graph_to_dict,
                                   load_graph, save_graph)
from compgraph.itemizer import linearize
from compgraph.linker import KBEntry, KnowledgeBase, LinkedEntity
from compgraph.recognize import EntityMention


def ref_for(cik="0000000001", accession="0000000001-21-000001", year=2020):
    return FilingRef(cik=cik, accession_number=accession, form_type="10-K",
                     filing_date=dt.date(2021, 2, 1), registrant_name="Filer",
                     fiscal_year=year)


def linked(surface, company_id):
    mention = EntityMention(surface=surface, char_start=0, char_end=len(surface),
                            sources=frozenset({"t"}))
    return LinkedEntity(mention=mention, company_id=company_id, method="alias", score=1.0)


@pytest.fixture()
def tiny_kb():
    names = {"000001": "Alpha Corp", "000002": "Beta Inc", "000003": "Gamma LLC",
             "000004": "Delta Co", "000005": "Epsilon AG", "000006": "Zeta plc"}
    return KnowledgeBase([KBEntry(cid, name, (name,), None)
                          for cid, name in names.items()])


def edge_oracle_bfs(graph, center, radius):
    """Independent BFS over an adjacency map built straight from the edges."""
    adjacency = {}
    for e in graph.edges:
        adjacency.setdefault(e.source_id, set()).add(e.target_id)
        adjacency.setdefault(e.target_id, set()).add(e.source_id)
    seen = {center: 0}
    queue = deque([center])
    while queue:
        node = queue.popleft()
        if seen[node] == radius:
            continue
        for nxt in adjacency.get(node, ()):
            if nxt not in seen:
                seen[nxt] = seen[node] + 1
                queue.append(nxt)
    return set(seen)


class TestBuildGraph:
    def test_two_mentions_three_nodes(self, tiny_kb):
        records = [(ref_for(), "000001", [linked("Beta Inc", "000002"),
                                          linked("Gamma LLC", "000003")])]
        graph = build_graph(records, tiny_kb, corpus_tag="t")
        assert graph.edge_keys() == {("000001", "000002", 2020),
                                     ("000001", "000003", 2020)}
        assert set(graph.nodes) == {"000001", "000002", "000003"}
        graph.validate()

    def test_duplicate_mentions_collapse(self, tiny_kb):
        records = [(ref_for(), "000001",
                    [linked("Beta Inc", "000002"), linked("Beta", "000002")])]
        graph = build_graph(records, tiny_kb)
        assert len(graph.edges) == 1

    def test_first_provenance_wins(self, tiny_kb):
        first = linked("Beta Inc", "000002")
        second = LinkedEntity(
            mention=EntityMention(surface="Beta", char_start=5, char_end=9,
                                  sources=frozenset({"t"}),
                                  provenance=EdgeProvenance("0000000001-21-000001",
                                                            5, 9, "Beta later")),
            company_id="000002", method="alias", score=1.0)
        graph = build_graph([(ref_for(), "000001", [first, second])], tiny_kb)
        assert graph.edges[0].provenance.snippet == "Beta Inc"

    def test_self_mention_dropped(self, tiny_kb):
        records = [(ref_for(), "000001", [linked("Alpha Corp", "000001"),
                                          linked("Beta Inc", "000002")])]
        graph = build_graph(records, tiny_kb)
        assert graph.edge_keys() == {("000001", "000002", 2020)}

    def test_unlinked_entities_excluded(self, tiny_kb):
        unlinked = LinkedEntity(
            mention=EntityMention(surface="Private Co", char_start=0, char_end=10,
                                  sources=frozenset({"t"})),
            company_id=None, method="unlinked", score=0.0)
        graph = build_graph([(ref_for(), "000001", [unlinked])], tiny_kb)
        assert graph.edges == []
        assert graph.nodes == {}

    def test_unknown_filer(self, tiny_kb):
        with pytest.raises(UnknownFiler):
            build_graph([(ref_for(), "999999", [])], tiny_kb)

    def test_degrees_consistent(self, tiny_kb):
        records = [
            (ref_for(), "000001", [linked("b", "000002"), linked("c", "000003")]),
            (ref_for(cik="0000000002", accession="0000000002-21-000001"),
             "000002", [linked("a", "000001"), linked("c", "000003")]),
        ]
        graph = build_graph(records, tiny_kb)
        graph.validate()
        assert graph.nodes["000003"].in_degree == 2
        assert graph.nodes["000001"].out_degree == 2


@pytest.fixture()
def hub_graph(tiny_kb):
    """Six nodes; 000001 is a hub of degree 3; 000005-000006 hang off 000004."""
    records = [
        (ref_for(), "000001",
         [linked("b", "000002"), linked("c", "000003"), linked("d", "000004")]),
        (ref_for(cik="0000000004", accession="0000000004-21-000001"), "000004",
         [linked("e", "000005")]),
        (ref_for(cik="0000000005", accession="0000000005-21-000001"), "000005",
         [linked("f", "000006")]),
    ]
    return build_graph(records, tiny_kb, corpus_tag="hub")


class TestEgoNetwork:
    def test_radius_zero(self, hub_graph):
        ego = ego_network(hub_graph, "000001", 0)
        assert set(ego.nodes) == {"000001"}
        assert ego.edges == []

    def test_radius_one_around_hub(self, hub_graph):
        ego = ego_network(hub_graph, "000001", 1)
        # oracle: independent BFS implementation
        assert set(ego.nodes) == edge_oracle_bfs(hub_graph, "000001", 1)
        assert set(ego.nodes) == {"000001", "000002", "000003", "000004"}

    def test_saturation_beyond_diameter(self, hub_graph):
        ego = ego_network(hub_graph, "000002", 10)
        assert set(ego.nodes) == set(hub_graph.nodes)

    def test_unknown_center(self, hub_graph):
        with pytest.raises(UnknownNode):
            ego_network(hub_graph, "424242", 1)

    def test_matches_bfs_oracle_for_all_nodes_and_radii(self, hub_graph, pipeline_run):
        for graph in (hub_graph, pipeline_run.graph):
            for center in graph.nodes:
                for radius in range(4):
                    ego = ego_network(graph, center, radius)
                    assert set(ego.nodes) == edge_oracle_bfs(graph, center, radius)
                    ego.validate()

    def test_matches_networkx_oracle(self, pipeline_run):
        graph = pipeline_run.graph
        undirected = nx.Graph()
        undirected.add_nodes_from(graph.nodes)
        undirected.add_edges_from((e.source_id, e.target_id) for e in graph.edges)
        for center in list(graph.nodes)[:8]:
            for radius in (1, 2, 3):
                want = {n for n, d in
                        nx.single_source_shortest_path_length(undirected, center,
                                                              cutoff=radius).items()}
                assert set(ego_network(graph, center, radius).nodes) == want


class TestPersistence:
    def test_round_trip_equality(self, hub_graph, tmp_path):
        path = tmp_path / "g.json"
        save_graph(hub_graph, path)
        assert load_graph(path) == hub_graph

    def test_truncated_file(self, hub_graph, tmp_path):
        path = tmp_path / "g.json"
        save_graph(hub_graph, path)
        path.write_text(path.read_text()[:40])
        with pytest.raises(SchemaError):
            load_graph(path)

    def test_empty_graph_round_trip(self, tmp_path):
        empty = CompetitionGraph(nodes={}, edges=[], corpus_tag="empty")
        path = tmp_path / "g.json"
        save_graph(empty, path)
        loaded = load_graph(path)
        assert loaded == empty
        assert loaded.edges == []

    def test_schema_keys_present(self, hub_graph):
        payload = graph_to_dict(hub_graph)
        assert set(payload) == {"nodes", "edges", "corpus_tag", "built_at"}
        assert {"id", "name", "ticker", "in_degree", "out_degree"} <= set(payload["nodes"][0])
        assert {"source", "target", "year", "accession", "snippet"} <= set(payload["edges"][0])

    def test_inconsistent_degrees_rejected(self, hub_graph, tmp_path):
        payload = graph_to_dict(hub_graph)
        payload["nodes"][0]["in_degree"] += 5
        path = tmp_path / "g.json"
        path.write_text(json.dumps(payload))
        with pytest.raises(SchemaError):
            load_graph(path)


class TestExport:
    def test_dot_single_edge(self, tiny_kb, tmp_path):
        graph = build_graph([(ref_for(), "000001", [linked("b", "000002")])], tiny_kb)
        path = tmp_path / "g.dot"
        export_graph(graph, "dot", path)
        content = path.read_text()
        assert content.count("->") == 1
        assert content.startswith("digraph")

    def test_dot_empty_graph(self, tmp_path):
        path = tmp_path / "g.dot"
        export_graph(CompetitionGraph(nodes={}, edges=[], corpus_tag=""), "dot", path)
        assert "digraph" in path.read_text()

    def test_graphml_validates_with_counts(self, hub_graph, tmp_path):
        path = tmp_path / "g.graphml"
        export_graph(hub_graph, "graphml", path)
        # off-the-shelf reader as the schema check
        loaded = nx.read_graphml(path)
        assert loaded.number_of_nodes() == len(hub_graph.nodes)
        assert loaded.number_of_edges() == len(hub_graph.edges)
        assert loaded.is_directed()

    def test_json_export_round_trips(self, hub_graph, tmp_path):
        path = tmp_path / "g.json"
        export_graph(hub_graph, "json", path)
        assert load_graph(path) == hub_graph

    def test_unknown_format(self, hub_graph, tmp_path):
        with pytest.raises(ValueError):
            export_graph(hub_graph, "xlsx", tmp_path / "g.xlsx")


class TestProvenanceIntegrity:
    def test_snippets_reproducible_from_cache(self, pipeline_run, corpus_client, labels):
        """Re-reading the cached filing at provenance offsets gives the snippet."""
        by_accession = {entry["accession_number"]: entry for entry in labels["filings"]}
        from compgraph.edgar_client import _ref_from_index
        docs = {}
        for edge in pipeline_run.graph.edges:
            acc = edge.provenance.accession_number
            if acc not in docs:
                raw = corpus_client.fetch_filing(_ref_from_index(by_accession[acc]))
                docs[acc] = linearize(raw)
            prov = edge.provenance
            slice_ = docs[acc].full_text[prov.char_start:prov.char_end]
            assert slice_[:len(prov.snippet)] == prov.snippet
