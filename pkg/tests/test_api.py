import pytest
from fastapi.testclient import TestClient

from compgraph.graph_store import ego_network, graph_to_dict
from compgraph.server import create_app


@pytest.fixture(scope="module")
def client(pipeline_run, kb):
    return TestClient(create_app(pipeline_run.graph, kb=kb), raise_server_exceptions=False)


class TestHealth:
    def test_healthz(self, client):
        response = client.get("/healthz")
        assert response.status_code == 200


class TestOverview:
    def test_counts_match_graph(self, client, pipeline_run):
        payload = client.get("/graph/overview").json()
        assert payload["corpus_tag"] == "sp-fixture-2020"
        assert payload["n_nodes"] == len(pipeline_run.graph.nodes)
        assert payload["n_edges"] == len(pipeline_run.graph.edges)

    def test_hubs_sorted_and_capped(self, client, pipeline_run):
        hubs = client.get("/graph/overview").json()["top_hubs"]
        assert len(hubs) <= 10
        degrees = [h["degree"] for h in hubs]
        assert degrees == sorted(degrees, reverse=True)
        top = max(pipeline_run.graph.nodes.items(),
                  key=lambda item: (item[1].in_degree + item[1].out_degree, item[0]))
        assert hubs[0]["degree"] == top[1].in_degree + top[1].out_degree


class TestCompany:
    def test_detail(self, client, pipeline_run):
        node_id, info = next(iter(pipeline_run.graph.nodes.items()))
        payload = client.get(f"/company/{node_id}").json()
        assert payload["name"] == info.name
        assert payload["degree"] == info.in_degree + info.out_degree

    def test_unknown_company_is_structured_404(self, client):
        response = client.get("/company/999999")
        assert response.status_code == 404
        assert response.json()["code"] == "not_found"
        assert "message" in response.json()


class TestEgo:
    def test_matches_oracle_serialization(self, client, pipeline_run):
        for node_id in list(pipeline_run.graph.nodes)[:6]:
            for radius in (1, 2, 3):
                payload = client.get(f"/company/{node_id}/ego?radius={radius}").json()
                want = graph_to_dict(ego_network(pipeline_run.graph, node_id, radius))
                assert payload == want

    def test_radius_validation(self, client, pipeline_run):
        node_id = next(iter(pipeline_run.graph.nodes))
        for bad in (0, 4, -1):
            response = client.get(f"/company/{node_id}/ego?radius={bad}")
            assert response.status_code == 400
            assert response.json()["code"] == "bad_request"

    def test_non_integer_radius(self, client, pipeline_run):
        node_id = next(iter(pipeline_run.graph.nodes))
        response = client.get(f"/company/{node_id}/ego?radius=big")
        assert response.status_code == 400
        assert response.json()["code"] == "bad_request"

    def test_unknown_center(self, client):
        response = client.get("/company/999999/ego?radius=1")
        assert response.status_code == 404
        assert response.json()["code"] == "not_found"


class TestSearch:
    def test_matches_linear_scan_oracle(self, client, kb):
        payload = client.get("/search", params={"q": "micro"}).json()
        # oracle: independent scan over the knowledge base entries
        matching = {e.company_id for e in kb.entries
                    if any("micro" in n.lower()
                           for n in [e.canonical_name, *e.aliases,
                                     *( [e.ticker] if e.ticker else [] )])}
        assert {item["id"] for item in payload} == matching
        assert len(payload) <= 25

    def test_prefix_ranked_first(self, client):
        payload = client.get("/search", params={"q": "micro"}).json()
        names = [item["name"] for item in payload]
        assert names[0] in ("Micron Technology, Inc.", "Microsoft Corporation")

    def test_empty_query_rejected(self, client):
        response = client.get("/search", params={"q": "  "})
        assert response.status_code == 400
        assert response.json()["code"] == "bad_request"

    def test_shape(self, client):
        payload = client.get("/search", params={"q": "apple"}).json()
        assert payload
        assert set(payload[0]) == {"id", "name", "ticker"}


class TestEdgeEndpoint:
    def test_provenance_snippet_served(self, client, pipeline_run):
        edge = pipeline_run.graph.edges[0]
        url = f"/edge/{edge.source_id}/{edge.target_id}/{edge.fiscal_year}"
        payload = client.get(url).json()
        assert payload["snippet"] == edge.provenance.snippet
        assert payload["accession"] == edge.provenance.accession_number

    def test_unknown_edge(self, client):
        response = client.get("/edge/000001/000002/1999")
        assert response.status_code == 404
        assert response.json()["code"] == "not_found"


class TestSnapshotIsolation:
    def test_responses_stable_across_requests(self, client):
        first = client.get("/graph/overview").json()
        second = client.get("/graph/overview").json()
        assert first == second


class TestWithoutKb:
    def test_search_falls_back_to_graph_nodes(self, pipeline_run):
        app = create_app(pipeline_run.graph, kb=None)
        with TestClient(app) as bare_client:
            payload = bare_client.get("/search", params={"q": "intel"}).json()
            assert any(item["name"] == "Intel Corporation" for item in payload)
