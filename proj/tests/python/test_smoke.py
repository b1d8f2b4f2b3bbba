"""End-to-end smoke tests for the Python bindings."""

import math
import os

import pytest

import ctxvuln as cv

FIXTURES = os.environ.get(
    "CTXVULN_FIXTURES",
    os.path.join(os.path.dirname(__file__), "..", "..", "fixtures"),
)


def test_pagerank_cycle():
    g = cv.DirectedGraph()
    g.nodes = ["a", "b", "c"]
    g.edges = [(0, 1), (1, 2), (2, 0)]
    scores = cv.pagerank(g)
    assert len(scores) == 3
    for s in scores:
        assert s == pytest.approx(1.0 / 3.0, abs=1e-9)


def test_pagerank_rejects_bad_damping():
    g = cv.DirectedGraph()
    g.nodes = ["a"]
    cfg = cv.RankConfig()
    cfg.damping = 1.0
    with pytest.raises(ValueError):
        cv.pagerank(g, cfg)


def test_fat_tree_shape():
    topo = cv.generate_fat_tree(4)
    assert len(topo.nodes) == 36
    assert len(topo.links) == 48
    assert cv.validate_topology(topo) == []


def test_mining_and_assembly():
    events = [cv.LogEvent(1000 * i, "m", comp) for i, comp in enumerate(["java", "hdfs"] * 4)]
    deps = cv.mine_software_dependencies(events, 2000, 0.5, 0.6)
    assert any(d.sw == "hdfs" and "java" in d.dep for d in deps)

    topo = cv.parse_topology('{"nodes": [{"id": "m", "kind": "server"}], "links": []}',
                             cv.TopoFormat.json)
    cdg, dropped = cv.build_cdg(topo, deps, [], {})
    assert dropped == []
    ids = [n.id for n in cdg.nodes]
    assert "java@m" in ids and "hdfs@m" in ids
    sw = cv.project(cdg, cv.Projection.sw_graph)
    assert len(sw.nodes) == 2 and len(sw.edges) == 1


def test_full_pipeline_fixture(tmp_path):
    config = cv.load_pipeline_config(os.path.join(FIXTURES, "cluster8", "config.json"))
    result = cv.run_pipeline(config, str(tmp_path / "out"))
    assert len(result.scores) == 10
    assert result.match_report.unmatched == []

    ranking = [s.vuln_id for s in result.scores]
    assert ranking.index("CVE-2016-1392") < ranking.index("CVE-2015-7430")
    assert all(
        a.severity >= b.severity for a, b in zip(result.scores, result.scores[1:])
    )
    assert math.isclose(sum(1 for s in result.scores if s.severity > 0), 10)

    assert result.simulated
    assert result.comparison.plan_a.auc > result.comparison.plan_b.auc
    assert (tmp_path / "out" / "report.json").exists()


def test_scoring_validation():
    with pytest.raises(ValueError):
        cv.score_vulnerabilities(
            [], [], cv.Weights(0.0, 0.0, 0.0), cv.Aggregator.weighted_sum, []
        )
