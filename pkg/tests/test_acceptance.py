"""Exit criteria for the package; a per-criterion verdict is printed at the end of the run."""

import json
import random
import time
from decimal import Decimal

import pytest
from hypothesis import given, settings, strategies as st

from gpstopo.cli import main
from gpstopo.geodesy import DmsAngle, UtmCoordinate, parse_dms, planar_distance, to_utm, utm_zone_for
from gpstopo.graph_mst import WeightedGraph, kruskal_mst, prim_mst
from gpstopo.ingest import fixture_path, normalize_name
from gpstopo.planner import MediaAudit, PlanConfig, comparison_report, propose_topology

from oracles import cut_property_violations, exhaustive_min_spanning_weight, random_connected_graph

UTM_TOLERANCE_M = 2.0


def _graph_of(edges, aliases):
    names = []
    resolved = []
    for e in edges:
        a, b = aliases.resolve(e.name_a), aliases.resolve(e.name_b)
        for n in (a, b):
            if n not in names:
                names.append(n)
        resolved.append((a, b, e.distance_m))
    return names, resolved


def _exhaustive(names, resolved):
    index = {n: i for i, n in enumerate(names)}
    return exhaustive_min_spanning_weight(len(names), [(index[a], index[b], w) for a, b, w in resolved])


@pytest.mark.criterion(1, "UTM conversion fidelity, bundled node list, 58 values within 2 m")
def test_c1_utm_table2(academic_nodes):
    start = time.perf_counter()
    failures = []
    checked = 0
    for rec in academic_nodes:
        u = to_utm(rec.coordinate)
        assert (u.zone, u.hemisphere) == (38, "N")
        for label, got, want in (("easting", u.easting_m, rec.easting_m), ("northing", u.northing_m, rec.northing_m)):
            checked += 1
            if abs(got - want) > UTM_TOLERANCE_M:
                failures.append(f"row {rec.row} {rec.name}: {label} {got:.2f} vs published {want} ({got - want:+.2f} m)")
    elapsed = time.perf_counter() - start
    print(f"criterion 1: {checked - len(failures)}/{checked} within {UTM_TOLERANCE_M} m, {elapsed:.3f} s")
    for f in failures:
        print("  " + f)
    assert checked == 58
    assert elapsed < 1.0
    assert not failures, "; ".join(failures)


@pytest.mark.criterion(2, "MST ground truth, second determination fixture = 22120 m")
def test_c2_table5_second(table5_second, aliases):
    start = time.perf_counter()
    names, resolved = _graph_of(table5_second, aliases)
    g = WeightedGraph.from_edges(names, resolved)
    prim = prim_mst(g).total_weight_m
    kruskal = kruskal_mst(g).total_weight_m
    brute = _exhaustive(names, resolved)
    elapsed = time.perf_counter() - start
    assert len(names) == 7
    assert prim == 22120
    assert prim == kruskal == brute
    assert elapsed < 1.0


@pytest.mark.criterion(3, "First-determination audit against the reported 24000 m")
def test_c3_table5_first_audit(table5_first, aliases):
    names, resolved = _graph_of(table5_first, aliases)
    g = WeightedGraph.from_edges(names, resolved)
    prim = prim_mst(g).total_weight_m
    brute = _exhaustive(names, resolved)
    audit = MediaAudit("first determination", prim, 24000)
    print(audit.render())
    assert prim == brute == kruskal_mst(g).total_weight_m
    assert ("DISCREPANCY" in audit.render()) == (brute != 24000)


@pytest.mark.criterion(4, "Full AcademicNet plan: 28 edges over 29 nodes, audited against 57125 m")
def test_c4_academicnet_plan(academic_nodes, academic_edges, aliases):
    start = time.perf_counter()
    plan = propose_topology(academic_nodes, academic_edges, PlanConfig(), aliases)
    elapsed = time.perf_counter() - start
    assert plan.node_count == 29
    assert plan.edge_count == 28
    audit = MediaAudit("AcademicNet MST", plan.total_media_m, 57125)
    print(audit.render())
    print(f"  collapsed duplicates: {plan.provenance.get('collapsed_duplicates')}")

    index = {normalize_name(s.name): i for i, s in enumerate(plan.sites)}
    _, resolved = _graph_of(academic_edges, aliases)
    graph_edges = [(index[a], index[b], w) for a, b, w in resolved]
    tree_edges = [
        (index[normalize_name(e.name_a)], index[normalize_name(e.name_b)], e.length_m)
        for e in plan.per_edge
    ]
    assert cut_property_violations(29, tree_edges, graph_edges) == []
    assert elapsed < 1.0


@pytest.mark.criterion(5, "Comparison figures 57125 vs 11465")
def test_c5_comparison():
    r = comparison_report(57125, 11465, "AcademicNet", "KSIIN")
    print(r.render())
    assert r.media_delta_m == 45660
    assert abs(r.media_ratio - 4.98) <= 0.01
    assert abs(r.percent_of_larger - 20.1) <= 0.1


@pytest.mark.criterion(6, "Oracle equivalence on 250 random graphs (<= 8 nodes)")
def test_c6_oracle_equivalence():
    rng = random.Random(20111)
    start = time.perf_counter()
    for _ in range(250):
        n = rng.randint(1, 8)
        edges = random_connected_graph(rng, n) if n > 1 else []
        g = WeightedGraph.from_edges([f"v{i}" for i in range(n)], [(f"v{a}", f"v{b}", w) for a, b, w in edges])
        prim = prim_mst(g, rng.randrange(n)).total_weight_m
        assert prim == kruskal_mst(g).total_weight_m == exhaustive_min_spanning_weight(n, edges)
    assert time.perf_counter() - start < 30


# criterion 7: property suite

dms = st.sampled_from("NSEW").flatmap(
    lambda h: st.builds(
        DmsAngle, st.just(h), st.integers(0, (90 if h in "NS" else 180) - 1),
        st.integers(0, 59), st.integers(0, 5999).map(lambda c: Decimal(c).scaleb(-2)),
    )
)


@pytest.mark.criterion(7, "Property suite")
@given(dms)
def test_c7_dms_round_trip(angle):
    assert DmsAngle.parse(angle.to_text()) == angle
    assert parse_dms(angle.to_text()) == angle.to_degrees()


@pytest.mark.criterion(7, "Property suite")
def test_c7_zone_boundaries():
    assert utm_zone_for(44.0248) == 38
    assert utm_zone_for(0.0) == 31
    assert utm_zone_for(-179.999) == 1
    assert utm_zone_for(180.0) == 60
    for zone in range(1, 61):
        west_edge = -180 + 6 * (zone - 1)
        assert utm_zone_for(west_edge + 1e-9) == zone
        if zone > 1:
            assert utm_zone_for(west_edge - 1e-9) == zone - 1


points = st.builds(lambda e, n: UtmCoordinate(38, "N", e, n), st.floats(1e5, 9e5), st.floats(0, 1e7))


@pytest.mark.criterion(7, "Property suite")
@given(points, points, points)
def test_c7_planar_metric(a, b, c):
    assert planar_distance(a, b) == planar_distance(b, a)
    assert planar_distance(a, c) <= planar_distance(a, b) + planar_distance(b, c) + 1e-6


def _random_graph(seed):
    rng = random.Random(seed)
    n = rng.randint(2, 8)
    edges = random_connected_graph(rng, n)
    return rng, n, edges


def _build(n, edges):
    return WeightedGraph.from_edges([f"v{i}" for i in range(n)], [(f"v{a}", f"v{b}", w) for a, b, w in edges])


@pytest.mark.criterion(7, "Property suite")
@given(st.integers(0, 100_000), st.integers(1, 60), st.integers(1, 60))
def test_c7_duplicate_collapse(seed, w1, w2):
    rng, n, edges = _random_graph(seed)
    a, b, _ = edges[rng.randrange(len(edges))]
    rest = [e for e in edges if (e[0], e[1]) != (a, b)]
    assert prim_mst(_build(n, rest + [(a, b, w1), (a, b, w2)])) == prim_mst(_build(n, rest + [(a, b, min(w1, w2))]))


@pytest.mark.criterion(7, "Property suite")
@given(st.integers(0, 100_000))
def test_c7_start_invariance(seed):
    _, n, edges = _random_graph(seed)
    g = _build(n, edges)
    assert len({prim_mst(g, s).total_weight_m for s in range(n)}) == 1


@pytest.mark.criterion(7, "Property suite")
@given(st.integers(0, 100_000), st.sampled_from([0.5, 2, 3, 10]))
def test_c7_scale_equivariance(seed, c):
    _, n, edges = _random_graph(seed)
    t1 = prim_mst(_build(n, edges))
    t2 = prim_mst(_build(n, [(a, b, w * c) for a, b, w in edges]))
    assert t2.total_weight_m == c * t1.total_weight_m
    assert t2.edge_keys() == t1.edge_keys()


@pytest.mark.criterion(7, "Property suite")
def test_c7_plan_serialization_deterministic(academic_nodes, academic_edges, aliases):
    texts = {propose_topology(academic_nodes, academic_edges, PlanConfig(), aliases).to_json() for _ in range(3)}
    assert len(texts) == 1


@pytest.mark.criterion(8, "Pipeline smoke test: plan + GeoJSON, sensitivity")
def test_c8_pipeline(tmp_path, capsys):
    shapely_geometry = pytest.importorskip("shapely.geometry")
    nodes = str(fixture_path("academicnet_nodes.csv"))
    edges = str(fixture_path("academicnet_edges.csv"))
    aliases = str(fixture_path("aliases.csv"))
    geojson = tmp_path / "academicnet.geojson"
    code = main(["plan", nodes, "--edges", edges, "--aliases", aliases, "--geojson", str(geojson)])
    out, _ = capsys.readouterr()
    assert code == 0
    doc = json.loads(geojson.read_text(encoding="utf-8"))
    assert doc["type"] == "FeatureCollection"
    kinds = [f["geometry"]["type"] for f in doc["features"]]
    assert kinds.count("Point") == 29 and kinds.count("LineString") == 28
    for f in doc["features"]:
        assert f["type"] == "Feature"
        assert shapely_geometry.shape(f["geometry"]).is_valid

    code = main([
        "sensitivity", nodes,
        str(fixture_path("table5_first.csv")), str(fixture_path("table5_second.csv")),
        "--aliases", aliases,
    ])
    out, _ = capsys.readouterr()
    print(out)
    assert code == 0
    assert "total a: 22180 m" in out and "total b: 22120 m" in out
    assert "only in a:" in out and "only in b:" in out
