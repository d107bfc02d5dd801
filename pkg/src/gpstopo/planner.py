"""End-to-end topology planning.

Nodes and inter-node distances go in, a minimum spanning tree comes out,
costed by fiber length and an estimated regenerator count.  Distances come
from one of three sources:

``provided``
    surveyed route lengths (e.g. street distances) from an edge file
``straight_line``
    grid distance between projected coordinates for every node pair
``hybrid``
    provided distances where available, straight-line for every other pair;
    straight-line fill-ins are flagged in the plan provenance
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from itertools import combinations
from typing import Any, Mapping, Sequence, Union

from .errors import DataError
from .geodesy import GeoCoordinate, UtmCoordinate, planar_distance, to_utm
from .graph_mst import SpanningTree, TopologyDiff, WeightedGraph, compare_topologies, prim_mst
from .ingest import AliasMap, EdgeRecord, NodeRecord, normalize_name

EDGE_SOURCES = ("provided", "straight_line", "hybrid")
DEFAULT_REGENERATOR_SPAN_M = 40000.0


@dataclass(frozen=True)
class PlanConfig:
    edge_source: str = "provided"
    regenerator_span_m: float = DEFAULT_REGENERATOR_SPAN_M
    cost_per_meter: float | None = None
    start_node: str | None = None

    def __post_init__(self) -> None:
        if self.edge_source not in EDGE_SOURCES:
            raise ValueError(f"edge_source must be one of {EDGE_SOURCES}, not {self.edge_source!r}")
        if not self.regenerator_span_m > 0:
            raise ValueError("regenerator_span_m must be positive")
        if self.cost_per_meter is not None and self.cost_per_meter < 0:
            raise ValueError("cost_per_meter must not be negative")

    def to_dict(self) -> dict[str, Any]:
        return {
            "edge_source": self.edge_source,
            "regenerator_span_m": self.regenerator_span_m,
            "cost_per_meter": self.cost_per_meter,
            "start_node": self.start_node,
        }


@dataclass(frozen=True)
class Site:
    name: str
    geo: GeoCoordinate | None = None
    utm: UtmCoordinate | None = None


@dataclass(frozen=True)
class PlanEdge:
    name_a: str
    name_b: str
    length_m: float
    source: str = "provided"


@dataclass(frozen=True)
class EquipmentEstimate:
    regenerator_count: int
    span_m: float
    spans_exceeding: tuple[tuple[str, str, float], ...] = ()

    def to_dict(self) -> dict[str, Any]:
        return {
            "model": "estimate: floor(edge length / regenerator span) per tree edge",
            "regenerator_span_m": self.span_m,
            "regenerator_count": self.regenerator_count,
            "spans_exceeding": [
                {"from": a, "to": b, "length_m": w} for a, b, w in self.spans_exceeding
            ],
        }


@dataclass(frozen=True)
class TopologyPlan:
    tree: SpanningTree
    sites: tuple[Site, ...]
    per_edge: tuple[PlanEdge, ...]
    total_media_m: float
    equipment: EquipmentEstimate
    config: PlanConfig
    provenance: Mapping[str, Any] = field(default_factory=dict)

    @property
    def node_count(self) -> int:
        return len(self.sites)

    @property
    def edge_count(self) -> int:
        return len(self.per_edge)

    @property
    def media_cost(self) -> float | None:
        if self.config.cost_per_meter is None:
            return None
        return self.config.cost_per_meter * self.total_media_m

    def to_dict(self) -> dict[str, Any]:
        nodes = []
        for s in self.sites:
            entry: dict[str, Any] = {"name": s.name, "latitude": None, "longitude": None}
            if s.geo is not None:
                entry["latitude"] = s.geo.latitude_deg
                entry["longitude"] = s.geo.longitude_deg
            if s.utm is not None:
                entry.update(
                    zone=s.utm.zone,
                    hemisphere=s.utm.hemisphere,
                    easting=s.utm.easting_m,
                    northing=s.utm.northing_m,
                )
            nodes.append(entry)
        return {
            "config": self.config.to_dict(),
            "nodes": nodes,
            "root": self.sites[self.tree.root].name,
            "edges": [
                {"from": e.name_a, "to": e.name_b, "length_m": e.length_m, "source": e.source}
                for e in self.per_edge
            ],
            "totals": {
                "node_count": self.node_count,
                "edge_count": self.edge_count,
                "media_m": self.total_media_m,
                "media_cost": self.media_cost,
            },
            "equipment": self.equipment.to_dict(),
            "provenance": dict(self.provenance),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def _sites_from_nodes(nodes: Sequence[NodeRecord]) -> list[Site]:
    sites, seen = [], set()
    for rec in nodes:
        key = normalize_name(rec.name)
        if key in seen:
            raise DataError("duplicate node name", [rec.name])
        seen.add(key)
        geo = rec.coordinate
        sites.append(Site(" ".join(rec.name.split()), geo, to_utm(geo)))
    return sites


def _sites_from_edges(edges: Sequence[EdgeRecord], aliases: AliasMap) -> list[Site]:
    sites, seen = [], set()
    for rec in edges:
        for raw in (rec.name_a, rec.name_b):
            key = aliases.resolve(raw)
            if key not in seen:
                seen.add(key)
                sites.append(Site(aliases.display.get(key, " ".join(raw.split()))))
    return sites


def _resolve_edges(
    edges: Sequence[EdgeRecord], aliases: AliasMap, index: Mapping[str, int]
) -> list[tuple[int, int, float]]:
    resolved, unknown = [], []
    for rec in edges:
        ends = [aliases.resolve(rec.name_a), aliases.resolve(rec.name_b)]
        missing = [raw for raw, key in zip((rec.name_a, rec.name_b), ends) if key not in index]
        if missing:
            unknown.extend(missing)
            continue
        a, b = index[ends[0]], index[ends[1]]
        if a == b:
            raise DataError(f"edge row {rec.row} joins a node to itself after alias resolution",
                            [rec.name_a, rec.name_b])
        resolved.append((a, b, rec.distance_m))
    if unknown:
        raise DataError("edge endpoints not found among nodes", sorted(set(unknown)))
    return resolved


def _straight(sites: Sequence[Site], a: int, b: int) -> float:
    ua, ub = sites[a].utm, sites[b].utm
    assert ua is not None and ub is not None
    return planar_distance(ua, ub)


def propose_topology(
    nodes: Sequence[NodeRecord] | None,
    edges: Sequence[EdgeRecord] | None,
    config: PlanConfig = PlanConfig(),
    aliases: AliasMap | None = None,
) -> TopologyPlan:
    """Build the distance graph, run Prim, and cost the resulting tree.

    Without ``nodes`` the node set is taken from the edge endpoints
    (provided mode only).  Raises ``ConnectivityError`` if the distance graph
    does not connect every node.
    """
    aliases = aliases or AliasMap()
    mode = config.edge_source
    if mode in ("provided", "hybrid") and edges is None:
        raise DataError(f"edge_source={mode} needs a provided edge set")

    if nodes is not None:
        sites = _sites_from_nodes(nodes)
    elif edges:
        sites = _sites_from_edges(edges, aliases)
        if mode != "provided":
            raise DataError("no coordinates for nodes", [s.name for s in sites])
    else:
        raise DataError("no nodes given")

    if not sites:
        raise DataError("no nodes given")
    index = {normalize_name(s.name): i for i, s in enumerate(sites)}
    positions = {s.name: s.utm for s in sites if s.utm is not None}
    graph = WeightedGraph.from_edges([s.name for s in sites], [], positions)

    provided: set[tuple[int, int]] = set()
    if mode in ("provided", "hybrid"):
        for a, b, w in _resolve_edges(edges or [], aliases, index):
            graph.add_edge(a, b, w)
            provided.add((min(a, b), max(a, b)))

    fill_ins = 0
    if mode in ("straight_line", "hybrid"):
        for a, b in combinations(range(len(sites)), 2):
            if (a, b) in provided:
                continue
            length = _straight(sites, a, b)
            if length <= 0:
                raise DataError("coincident node positions", [sites[a].name, sites[b].name])
            graph.add_edge(a, b, length)
            fill_ins += 1

    start = 0
    if config.start_node is not None:
        key = aliases.resolve(config.start_node)
        if key not in index:
            raise DataError("start node not found", [config.start_node])
        start = index[key]

    tree = prim_mst(graph, start)
    per_edge = []
    for e in tree.edges:
        a, b = graph.pair_names(e)
        if mode == "straight_line" or (mode == "hybrid" and e.key not in provided):
            source = "straight_line"
        else:
            source = "provided"
        per_edge.append(PlanEdge(a, b, e.weight_m, source))

    provenance: dict[str, Any] = {"edge_source": mode}
    if graph.collapsed:
        provenance["collapsed_duplicates"] = [
            {"from": c.names[0], "to": c.names[1], "kept_m": c.kept_m, "dropped_m": c.dropped_m}
            for c in graph.collapsed
        ]
    if mode == "hybrid":
        provenance["straight_line_fill_ins_in_graph"] = fill_ins
        provenance["straight_line_edges_in_tree"] = [
            [e.name_a, e.name_b] for e in per_edge if e.source == "straight_line"
        ]

    return TopologyPlan(
        tree=tree,
        sites=tuple(sites),
        per_edge=tuple(per_edge),
        total_media_m=tree.total_weight_m,
        equipment=_equipment(per_edge, config.regenerator_span_m),
        config=config,
        provenance=provenance,
    )


def _equipment(per_edge: Sequence[PlanEdge], span_m: float) -> EquipmentEstimate:
    count = 0
    exceeding = []
    for e in per_edge:
        count += math.floor(e.length_m / span_m)
        if e.length_m > span_m:
            exceeding.append((e.name_a, e.name_b, e.length_m))
    return EquipmentEstimate(count, span_m, tuple(exceeding))


def estimate_equipment(plan: TopologyPlan, config: PlanConfig | None = None) -> EquipmentEstimate:
    """Regenerator estimate for ``plan``, optionally under a different span threshold."""
    span = (config or plan.config).regenerator_span_m
    return _equipment(plan.per_edge, span)


@dataclass(frozen=True)
class ComparisonReport:
    label_a: str
    label_b: str
    media_a_m: float
    media_b_m: float
    nodes_a: int | None = None
    edges_a: int | None = None
    nodes_b: int | None = None
    edges_b: int | None = None

    @property
    def media_delta_m(self) -> float:
        """Signed difference, a minus b."""
        return self.media_a_m - self.media_b_m

    @property
    def media_ratio(self) -> float:
        return max(self.media_a_m, self.media_b_m) / min(self.media_a_m, self.media_b_m)

    @property
    def percent_of_larger(self) -> float:
        return 100.0 * min(self.media_a_m, self.media_b_m) / max(self.media_a_m, self.media_b_m)

    def to_dict(self) -> dict[str, Any]:
        return {
            "label_a": self.label_a,
            "label_b": self.label_b,
            "nodes_a": self.nodes_a,
            "edges_a": self.edges_a,
            "nodes_b": self.nodes_b,
            "edges_b": self.edges_b,
            "media_a_m": round(self.media_a_m),
            "media_b_m": round(self.media_b_m),
            "media_delta_m": round(self.media_delta_m),
            "media_ratio": round(self.media_ratio, 2),
            "percent_of_larger": round(self.percent_of_larger, 1),
        }

    def render(self) -> str:
        d = self.to_dict()

        def count(n: int | None, e: int | None) -> str:
            return "-" if n is None else f"{n} nodes, {e} edges"

        rows = [
            ("Characteristic", self.label_a, self.label_b),
            ("Nodes & edges", count(self.nodes_a, self.edges_a), count(self.nodes_b, self.edges_b)),
            ("Length of media (m)", str(d["media_a_m"]), str(d["media_b_m"])),
        ]
        widths = [max(len(r[i]) for r in rows) for i in range(3)]
        lines = ["  ".join(cell.ljust(w) for cell, w in zip(r, widths)).rstrip() for r in rows]
        lines.insert(1, "  ".join("-" * w for w in widths))
        lines += [
            "",
            f"media delta (a - b): {d['media_delta_m']} m",
            f"media ratio (larger/smaller): {d['media_ratio']:.2f}",
            f"smaller as percent of larger: {d['percent_of_larger']:.1f}%",
        ]
        return "\n".join(lines)


MediaSide = Union[TopologyPlan, Mapping[str, Any], float, int]


def _side(x: MediaSide) -> tuple[float, int | None, int | None]:
    if isinstance(x, TopologyPlan):
        return x.total_media_m, x.node_count, x.edge_count
    if isinstance(x, Mapping):
        totals = x["totals"]
        return float(totals["media_m"]), totals.get("node_count"), totals.get("edge_count")
    return float(x), None, None


def comparison_report(
    a: MediaSide, b: MediaSide, label_a: str = "a", label_b: str = "b"
) -> ComparisonReport:
    """Compare media totals of two plans (or bare totals, or serialized plans)."""
    ma, na, ea = _side(a)
    mb, nb, eb = _side(b)
    for label, m in ((label_a, ma), (label_b, mb)):
        if not (math.isfinite(m) and m > 0):
            raise ValueError(f"media total for {label!r} must be positive, got {m}")
    return ComparisonReport(label_a, label_b, ma, mb, na, ea, nb, eb)


@dataclass(frozen=True)
class SensitivityReport:
    plan_a: TopologyPlan
    plan_b: TopologyPlan
    diff: TopologyDiff

    @property
    def changed(self) -> bool:
        return self.diff.changed

    def to_dict(self) -> dict[str, Any]:
        def edges(items: Sequence[tuple[str, str, float]]) -> list[dict[str, Any]]:
            return [{"from": a, "to": b, "length_m": w} for a, b, w in items]

        return {
            "total_a_m": self.plan_a.total_media_m,
            "total_b_m": self.plan_b.total_media_m,
            "delta_m": self.diff.weight_delta_m,
            "shared_edges": self.diff.shared,
            "only_in_a": edges(self.diff.only_in_a),
            "only_in_b": edges(self.diff.only_in_b),
            "topology_changed": self.changed,
        }

    def render(self) -> str:
        d = self.to_dict()
        lines = [
            f"total a: {d['total_a_m']:g} m",
            f"total b: {d['total_b_m']:g} m",
            f"delta (a - b): {d['delta_m']:g} m",
            f"shared edges: {d['shared_edges']}",
        ]
        lines += [f"only in a: {e['from']} -- {e['to']} ({e['length_m']:g} m)" for e in d["only_in_a"]]
        lines += [f"only in b: {e['from']} -- {e['to']} ({e['length_m']:g} m)" for e in d["only_in_b"]]
        lines.append("TOPOLOGY CHANGED" if self.changed else "TOPOLOGY UNCHANGED")
        return "\n".join(lines)


def sensitivity_compare(
    nodes: Sequence[NodeRecord] | None,
    edges_a: Sequence[EdgeRecord],
    edges_b: Sequence[EdgeRecord],
    config: PlanConfig = PlanConfig(),
    aliases: AliasMap | None = None,
) -> SensitivityReport:
    """Plan twice over the same node collection with two distance determinations.

    The node collection is the set of endpoints named by the edge sets; when
    ``nodes`` is given it is narrowed to that collection (file order kept).
    """
    aliases = aliases or AliasMap()
    set_a = {aliases.resolve(n) for e in edges_a for n in (e.name_a, e.name_b)}
    set_b = {aliases.resolve(n) for e in edges_b for n in (e.name_a, e.name_b)}
    if set_a != set_b:
        raise ValueError(
            "edge sets cover different nodes; unmatched: " + ", ".join(sorted(set_a ^ set_b))
        )
    subset = None
    if nodes is not None:
        subset = [n for n in nodes if normalize_name(n.name) in set_a]
        found = {normalize_name(n.name) for n in subset}
        if found != set_a:
            raise DataError("edge endpoints not found among nodes", sorted(set_a - found))
    plan_a = propose_topology(subset, edges_a, config, aliases)
    plan_b = propose_topology(subset, edges_b, config, aliases)
    return SensitivityReport(plan_a, plan_b, compare_topologies(plan_a.tree, plan_b.tree))


@dataclass(frozen=True)
class MediaAudit:
    """A computed media total checked against a published figure."""

    label: str
    computed_m: float
    reported_m: float

    @property
    def difference_m(self) -> float:
        return self.computed_m - self.reported_m

    @property
    def agrees(self) -> bool:
        return self.difference_m == 0

    def render(self) -> str:
        if self.agrees:
            return f"{self.label}: computed {self.computed_m:g} m matches reported {self.reported_m:g} m"
        return (
            f"{self.label}: DISCREPANCY computed {self.computed_m:g} m vs reported "
            f"{self.reported_m:g} m (difference {self.difference_m:+g} m)"
        )
