"""GeoJSON and Graphviz DOT writers for proposed topologies."""

from __future__ import annotations

import json
from typing import Any, Mapping, Sequence

from .errors import DataError
from .geodesy import GeoCoordinate
from .graph_mst import SpanningTree
from .planner import TopologyPlan


def to_geojson(plan: TopologyPlan, coordinates: Mapping[str, GeoCoordinate] | None = None) -> str:
    """FeatureCollection of one Point per node and one LineString per tree edge.

    Positions are the original geographic inputs, ``[longitude, latitude]``.
    ``coordinates`` overrides or supplies positions by node name.
    """
    coords: dict[str, GeoCoordinate] = {s.name: s.geo for s in plan.sites if s.geo is not None}
    if coordinates:
        coords.update(coordinates)
    missing = [s.name for s in plan.sites if s.name not in coords]
    if missing:
        raise DataError("no geographic coordinates for nodes", missing)

    def position(name: str) -> list[float]:
        c = coords[name]
        return [c.longitude_deg, c.latitude_deg]

    features: list[dict[str, Any]] = []
    for site in plan.sites:
        props: dict[str, Any] = {"name": site.name}
        if site.utm is not None:
            props["easting"] = site.utm.easting_m
            props["northing"] = site.utm.northing_m
        features.append(
            {
                "type": "Feature",
                "geometry": {"type": "Point", "coordinates": position(site.name)},
                "properties": props,
            }
        )
    for edge in plan.per_edge:
        features.append(
            {
                "type": "Feature",
                "geometry": {
                    "type": "LineString",
                    "coordinates": [position(edge.name_a), position(edge.name_b)],
                },
                "properties": {
                    "from": edge.name_a,
                    "to": edge.name_b,
                    "length_m": edge.length_m,
                    "source": edge.source,
                },
            }
        )
    doc = {"type": "FeatureCollection", "features": features}
    return json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def _quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def _meters(value: float) -> str:
    return str(int(value)) if float(value).is_integer() else repr(float(value))


def to_dot(tree: SpanningTree, names: Sequence[str] | None = None) -> str:
    names = list(names) if names is not None else list(tree.node_names)
    if not names:
        names = [str(tree.root)]
    lines = ["graph topology {"]
    for i, name in enumerate(names):
        lines.append(f"  n{i} [label={_quote(name)}];")
    for e in sorted(tree.edges, key=lambda e: e.key):
        lines.append(f"  n{e.a} -- n{e.b} [label={_quote(_meters(e.weight_m))}];")
    lines.append("}")
    return "\n".join(lines) + "\n"
