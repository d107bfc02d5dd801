"""CSV loading, name reconciliation and dataset validation.

Three UTF-8 CSV layouts are understood::

    nodes    name,latitude,longitude[,northing,easting]
    edges    from,to,distance_m
    aliases  variant,canonical

Row numbers in errors count data rows from 1 (the header is row 0).
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Iterable, Iterator, Sequence

from .errors import RecordError, SchemaError
from .geodesy import GeoCoordinate, UtmCoordinate, parse_latitude, parse_longitude

NODE_COLUMNS = ("name", "latitude", "longitude")
NODE_OPTIONAL = ("northing", "easting")
EDGE_COLUMNS = ("from", "to", "distance_m")
ALIAS_COLUMNS = ("variant", "canonical")

FIXTURES = (
    "academicnet_nodes.csv",
    "academicnet_edges.csv",
    "table5_first.csv",
    "table5_second.csv",
    "aliases.csv",
)


def fixture_path(name: str) -> Path:
    """Path of a dataset bundled with the package."""
    if name not in FIXTURES:
        raise ValueError(f"unknown fixture {name!r}; choose from {', '.join(FIXTURES)}")
    return Path(str(resources.files("gpstopo") / "data" / name))


def normalize_name(raw: str) -> str:
    return " ".join(raw.split()).casefold()


@dataclass(frozen=True)
class NodeRecord:
    name: str
    latitude_dms: str
    longitude_dms: str
    northing_m: int | None = None
    easting_m: int | None = None
    row: int = 0

    @property
    def coordinate(self) -> GeoCoordinate:
        return GeoCoordinate.from_dms(self.latitude_dms, self.longitude_dms)


@dataclass(frozen=True)
class EdgeRecord:
    name_a: str
    name_b: str
    distance_m: int | float
    row: int = 0


@dataclass
class AliasMap:
    """Variant spelling -> canonical name, both stored normalized."""

    entries: dict[str, str] = field(default_factory=dict)
    display: dict[str, str] = field(default_factory=dict)

    def add(self, variant: str, canonical: str) -> None:
        key, value = normalize_name(variant), normalize_name(canonical)
        previous = self.entries.get(key)
        if previous is not None and previous != value:
            raise ValueError(f"alias {variant!r} maps to both {previous!r} and {value!r}")
        # no chains: a canonical name may not itself be a variant of something else
        if self.entries.get(value, value) != value:
            raise ValueError(f"canonical {canonical!r} is itself an alias of {self.entries[value]!r}")
        if key != value and key in self.entries.values():
            raise ValueError(f"variant {variant!r} is already used as a canonical name")
        self.entries[key] = value
        self.display.setdefault(value, " ".join(canonical.split()))

    def resolve(self, raw: str) -> str:
        name = normalize_name(raw)
        return self.entries.get(name, name)

    def check_against(self, node_names: Iterable[str]) -> list[str]:
        """Canonical targets that are not among ``node_names`` (normalized)."""
        known = {normalize_name(n) for n in node_names}
        return sorted(set(self.entries.values()) - known)


def _read(path: str | Path, required: Sequence[str], optional: Sequence[str] = ()) -> Iterator[tuple[int, dict[str, str]]]:
    path = str(path)
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = [h.strip() for h in next(reader)]
        except StopIteration:
            raise SchemaError(path, "file is empty (no header)") from None
        missing = [c for c in required if c not in header]
        extra = [c for c in header if c not in required and c not in optional]
        if missing or extra:
            parts = []
            if missing:
                parts.append(f"missing columns {missing}")
            if extra:
                parts.append(f"unexpected columns {extra}")
            raise SchemaError(path, "; ".join(parts), row=0)
        for row_no, values in enumerate(reader, start=1):
            if not values or all(not v.strip() for v in values):
                continue
            if len(values) != len(header):
                raise SchemaError(
                    path, f"expected {len(header)} fields, found {len(values)}", row=row_no
                )
            yield row_no, dict(zip(header, (v.strip() for v in values)))


def _int_cell(path: str, row: int, column: str, text: str) -> int | None:
    if text == "":
        return None
    try:
        value = float(text)
    except ValueError:
        raise RecordError(path, row, column, f"not a number: {text!r}") from None
    if value != int(value):
        raise RecordError(path, row, column, f"expected whole meters, got {text!r}")
    return int(value)


def load_nodes(path: str | Path) -> list[NodeRecord]:
    path = str(path)
    records = []
    for row, cells in _read(path, NODE_COLUMNS, NODE_OPTIONAL):
        if not cells["name"]:
            raise RecordError(path, row, "name", "empty name")
        lat, lon = cells["latitude"], cells["longitude"]
        for column, parse, text in (
            ("latitude", parse_latitude, lat),
            ("longitude", parse_longitude, lon),
        ):
            try:
                parse(text)
            except ValueError as exc:
                raise RecordError(path, row, column, str(exc)) from None
        northing = _int_cell(path, row, "northing", cells.get("northing", ""))
        easting = _int_cell(path, row, "easting", cells.get("easting", ""))
        if (northing is None) != (easting is None):
            raise RecordError(path, row, "northing" if northing is None else "easting",
                              "northing and easting must be given together")
        if northing is not None:
            try:
                UtmCoordinate(1, "N", easting, northing)
            except ValueError as exc:
                raise RecordError(path, row, "easting/northing", str(exc)) from None
        records.append(NodeRecord(cells["name"], lat, lon, northing, easting, row))
    return records


def load_edges(path: str | Path) -> list[EdgeRecord]:
    path = str(path)
    records = []
    for row, cells in _read(path, EDGE_COLUMNS):
        a, b, text = cells["from"], cells["to"], cells["distance_m"]
        for column in ("from", "to"):
            if not cells[column]:
                raise RecordError(path, row, column, "empty node name")
        try:
            value = float(text)
        except ValueError:
            raise RecordError(path, row, "distance_m", f"not a number: {text!r}") from None
        if not value > 0 or value == float("inf"):
            raise RecordError(path, row, "distance_m", f"distance must be positive, got {text!r}")
        distance = int(value) if value.is_integer() else value
        if normalize_name(a) == normalize_name(b):
            raise RecordError(path, row, "to", f"edge joins {a!r} to itself")
        records.append(EdgeRecord(a, b, distance, row))
    return records


def load_aliases(path: str | Path) -> AliasMap:
    path = str(path)
    aliases = AliasMap()
    for row, cells in _read(path, ALIAS_COLUMNS):
        try:
            aliases.add(cells["variant"], cells["canonical"])
        except ValueError as exc:
            raise RecordError(path, row, "canonical", str(exc)) from None
    return aliases


@dataclass
class ValidationReport:
    node_count: int
    edge_count: int
    unresolved: list[tuple[int, str]] = field(default_factory=list)
    duplicate_nodes: list[str] = field(default_factory=list)
    duplicate_edges: list[tuple[str, str, list[float]]] = field(default_factory=list)
    isolated: list[str] = field(default_factory=list)
    components: list[list[str]] = field(default_factory=list)
    bad_aliases: list[str] = field(default_factory=list)
    self_loops: list[tuple[int, str]] = field(default_factory=list)

    @property
    def connected(self) -> bool:
        return len(self.components) <= 1

    @property
    def distinct_edge_count(self) -> int:
        return self.edge_count - sum(len(w) - 1 for _, _, w in self.duplicate_edges)

    @property
    def errors(self) -> list[str]:
        out = [f"edge row {row}: unknown node {name!r}" for row, name in self.unresolved]
        out += [f"duplicate node name {name!r}" for name in self.duplicate_nodes]
        out += [f"alias target {name!r} is not a node" for name in self.bad_aliases]
        out += [f"edge row {row}: joins {name!r} to itself after alias resolution"
                for row, name in self.self_loops]
        if not self.connected:
            out.append(
                f"disconnected: {len(self.components)} components: "
                + "; ".join("[" + ", ".join(c) + "]" for c in self.components)
            )
        return out

    @property
    def warnings(self) -> list[str]:
        out = [
            f"duplicate edge {a} -- {b}: weights {', '.join(f'{w:g}' for w in ws)} (minimum kept)"
            for a, b, ws in self.duplicate_edges
        ]
        out += [f"isolated node {name!r}" for name in self.isolated]
        return out

    @property
    def ok(self) -> bool:
        return not self.errors

    def summary(self) -> str:
        verdict = "connected" if self.connected else "disconnected"
        return f"{self.node_count} nodes, {self.edge_count} edges, {verdict}"

    def render(self) -> str:
        lines = [self.summary()]
        lines += [f"error: {m}" for m in self.errors]
        lines += [f"warning: {m}" for m in self.warnings]
        return "\n".join(lines)

    def to_dict(self) -> dict:
        return {
            "node_count": self.node_count,
            "edge_count": self.edge_count,
            "distinct_edge_count": self.distinct_edge_count,
            "connected": self.connected,
            "components": self.components,
            "unresolved": [{"row": r, "name": n} for r, n in self.unresolved],
            "duplicate_nodes": self.duplicate_nodes,
            "duplicate_edges": [{"from": a, "to": b, "weights": w} for a, b, w in self.duplicate_edges],
            "isolated": self.isolated,
            "bad_aliases": self.bad_aliases,
            "self_loops": [{"row": r, "name": n} for r, n in self.self_loops],
            "errors": self.errors,
            "warnings": self.warnings,
        }


def validate_dataset(
    nodes: Sequence[NodeRecord],
    edges: Sequence[EdgeRecord],
    aliases: AliasMap | None = None,
) -> ValidationReport:
    aliases = aliases or AliasMap()
    display: dict[str, str] = {}
    duplicates = []
    for rec in nodes:
        key = normalize_name(rec.name)
        if key in display:
            duplicates.append(rec.name)
        else:
            display[key] = rec.name

    unresolved = []
    self_loops = []
    pairs: dict[frozenset[str], tuple[str, str, list[float]]] = {}
    for rec in edges:
        ends = []
        for raw in (rec.name_a, rec.name_b):
            canonical = aliases.resolve(raw)
            if canonical not in display:
                unresolved.append((rec.row, raw))
            ends.append(canonical)
        if all(e in display for e in ends):
            a, b = ends
            if a == b:
                self_loops.append((rec.row, display[a]))
                continue
            key = frozenset(ends)
            entry = pairs.setdefault(key, (display[a], display[b], []))
            entry[2].append(rec.distance_m)

    # union-find over resolvable edges
    parent = {k: k for k in display}

    def find(x: str) -> str:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    touched = set()
    for key in pairs:
        a, b = tuple(key)
        touched.update(key)
        parent[find(a)] = find(b)
    groups: dict[str, list[str]] = {}
    for k in display:
        groups.setdefault(find(k), []).append(display[k])
    order = list(display)
    components = sorted(groups.values(), key=lambda g: order.index(normalize_name(g[0])))

    return ValidationReport(
        node_count=len(display),
        edge_count=len(edges),
        unresolved=unresolved,
        duplicate_nodes=duplicates,
        duplicate_edges=[v for v in pairs.values() if len(v[2]) > 1],
        isolated=[display[k] for k in display if k not in touched],
        components=components if len(components) > 1 else [],
        bad_aliases=aliases.check_against(display) if aliases.entries else [],
        self_loops=self_loops,
    )
