"""Command-line interface: ``gpstopo {convert,plan,compare,sensitivity,validate}``.

Results go to stdout, diagnostics to stderr.  Exit status is 0 on success,
1 when an error-severity diagnostic was emitted, 2 on bad usage.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path
from typing import Sequence, TextIO

from .errors import TopologyError
from .geodesy import GeoCoordinate, to_utm
from .ingest import AliasMap, load_aliases, load_edges, load_nodes, validate_dataset
from .planner import (
    DEFAULT_REGENERATOR_SPAN_M,
    PlanConfig,
    comparison_report,
    propose_topology,
    sensitivity_compare,
)
from . import export

PROG = "gpstopo"


def _err(msg: str) -> None:
    print(f"{PROG}: error: {msg}", file=sys.stderr)


def _write(path: str, text: str) -> None:
    if path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def _aliases(path: str | None) -> AliasMap:
    return load_aliases(path) if path else AliasMap()


def _config(args: argparse.Namespace) -> PlanConfig:
    return PlanConfig(
        edge_source=args.edge_source.replace("-", "_"),
        regenerator_span_m=args.regenerator_span_m,
        cost_per_meter=args.cost_per_meter,
        start_node=args.start,
    )


def cmd_convert(args: argparse.Namespace) -> int:
    src = args.nodes_csv
    load_nodes(src)  # validates schema and every DMS cell with row numbers
    with open(src, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        rows = [r for r in reader if r and any(c.strip() for c in r)]
    lat_i = [h.strip() for h in header].index("latitude")
    lon_i = [h.strip() for h in header].index("longitude")

    out: TextIO
    fh_out = None
    if args.out_csv == "-":
        out = sys.stdout
    else:
        fh_out = out = open(args.out_csv, "w", newline="", encoding="utf-8")
    try:
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(header + ["zone", "hemisphere", "utm_easting", "utm_northing"])
        for row in rows:
            utm = to_utm(GeoCoordinate.from_dms(row[lat_i], row[lon_i]))
            writer.writerow(
                row + [utm.zone, utm.hemisphere, round(utm.easting_m), round(utm.northing_m)]
            )
    finally:
        if fh_out is not None:
            fh_out.close()
    if args.out_csv != "-":
        print(f"converted {len(rows)} rows -> {args.out_csv}")
    return 0


def cmd_plan(args: argparse.Namespace) -> int:
    config = _config(args)
    aliases = _aliases(args.aliases)
    nodes = load_nodes(args.nodes_csv) if args.nodes_csv else None
    edges = load_edges(args.edges) if args.edges else None

    if nodes is not None and edges is not None and config.edge_source == "provided":
        report = validate_dataset(nodes, edges, aliases)
        if not report.ok:
            print(report.render(), file=sys.stderr)
            return 1

    plan = propose_topology(nodes, edges, config, aliases)
    if args.out:
        _write(args.out, plan.to_json())
    if args.geojson:
        _write(args.geojson, export.to_geojson(plan))
    if args.dot:
        _write(args.dot, export.to_dot(plan.tree))

    if args.json:
        sys.stdout.write(plan.to_json())
    else:
        print(f"edge source: {config.edge_source}")
        print(f"nodes: {plan.node_count}")
        print(f"edges: {plan.edge_count}")
        print(f"total media: {round(plan.total_media_m)} m")
        print(
            f"regenerators (estimate, span {config.regenerator_span_m:g} m): "
            f"{plan.equipment.regenerator_count}"
        )
        if plan.media_cost is not None:
            print(f"media cost: {plan.media_cost:.2f}")
        for item in plan.provenance.get("collapsed_duplicates", []):
            print(
                f"{PROG}: warning: duplicate edge {item['from']} -- {item['to']} "
                f"collapsed to {item['kept_m']:g} m (dropped {item['dropped_m']:g} m)",
                file=sys.stderr,
            )
    return 0


def _compare_side(plan_path: str | None, media: float | None):
    if plan_path is not None:
        with open(plan_path, encoding="utf-8") as fh:
            return json.load(fh)
    return media


def cmd_compare(args: argparse.Namespace) -> int:
    try:
        a = _compare_side(args.plan_a, args.media_a)
        b = _compare_side(args.plan_b, args.media_b)
    except (OSError, json.JSONDecodeError) as exc:
        _err(f"cannot read plan: {exc}")
        return 1
    try:
        report = comparison_report(a, b, args.label_a, args.label_b)
    except (KeyError, TypeError) as exc:
        _err(f"plan file lacks media totals: {exc}")
        return 1
    if args.json:
        print(json.dumps(report.to_dict(), indent=2, sort_keys=True))
    else:
        print(report.render())
    return 0


def cmd_sensitivity(args: argparse.Namespace) -> int:
    config = _config(args)
    aliases = _aliases(args.aliases)
    nodes = load_nodes(args.nodes_csv)
    report = sensitivity_compare(
        nodes, load_edges(args.edges_a), load_edges(args.edges_b), config, aliases
    )
    if args.json:
        print(json.dumps(report.to_dict(), indent=2, sort_keys=True, ensure_ascii=False))
    else:
        print(report.render())
    return 0


def cmd_validate(args: argparse.Namespace) -> int:
    report = validate_dataset(
        load_nodes(args.nodes_csv), load_edges(args.edges_csv), _aliases(args.aliases)
    )
    if args.json:
        print(json.dumps(report.to_dict(), indent=2, sort_keys=True, ensure_ascii=False))
    else:
        print(report.summary())
        for w in report.warnings:
            print(f"warning: {w}")
    for e in report.errors:
        print(f"{PROG}: error: {e}", file=sys.stderr)
    return 0 if report.ok else 1


def _add_plan_options(p: argparse.ArgumentParser) -> None:
    p.add_argument("--edge-source", choices=["provided", "straight-line", "hybrid"],
                   default="provided")
    p.add_argument("--start", metavar="NAME", help="start node (default: first in file)")
    p.add_argument("--regenerator-span-m", type=float, default=DEFAULT_REGENERATOR_SPAN_M,
                   metavar="M")
    p.add_argument("--cost-per-meter", type=float, default=None, metavar="COST")
    p.add_argument("--aliases", metavar="CSV")
    p.add_argument("--json", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog=PROG, description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("convert", help="append UTM zone/easting/northing to a node CSV")
    p.add_argument("nodes_csv")
    p.add_argument("out_csv", help="output CSV path, or - for stdout")
    p.set_defaults(func=cmd_convert)

    p = sub.add_parser("plan", help="propose an MST topology")
    p.add_argument("nodes_csv", nargs="?",
                   help="node CSV; optional in provided mode (nodes then come from --edges)")
    p.add_argument("--edges", metavar="CSV")
    _add_plan_options(p)
    p.add_argument("--out", metavar="PATH", help="write plan JSON here")
    p.add_argument("--geojson", metavar="PATH")
    p.add_argument("--dot", metavar="PATH")
    p.set_defaults(func=cmd_plan)

    p = sub.add_parser("compare", help="compare media totals of two plans")
    ga = p.add_mutually_exclusive_group(required=True)
    ga.add_argument("--plan-a", metavar="JSON")
    ga.add_argument("--media-a", type=float, metavar="M")
    gb = p.add_mutually_exclusive_group(required=True)
    gb.add_argument("--plan-b", metavar="JSON")
    gb.add_argument("--media-b", type=float, metavar="M")
    p.add_argument("--label-a", default="a")
    p.add_argument("--label-b", default="b")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("sensitivity", help="plan with two distance determinations and diff")
    p.add_argument("nodes_csv")
    p.add_argument("edges_a")
    p.add_argument("edges_b")
    _add_plan_options(p)
    p.set_defaults(func=cmd_sensitivity)

    p = sub.add_parser("validate", help="check a node/edge dataset")
    p.add_argument("nodes_csv")
    p.add_argument("edges_csv")
    p.add_argument("--aliases", metavar="CSV")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_validate)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (TopologyError, ValueError, OSError) as exc:
        _err(str(exc))
        return 1


if __name__ == "__main__":
    sys.exit(main())
