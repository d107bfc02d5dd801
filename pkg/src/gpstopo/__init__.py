"""Network topology planning from GPS coordinates and surveyed distances."""

from .errors import (
    ConnectivityError,
    DataError,
    DmsParseError,
    DmsRangeError,
    EmptyGraphError,
    ProjectionDomainError,
    RecordError,
    SchemaError,
    TopologyError,
    ZoneError,
)
from .geodesy import (
    WGS84,
    DmsAngle,
    EllipsoidParams,
    GeoCoordinate,
    UtmCoordinate,
    format_dms,
    parse_dms,
    planar_distance,
    to_utm,
    utm_zone_for,
)
from .graph_mst import (
    Edge,
    Node,
    SpanningTree,
    TopologyDiff,
    WeightedGraph,
    compare_topologies,
    kruskal_mst,
    prim_mst,
    total_length,
)
from .ingest import (
    AliasMap,
    EdgeRecord,
    NodeRecord,
    ValidationReport,
    fixture_path,
    load_aliases,
    load_edges,
    load_nodes,
    normalize_name,
    validate_dataset,
)
from .planner import (
    ComparisonReport,
    EquipmentEstimate,
    MediaAudit,
    PlanConfig,
    SensitivityReport,
    TopologyPlan,
    comparison_report,
    estimate_equipment,
    propose_topology,
    sensitivity_compare,
)
from .export import to_dot, to_geojson

__version__ = "0.1.0"
