"""Exception types raised across the package."""

from __future__ import annotations

from typing import Sequence


class TopologyError(Exception):
    """Base class for all gpstopo errors."""


class DmsParseError(TopologyError, ValueError):
    def __init__(self, text: str, component: str, reason: str = "malformed") -> None:
        self.text = text
        self.component = component
        super().__init__(f"{reason} {component} in DMS text {text!r}")


class DmsRangeError(TopologyError, ValueError):
    def __init__(self, text: str, component: str, value: float) -> None:
        self.text = text
        self.component = component
        self.value = value
        super().__init__(f"{component} out of range ({value}) in DMS text {text!r}")


class ProjectionDomainError(TopologyError, ValueError):
    """Latitude outside the band where Transverse Mercator is used."""


class ZoneError(TopologyError, ValueError):
    """Zone mismatch or a forced zone too far from the natural one."""


class EmptyGraphError(TopologyError, ValueError):
    pass


class ConnectivityError(TopologyError):
    """The graph has more than one connected component."""

    def __init__(self, components: Sequence[Sequence[str]]) -> None:
        self.components = [list(c) for c in components]
        listing = "; ".join(
            f"[{i + 1}] " + ", ".join(c) for i, c in enumerate(self.components)
        )
        super().__init__(
            f"graph is disconnected ({len(self.components)} components): {listing}"
        )


class SchemaError(TopologyError, ValueError):
    def __init__(self, path: str, message: str, row: int | None = None) -> None:
        self.path = path
        self.row = row
        where = f"{path}" if row is None else f"{path}, row {row}"
        super().__init__(f"{where}: {message}")


class RecordError(TopologyError, ValueError):
    """A single CSV cell failed validation."""

    def __init__(self, path: str, row: int, column: str, message: str) -> None:
        self.path = path
        self.row = row
        self.column = column
        super().__init__(f"{path}, row {row}, column {column!r}: {message}")


class DataError(TopologyError, ValueError):
    """Input data is missing something an operation needs (e.g. coordinates)."""

    def __init__(self, message: str, names: Sequence[str] = ()) -> None:
        self.names = list(names)
        if self.names:
            message = f"{message}: {', '.join(self.names)}"
        super().__init__(message)
