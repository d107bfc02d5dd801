"""GPS coordinate parsing and WGS84 -> UTM projection.

DMS text looks like ``N36:11:38.90`` (hemisphere letter, then degrees,
minutes and seconds separated by colons).  The forward projection uses the
Krueger n-series for the Transverse Mercator, carried to sixth order in the
third flattening, which is accurate to well under a millimetre inside a UTM
zone.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from decimal import Decimal, InvalidOperation

from .errors import DmsParseError, DmsRangeError, ProjectionDomainError, ZoneError

K0 = 0.9996
FALSE_EASTING = 500000.0
FALSE_NORTHING_SOUTH = 10000000.0
MAX_ABS_LATITUDE = 84.0

_LIMITS = {"N": 90, "S": 90, "E": 180, "W": 180}
_INT_RE = re.compile(r"\d+")
_SEC_RE = re.compile(r"\d+(\.\d+)?")


@dataclass(frozen=True)
class DmsAngle:
    hemisphere: str
    degrees: int
    minutes: int
    seconds: Decimal

    def __post_init__(self) -> None:
        text = self.to_text()
        if self.hemisphere not in _LIMITS:
            raise DmsParseError(text, "hemisphere")
        if not 0 <= self.minutes < 60:
            raise DmsRangeError(text, "minutes", self.minutes)
        if not 0 <= self.seconds < 60:
            raise DmsRangeError(text, "seconds", float(self.seconds))
        if not 0 <= self.degrees <= _LIMITS[self.hemisphere]:
            raise DmsRangeError(text, "degrees", self.degrees)
        if self.degrees == _LIMITS[self.hemisphere] and (self.minutes or self.seconds):
            raise DmsRangeError(text, "degrees", float(self.unsigned_degrees()))

    @classmethod
    def parse(cls, text: str) -> "DmsAngle":
        raw = text
        text = text.strip()
        if not text or text[0].upper() not in _LIMITS:
            raise DmsParseError(raw, "hemisphere")
        hemisphere = text[0].upper()
        parts = text[1:].split(":")
        if len(parts) != 3:
            raise DmsParseError(raw, "layout", "expected <H><deg>:<min>:<sec>, got malformed")
        deg_s, min_s, sec_s = (p.strip() for p in parts)
        if not _INT_RE.fullmatch(deg_s):
            raise DmsParseError(raw, "degrees")
        if not _INT_RE.fullmatch(min_s):
            raise DmsParseError(raw, "minutes")
        if not _SEC_RE.fullmatch(sec_s):
            raise DmsParseError(raw, "seconds")
        try:
            seconds = Decimal(sec_s)
        except InvalidOperation:  # pragma: no cover - regex already guards this
            raise DmsParseError(raw, "seconds") from None
        return cls(hemisphere, int(deg_s), int(min_s), seconds)

    def unsigned_degrees(self) -> float:
        return self.degrees + self.minutes / 60 + float(self.seconds) / 3600

    def to_degrees(self) -> float:
        value = self.unsigned_degrees()
        return -value if self.hemisphere in "SW" else value

    def to_text(self) -> str:
        sec = self.seconds
        if sec.as_tuple().exponent > -2:  # type: ignore[operator]
            sec = sec.quantize(Decimal("0.01"))
        whole, _, frac = f"{sec:f}".partition(".")
        return f"{self.hemisphere}{self.degrees:02d}:{self.minutes:02d}:{int(whole):02d}.{frac}"


def parse_dms(text: str) -> float:
    """Signed decimal degrees from DMS text; south and west are negative."""
    return DmsAngle.parse(text).to_degrees()


def parse_latitude(text: str) -> float:
    angle = DmsAngle.parse(text)
    if angle.hemisphere not in "NS":
        raise DmsParseError(text, "hemisphere", "latitude needs N or S, got malformed")
    return angle.to_degrees()


def parse_longitude(text: str) -> float:
    angle = DmsAngle.parse(text)
    if angle.hemisphere not in "EW":
        raise DmsParseError(text, "hemisphere", "longitude needs E or W, got malformed")
    value = angle.to_degrees()
    if value == -180:
        raise DmsRangeError(text, "degrees", value)
    return value


def format_dms(value: float, axis: str) -> str:
    """Format signed degrees as DMS text, seconds rounded to hundredths.

    ``axis`` is ``"lat"`` or ``"lon"``.
    """
    if axis == "lat":
        hemi = "S" if value < 0 else "N"
    elif axis == "lon":
        hemi = "W" if value < 0 else "E"
    else:
        raise ValueError(f"axis must be 'lat' or 'lon', not {axis!r}")
    hundredths = round(abs(value) * 360000)
    degrees, rem = divmod(hundredths, 360000)
    minutes, rem = divmod(rem, 6000)
    seconds = Decimal(rem).scaleb(-2)
    return DmsAngle(hemi, degrees, minutes, seconds).to_text()


@dataclass(frozen=True)
class GeoCoordinate:
    latitude_deg: float
    longitude_deg: float

    def __post_init__(self) -> None:
        if not -90 <= self.latitude_deg <= 90:
            raise ValueError(f"latitude {self.latitude_deg} outside [-90, 90]")
        if not -180 < self.longitude_deg <= 180:
            raise ValueError(f"longitude {self.longitude_deg} outside (-180, 180]")

    @classmethod
    def from_dms(cls, latitude: str, longitude: str) -> "GeoCoordinate":
        return cls(parse_latitude(latitude), parse_longitude(longitude))


@dataclass(frozen=True)
class UtmCoordinate:
    zone: int
    hemisphere: str
    easting_m: float
    northing_m: float

    def __post_init__(self) -> None:
        if not 1 <= self.zone <= 60:
            raise ZoneError(f"zone {self.zone} outside 1..60")
        if self.hemisphere not in ("N", "S"):
            raise ValueError(f"hemisphere must be N or S, not {self.hemisphere!r}")
        if not 100000 <= self.easting_m <= 900000:
            raise ValueError(f"easting {self.easting_m} outside sanity band 100000..900000")
        if not 0 <= self.northing_m <= 10000000:
            raise ValueError(f"northing {self.northing_m} outside 0..10000000")


@dataclass(frozen=True)
class EllipsoidParams:
    semi_major_axis_m: float = 6378137.0
    inverse_flattening: float = 298.257223563

    def __post_init__(self) -> None:
        if self.semi_major_axis_m <= 0 or self.inverse_flattening <= 0:
            raise ValueError("ellipsoid axis and inverse flattening must be positive")

    @property
    def flattening(self) -> float:
        return 1.0 / self.inverse_flattening


WGS84 = EllipsoidParams()


def utm_zone_for(longitude_deg: float) -> int:
    zone = math.floor((longitude_deg + 180) / 6) + 1
    return min(max(zone, 1), 60)


def central_meridian(zone: int) -> float:
    return zone * 6 - 183.0


def _zone_distance(a: int, b: int) -> int:
    d = abs(a - b) % 60
    return min(d, 60 - d)


def _series(ellipsoid: EllipsoidParams) -> tuple[float, float, tuple[float, ...]]:
    f = ellipsoid.flattening
    n = f / (2 - f)
    n2, n3, n4, n5, n6 = n**2, n**3, n**4, n**5, n**6
    rectifying = ellipsoid.semi_major_axis_m / (1 + n) * (1 + n2 / 4 + n4 / 64 + n6 / 256)
    alpha = (
        n / 2 - 2 * n2 / 3 + 5 * n3 / 16 + 41 * n4 / 180 - 127 * n5 / 288 + 7891 * n6 / 37800,
        13 * n2 / 48 - 3 * n3 / 5 + 557 * n4 / 1440 + 281 * n5 / 630 - 1983433 * n6 / 1935360,
        61 * n3 / 240 - 103 * n4 / 140 + 15061 * n5 / 26880 + 167603 * n6 / 181440,
        49561 * n4 / 161280 - 179 * n5 / 168 + 6601661 * n6 / 7257600,
        34729 * n5 / 80640 - 3418889 * n6 / 1995840,
        212378941 * n6 / 319334400,
    )
    ecc = math.sqrt(f * (2 - f))
    return rectifying, ecc, alpha


def to_utm(
    coord: GeoCoordinate,
    ellipsoid: EllipsoidParams = WGS84,
    forced_zone: int | None = None,
) -> UtmCoordinate:
    """Project a geographic coordinate onto its UTM grid.

    ``forced_zone`` may name a neighbouring zone (one step either side of the
    natural zone, wrapping at the antimeridian).
    """
    lat, lon = coord.latitude_deg, coord.longitude_deg
    if abs(lat) > MAX_ABS_LATITUDE:
        raise ProjectionDomainError(
            f"latitude {lat} outside the UTM band |lat| <= {MAX_ABS_LATITUDE}"
        )
    natural = utm_zone_for(lon)
    zone = natural
    if forced_zone is not None:
        if not 1 <= forced_zone <= 60 or _zone_distance(forced_zone, natural) > 1:
            raise ZoneError(
                f"forced zone {forced_zone} is more than one zone from natural zone {natural}"
            )
        zone = forced_zone

    dlon = lon - central_meridian(zone)
    dlon = (dlon + 180) % 360 - 180
    phi = math.radians(lat)
    lam = math.radians(dlon)

    rectifying, ecc, alpha = _series(ellipsoid)
    sin_phi = math.sin(phi)
    t = math.sinh(math.atanh(sin_phi) - ecc * math.atanh(ecc * sin_phi))
    xi_p = math.atan2(t, math.cos(lam))
    eta_p = math.atanh(math.sin(lam) / math.sqrt(1 + t * t))

    xi, eta = xi_p, eta_p
    for j, a in enumerate(alpha, start=1):
        xi += a * math.sin(2 * j * xi_p) * math.cosh(2 * j * eta_p)
        eta += a * math.cos(2 * j * xi_p) * math.sinh(2 * j * eta_p)

    easting = FALSE_EASTING + K0 * rectifying * eta
    northing = K0 * rectifying * xi
    hemisphere = "S" if lat < 0 else "N"
    if hemisphere == "S":
        northing += FALSE_NORTHING_SOUTH
    return UtmCoordinate(zone, hemisphere, easting, northing)


def planar_distance(a: UtmCoordinate, b: UtmCoordinate) -> float:
    """Straight-line grid distance in metres between two points of one zone."""
    if a.zone != b.zone or a.hemisphere != b.hemisphere:
        raise ZoneError(
            f"cannot measure across zones: {a.zone}{a.hemisphere} vs {b.zone}{b.hemisphere}"
        )
    return math.hypot(a.easting_m - b.easting_m, a.northing_m - b.northing_m)
