"""Geographic primitives: bounding-box viewports and great-circle distance."""

from __future__ import annotations

import math
from dataclasses import dataclass

from semaps.errors import ValidationError

EARTH_RADIUS_KM = 6371.0

WHOLE_WORLD = None  # set below once the class exists


@dataclass(frozen=True)
class Viewport:
    """Axis-aligned geographic bounding box; bounds are inclusive.

    Boxes never wrap the antimeridian: west <= east is required.
    """

    west: float
    south: float
    east: float
    north: float

    def __post_init__(self):
        for name in ("west", "east"):
            v = getattr(self, name)
            if not -180.0 <= v <= 180.0:
                raise ValidationError(f"{name} out of range [-180, 180]: {v}", field=name)
        for name in ("south", "north"):
            v = getattr(self, name)
            if not -90.0 <= v <= 90.0:
                raise ValidationError(f"{name} out of range [-90, 90]: {v}", field=name)
        if self.west > self.east:
            raise ValidationError(
                "west > east (antimeridian-wrapping viewports are not supported)",
                field="west",
            )
        if self.south > self.north:
            raise ValidationError("south > north", field="south")

    def contains(self, lat: float, lon: float) -> bool:
        return self.south <= lat <= self.north and self.west <= lon <= self.east

    def center(self) -> tuple[float, float]:
        """(lat, lon) of the box center."""
        return ((self.south + self.north) / 2.0, (self.west + self.east) / 2.0)

    @classmethod
    def parse_bbox(cls, text: str) -> "Viewport":
        """Parse the wire format 'west,south,east,north' (decimal degrees)."""
        parts = text.split(",")
        if len(parts) != 4:
            raise ValidationError(
                f"bbox must be 'west,south,east,north', got {text!r}", field="bbox"
            )
        try:
            west, south, east, north = (float(p) for p in parts)
        except ValueError:
            raise ValidationError(f"bbox has a non-numeric component: {text!r}", field="bbox")
        return cls(west, south, east, north)


WHOLE_WORLD = Viewport(-180.0, -90.0, 180.0, 90.0)


def great_circle_km(lat1: float, lon1: float, lat2: float, lon2: float) -> float:
    """Spherical law of cosines on a 6371.0 km sphere."""
    phi1, phi2 = math.radians(lat1), math.radians(lat2)
    dlambda = math.radians(lon2 - lon1)
    cos_angle = (
        math.sin(phi1) * math.sin(phi2)
        + math.cos(phi1) * math.cos(phi2) * math.cos(dlambda)
    )
    # rounding can push the cosine a hair outside [-1, 1]
    cos_angle = max(-1.0, min(1.0, cos_angle))
    return EARTH_RADIUS_KM * math.acos(cos_angle)
