"""Plain-text save/load for the concrete body types.

The format is line oriented: a header line, then ``key value`` pairs and
``vertex x y [z]`` rows.  Floats are written with 17 significant digits so
a save/load round trip reproduces the body bit for bit.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from ..errors import ConfigurationError
from .bodies import ConvexBody, CylinderBody, PolygonBoundary, Polytope3, SphereBody

__all__ = ["load_body", "save_body"]

_HEADER = "dispbound-body v1"


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def save_body(body: ConvexBody, path) -> None:
    lines = [_HEADER]
    if isinstance(body, SphereBody):
        lines.append("type sphere")
        lines.append(f"id {body.body_id}")
        lines.append(f"radius {_fmt(body.radius)}")
        lines.append("center " + " ".join(_fmt(c) for c in body.center))
    elif isinstance(body, CylinderBody):
        lines.append("type cylinder")
        lines.append(f"id {body.body_id}")
        lines.append(f"surface_dimension {body.n}")
        lines.append(f"radius {_fmt(body.base_radius)}")
        lines.append(f"height {_fmt(body.height)}")
    elif isinstance(body, PolygonBoundary):
        lines.append("type polygon")
        lines.append(f"id {body.body_id}")
        for v in body.vertices:
            lines.append("vertex " + " ".join(_fmt(c) for c in v))
    elif isinstance(body, Polytope3):
        lines.append("type polytope3")
        lines.append(f"id {body.body_id}")
        lines.append(f"geodesic_subdivision {body.geodesic_subdivision}")
        for v in body.vertices:
            lines.append("vertex " + " ".join(_fmt(c) for c in v))
    else:
        raise ConfigurationError(f"cannot serialize body type {type(body).__name__}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def load_body(path) -> ConvexBody:
    text = Path(path).read_text(encoding="utf-8")
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0] != _HEADER:
        raise ConfigurationError(f"not a body file (missing {_HEADER!r} header)")
    fields: dict[str, str] = {}
    vertices: list[list[float]] = []
    for ln in lines[1:]:
        key, _, rest = ln.partition(" ")
        if key == "vertex":
            vertices.append([float(tok) for tok in rest.split()])
        else:
            fields[key] = rest
    kind = fields.get("type")
    body_id = fields.get("id")
    if kind == "sphere":
        return SphereBody(
            radius=float(fields["radius"]),
            center=[float(tok) for tok in fields["center"].split()],
            body_id=body_id,
        )
    if kind == "cylinder":
        return CylinderBody(
            surface_dimension=int(fields["surface_dimension"]),
            base_radius=float(fields["radius"]),
            height=float(fields["height"]),
            body_id=body_id,
        )
    if kind == "polygon":
        return PolygonBoundary(np.array(vertices), body_id=body_id)
    if kind == "polytope3":
        return Polytope3(
            np.array(vertices),
            body_id=body_id,
            geodesic_subdivision=int(fields.get("geodesic_subdivision", 8)),
        )
    raise ConfigurationError(f"unknown body type {kind!r}")
