"""Width, mean width, and chord-direction coverage for convex bodies.

Everything here is derived from the support function, so it works for any
``ConvexBody``.  Exact shortcuts (polygon calipers, the polytope edge
formula, the planar perimeter identity) are used when available and
labelled as such in the result records.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..errors import ConfigurationError, DomainError
from .bodies import ConvexBody, PolygonBoundary, Polytope3
from .maps import DisplacementMap
from .sampling import fibonacci_sphere, substream, unit_directions

__all__ = [
    "GaussCoverage",
    "MeanWidthResult",
    "WidthResult",
    "chordal_gauss_coverage",
    "mean_width",
    "min_width",
    "width",
]

_DIRECTION_STREAM_TAG = 74_843_121  # fixed tag so refinement is reproducible


def width(body: ConvexBody, direction) -> float:
    """Distance between the two supporting hyperplanes orthogonal to ``direction``."""
    u = np.asarray(direction, dtype=np.float64)
    norm = float(np.linalg.norm(u))
    if norm <= 0.0 or not math.isfinite(norm):
        raise DomainError(f"direction must be a nonzero finite vector, got {direction!r}")
    u = u / norm
    return body.support(u) + body.support(-u)


@dataclass(frozen=True)
class WidthResult:
    value: float
    kind: str  # "exact" or "upper_bound"
    direction: tuple[float, ...]


def _direction_grid(body: ConvexBody, count: int) -> np.ndarray:
    dim = body.ambient_dimension
    if dim == 2:
        angles = np.linspace(0.0, 2.0 * np.pi, count, endpoint=False)
        return np.column_stack([np.cos(angles), np.sin(angles)])
    if dim == 3:
        return fibonacci_sphere(count)
    rng = substream(_DIRECTION_STREAM_TAG, "direction-grid", body.body_id)
    return unit_directions(rng, count, dim)


def min_width(body: ConvexBody, grid: int = 20_000, refinements: int = 50) -> WidthResult:
    """Smallest width over all directions.

    Convex polygons use rotating calipers and are exact; everything else
    scans a deterministic direction grid and then polishes locally with a
    shrinking jitter, which can only overshoot (an upper bound).
    """
    if isinstance(body, PolygonBoundary):
        best = math.inf
        best_dir = (1.0, 0.0)
        for v, e, length in zip(body.vertices, body._edges, body._edge_lengths):
            normal = np.array([-e[1], e[0]]) / length
            reach = float(np.max((body.vertices - v) @ normal))
            if reach < best:
                best = reach
                best_dir = tuple(normal)
        return WidthResult(best, "exact", best_dir)

    dirs = _direction_grid(body, grid)
    widths = body.support_batch(dirs) + body.support_batch(-dirs)
    i = int(np.argmin(widths))
    best, best_dir = float(widths[i]), dirs[i]

    rng = substream(_DIRECTION_STREAM_TAG, "min-width-refine", body.body_id)
    sigma = math.pi / math.sqrt(max(grid, 2))
    for _ in range(refinements):
        cloud = best_dir + sigma * rng.standard_normal((64, body.ambient_dimension))
        cloud /= np.linalg.norm(cloud, axis=1)[:, None]
        w = body.support_batch(cloud) + body.support_batch(-cloud)
        j = int(np.argmin(w))
        if w[j] < best:
            best, best_dir = float(w[j]), cloud[j]
        sigma *= 0.7
    return WidthResult(best, "upper_bound", tuple(best_dir))


@dataclass(frozen=True)
class MeanWidthResult:
    value: float
    stderr: float
    method: str
    samples: int


def mean_width(
    body: ConvexBody,
    method: str = "monte_carlo",
    samples: int = 100_000,
    seed: int = 0,
) -> MeanWidthResult:
    """Average width over uniformly random directions.

    ``monte_carlo`` works in any dimension and reports a standard error.
    ``polytope_edge_formula`` is the exact edge-length/exterior-angle sum
    for 3-polytopes.  ``crofton_curve`` is the exact planar identity
    (perimeter over pi).
    """
    if method == "monte_carlo":
        if samples < 2:
            raise ConfigurationError(f"need at least two samples, got {samples}")
        rng = substream(seed, "mean-width", body.body_id)
        dirs = unit_directions(rng, samples, body.ambient_dimension)
        widths = body.support_batch(dirs) + body.support_batch(-dirs)
        value = float(np.mean(widths))
        stderr = float(np.std(widths, ddof=1) / math.sqrt(samples))
        return MeanWidthResult(value, stderr, method, samples)
    if method == "polytope_edge_formula":
        if not isinstance(body, Polytope3):
            raise ConfigurationError("edge formula needs a 3-polytope")
        total = 0.0
        for a, b in body.edges:
            shared = [
                f for f in body.faces if a in f.indices and b in f.indices
            ]
            if len(shared) != 2:
                raise ConfigurationError(
                    f"edge ({a},{b}) is not shared by exactly two faces"
                )
            cosang = float(np.clip(shared[0].normal @ shared[1].normal, -1.0, 1.0))
            length = float(np.linalg.norm(body.vertices[a] - body.vertices[b]))
            total += length * math.acos(cosang)
        return MeanWidthResult(total / (4.0 * math.pi), 0.0, method, len(body.edges))
    if method == "crofton_curve":
        if not isinstance(body, PolygonBoundary):
            raise ConfigurationError("the perimeter identity needs a polygon")
        return MeanWidthResult(body.perimeter / math.pi, 0.0, method, 0)
    raise ConfigurationError(f"unknown mean width method {method!r}")


@dataclass(frozen=True)
class GaussCoverage:
    """How thoroughly the chord directions of a map cover the sphere."""

    max_gap: float  # largest angle from any probe direction to a chord direction
    mean_gap: float
    winding_number: int | None  # only defined for closed planar curves
    chord_samples: int
    probe_count: int


def chordal_gauss_coverage(
    body: ConvexBody,
    disp_map: DisplacementMap,
    samples: int = 2048,
    probes: int = 512,
    seed: int = 0,
) -> GaussCoverage:
    """Sample chord directions x -> map(x) and measure their angular coverage.

    For polygon boundaries the samples traverse the curve in parameter
    order, so the turning number of the chord field is also reported.
    """
    if samples < 8 or probes < 8:
        raise ConfigurationError("need at least 8 samples and 8 probes")
    winding: int | None = None
    if isinstance(body, PolygonBoundary):
        s = np.linspace(0.0, body.perimeter, samples, endpoint=False)
        points = body.point_at(s)
    else:
        points = body.sample_boundary(seed, samples)
    images = disp_map.apply(body, points)
    chords = images - points
    norms = np.linalg.norm(chords, axis=1)
    if np.any(norms <= 0.0):
        raise DomainError("chord field vanished at a sample point")
    chords = chords / norms[:, None]

    if isinstance(body, PolygonBoundary):
        angles = np.unwrap(np.arctan2(chords[:, 1], chords[:, 0]))
        closing = math.remainder(
            math.atan2(chords[0, 1], chords[0, 0]) - angles[-1], 2.0 * math.pi
        )
        winding = int(round((angles[-1] + closing - angles[0]) / (2.0 * math.pi)))

    probe_dirs = _direction_grid(body, probes)
    dots = np.clip(probe_dirs @ chords.T, -1.0, 1.0)
    gaps = np.arccos(np.max(dots, axis=1))
    return GaussCoverage(
        max_gap=float(np.max(gaps)),
        mean_gap=float(np.mean(gaps)),
        winding_number=winding,
        chord_samples=samples,
        probe_count=probes,
    )
