"""Concrete convex bodies: spheres, cylinders, convex polygons, 3-polytopes.

Every body exposes a positively homogeneous support function, exact
boundary area and enclosed volume, intrinsic boundary distances (exact
where the geometry allows, otherwise explicit upper bounds), and
seeded boundary sampling.
"""

from __future__ import annotations

import abc
import math
from dataclasses import dataclass

import numpy as np
from scipy.spatial import ConvexHull, QhullError

from ..errors import ConfigurationError, DomainError
from ..numerics import log_unit_ball_volume, log_unit_sphere_area
from .sampling import substream, unit_directions

__all__ = [
    "ConvexBody",
    "CylinderBody",
    "Face",
    "PolygonBoundary",
    "Polytope3",
    "SphereBody",
    "cube",
    "equilateral_triangle",
    "random_polytope",
    "regular_polygon",
]

EXACT = "exact"
UPPER_BOUND = "upper_bound"


def _as_point(p, dim: int) -> np.ndarray:
    q = np.asarray(p, dtype=np.float64)
    if q.shape != (dim,):
        raise DomainError(f"expected a point of dimension {dim}, got shape {q.shape}")
    if not np.all(np.isfinite(q)):
        raise DomainError(f"point has non-finite coordinates: {q!r}")
    return q


def _wrap_angle(delta: float | np.ndarray):
    """Fold an angle difference into [0, pi]."""
    return np.abs((np.asarray(delta) + np.pi) % (2.0 * np.pi) - np.pi)


class ConvexBody(abc.ABC):
    """A compact convex body, described through its boundary hypersurface."""

    ambient_dimension: int
    body_id: str

    @property
    def surface_dimension(self) -> int:
        return self.ambient_dimension - 1

    @abc.abstractmethod
    def support(self, direction) -> float:
        """Support function h(u) = max over the body of <x, u> (homogeneous)."""

    @abc.abstractmethod
    def support_batch(self, directions: np.ndarray) -> np.ndarray:
        """Vectorized support over rows of ``directions``."""

    @abc.abstractmethod
    def boundary_area(self) -> float:
        """n-dimensional measure of the boundary."""

    @abc.abstractmethod
    def enclosed_volume(self) -> float:
        """(n+1)-dimensional measure of the enclosed region."""

    @abc.abstractmethod
    def intrinsic_distance(self, x, y) -> tuple[float, str]:
        """Length of a shortest boundary path, with an exact/upper-bound tag."""

    @abc.abstractmethod
    def sample_boundary(self, seed: int, count: int) -> np.ndarray:
        """Uniform-by-area boundary samples from a named substream of ``seed``."""

    @abc.abstractmethod
    def interior_point(self) -> np.ndarray:
        """Some point strictly inside the body."""

    @abc.abstractmethod
    def ray_exit(self, origin: np.ndarray, direction: np.ndarray) -> np.ndarray:
        """Boundary point where the ray from an interior origin leaves the body."""

    @property
    def scale(self) -> float:
        """Rough linear size, used for relative tolerances."""
        return max(abs(self.support(e)) for e in np.eye(self.ambient_dimension)) or 1.0

    def intrinsic_distances_batch(
        self, xs: np.ndarray, ys: np.ndarray
    ) -> tuple[np.ndarray, str]:
        """Pairwise-row distances; tag is exact only when every row is exact."""
        values = np.empty(len(xs))
        kind = EXACT
        for i, (x, y) in enumerate(zip(xs, ys)):
            values[i], k = self.intrinsic_distance(x, y)
            if k == UPPER_BOUND:
                kind = UPPER_BOUND
        return values, kind

    def __repr__(self) -> str:  # pragma: no cover - debugging nicety
        return f"<{type(self).__name__} {self.body_id}>"


# ---------------------------------------------------------------------------
# round sphere
# ---------------------------------------------------------------------------


class SphereBody(ConvexBody):
    """Round sphere of given radius and center in any ambient dimension."""

    def __init__(self, radius: float, center=None, ambient_dimension: int = 3,
                 body_id: str | None = None):
        if not (math.isfinite(radius) and radius > 0.0):
            raise ConfigurationError(f"radius must be positive, got {radius!r}")
        if center is None:
            center = np.zeros(ambient_dimension)
        self.center = _as_point(center, len(np.atleast_1d(center)))
        self.ambient_dimension = len(self.center)
        if self.ambient_dimension < 2:
            raise ConfigurationError("ambient dimension must be at least 2")
        self.radius = float(radius)
        self.body_id = body_id or f"sphere-r{self.radius:g}-d{self.ambient_dimension}"

    def support(self, direction) -> float:
        u = _as_point(direction, self.ambient_dimension)
        return float(self.center @ u + self.radius * np.linalg.norm(u))

    def support_batch(self, directions: np.ndarray) -> np.ndarray:
        d = np.asarray(directions, dtype=np.float64)
        return d @ self.center + self.radius * np.linalg.norm(d, axis=1)

    def boundary_area(self) -> float:
        n = self.surface_dimension
        return math.exp(log_unit_sphere_area(n) + n * math.log(self.radius))

    def enclosed_volume(self) -> float:
        d = self.ambient_dimension
        return math.exp(log_unit_ball_volume(d) + d * math.log(self.radius))

    def _validate_on_sphere(self, p: np.ndarray) -> np.ndarray:
        v = p - self.center
        if abs(np.linalg.norm(v) - self.radius) > 1e-9 * self.radius:
            raise DomainError(f"point is not on the sphere: {p!r}")
        return v / np.linalg.norm(v)

    def intrinsic_distance(self, x, y) -> tuple[float, str]:
        u = self._validate_on_sphere(_as_point(x, self.ambient_dimension))
        v = self._validate_on_sphere(_as_point(y, self.ambient_dimension))
        angle = math.acos(float(np.clip(u @ v, -1.0, 1.0)))
        return self.radius * angle, EXACT

    def intrinsic_distances_batch(self, xs, ys):
        u = (np.asarray(xs) - self.center) / self.radius
        v = (np.asarray(ys) - self.center) / self.radius
        dots = np.clip(np.einsum("ij,ij->i", u, v), -1.0, 1.0)
        return self.radius * np.arccos(dots), EXACT

    def sample_boundary(self, seed: int, count: int) -> np.ndarray:
        rng = substream(seed, "sample-boundary", self.body_id)
        dirs = unit_directions(rng, count, self.ambient_dimension)
        return self.center + self.radius * dirs

    def interior_point(self) -> np.ndarray:
        return self.center.copy()

    def ray_exit(self, origin, direction) -> np.ndarray:
        o = _as_point(origin, self.ambient_dimension)
        d = _as_point(direction, self.ambient_dimension)
        d = d / np.linalg.norm(d)
        w = o - self.center
        beta = float(d @ w)
        gamma = self.radius**2 - float(w @ w)
        if gamma <= 0.0:
            raise DomainError("ray origin must be strictly inside the sphere")
        t = -beta + math.sqrt(beta * beta + gamma)
        return o + t * d


# ---------------------------------------------------------------------------
# right circular cylinder (ball x segment), centered at the origin
# ---------------------------------------------------------------------------


class CylinderBody(ConvexBody):
    """Axis-aligned right circular cylinder in R^(n+1), centered at the origin.

    The solid is the product of an n-ball of radius r (first n
    coordinates) with the segment [-h/2, h/2] (last coordinate); its
    boundary consists of two flat n-ball caps and the lateral piece.
    """

    def __init__(self, surface_dimension: int, base_radius: float, height: float,
                 body_id: str | None = None):
        if surface_dimension < 2:
            raise ConfigurationError("surface dimension must be at least 2")
        if not (math.isfinite(base_radius) and base_radius > 0.0):
            raise ConfigurationError(f"base radius must be positive, got {base_radius!r}")
        if not (math.isfinite(height) and height > 0.0):
            raise ConfigurationError(f"height must be positive, got {height!r}")
        self.n = int(surface_dimension)
        self.ambient_dimension = self.n + 1
        self.base_radius = float(base_radius)
        self.height = float(height)
        self.body_id = body_id or (
            f"cylinder-n{self.n}-r{self.base_radius:g}-h{self.height:g}"
        )

    def support(self, direction) -> float:
        u = _as_point(direction, self.ambient_dimension)
        return float(
            self.base_radius * np.linalg.norm(u[:-1]) + 0.5 * self.height * abs(u[-1])
        )

    def support_batch(self, directions: np.ndarray) -> np.ndarray:
        d = np.asarray(directions, dtype=np.float64)
        return self.base_radius * np.linalg.norm(d[:, :-1], axis=1) + (
            0.5 * self.height
        ) * np.abs(d[:, -1])

    def boundary_area(self) -> float:
        n, r, h = self.n, self.base_radius, self.height
        omega_n = math.exp(log_unit_ball_volume(n))
        return 2.0 * omega_n * r**n + n * omega_n * r ** (n - 1) * h

    def enclosed_volume(self) -> float:
        n, r, h = self.n, self.base_radius, self.height
        return math.exp(log_unit_ball_volume(n)) * r**n * h

    # -- boundary classification ------------------------------------------

    def _classify(self, p: np.ndarray) -> tuple[str, float, float]:
        """Return (piece, perp_norm, z); piece in {cap_top, cap_bottom, lateral}."""
        tol = 1e-9 * max(self.base_radius, self.height)
        perp = float(np.linalg.norm(p[:-1]))
        z = float(p[-1])
        on_top = abs(z - 0.5 * self.height) <= tol and perp <= self.base_radius + tol
        on_bottom = abs(z + 0.5 * self.height) <= tol and perp <= self.base_radius + tol
        on_lateral = abs(perp - self.base_radius) <= tol and abs(z) <= 0.5 * self.height + tol
        if on_top:
            return "cap_top", perp, z
        if on_bottom:
            return "cap_bottom", perp, z
        if on_lateral:
            return "lateral", perp, z
        raise DomainError(f"point is not on the cylinder boundary: {p!r}")

    def _perp_angle_gap(self, x: np.ndarray, y: np.ndarray) -> float:
        """Angle between the cross-section projections, in [0, pi]."""
        u, v = x[:-1], y[:-1]
        nu, nv = np.linalg.norm(u), np.linalg.norm(v)
        if nu < 1e-14 or nv < 1e-14:
            return 0.0  # a cap center is angle-free; callers exploit radial symmetry
        return math.acos(float(np.clip(u @ v / (nu * nv), -1.0, 1.0)))

    def intrinsic_distance(self, x, y) -> tuple[float, str]:
        """Exact for same-cap pairs and opposite cap centers; otherwise the
        minimum over a family of unrolled candidate paths (an upper bound)."""
        p = _as_point(x, self.ambient_dimension)
        q = _as_point(y, self.ambient_dimension)
        piece_p, a, _ = self._classify(p)
        piece_q, b, _ = self._classify(q)
        r, h = self.base_radius, self.height
        tol = 1e-9 * max(r, h)

        if piece_p == piece_q and piece_p.startswith("cap"):
            # the cap is flat and convex: the straight segment is a
            # boundary path and the chord is a global lower bound
            return float(np.linalg.norm(p - q)), EXACT
        if (
            {piece_p, piece_q} == {"cap_top", "cap_bottom"}
            and a <= tol
            and b <= tol
        ):
            return 2.0 * r + h, EXACT  # radial + vertical + radial, by symmetry

        gamma = self._perp_angle_gap(p, q)
        z_p, z_q = float(p[-1]), float(q[-1])
        candidates: list[float] = []

        def cap_leg(rho_from: float, phi: np.ndarray) -> np.ndarray:
            # straight in-cap segment from radius rho_from (at angle 0)
            # to the rim point at angle phi
            return np.sqrt(rho_from**2 + r**2 - 2.0 * rho_from * r * np.cos(phi))

        if piece_p == "lateral" and piece_q == "lateral":
            candidates.append(math.hypot(r * gamma, z_p - z_q))
            # over either cap: climb to rim at angle u, straight across
            # the cap, descend from rim at angle w (both measured from p)
            u = np.linspace(-math.pi, math.pi, 49)[:, None]
            w = np.linspace(-math.pi, math.pi, 49)[None, :]
            for cap_z in (0.5 * h, -0.5 * h):
                climb = np.sqrt((r * _wrap_angle(u)) ** 2 + (cap_z - z_p) ** 2)
                cross = 2.0 * r * np.sin(_wrap_angle(w - u) / 2.0)
                descend = np.sqrt((r * _wrap_angle(gamma - w)) ** 2 + (cap_z - z_q) ** 2)
                candidates.append(float(np.min(climb + cross + descend)))
        elif piece_p.startswith("cap") != piece_q.startswith("cap"):
            if piece_q.startswith("cap"):  # normalize: p on the cap
                p, q = q, p
                a, b = b, a
                piece_p, piece_q = piece_q, piece_p
                z_p, z_q = z_q, z_p
            cap_z = 0.5 * h if piece_p == "cap_top" else -0.5 * h
            phi = np.linspace(-math.pi, math.pi, 257)
            leg1 = cap_leg(a, phi)
            leg2 = np.sqrt((r * _wrap_angle(gamma - phi)) ** 2 + (cap_z - z_q) ** 2)
            candidates.append(float(np.min(leg1 + leg2)))
        else:  # opposite caps, general points
            phi = np.linspace(-math.pi, math.pi, 49)[:, None]
            psi = np.linspace(-math.pi, math.pi, 49)[None, :]
            leg1 = cap_leg(a, phi)
            lateral = np.sqrt((r * _wrap_angle(gamma - phi - psi)) ** 2 + h**2)
            leg3 = cap_leg(b, psi)
            candidates.append(float(np.min(leg1 + lateral + leg3)))

        return min(candidates), UPPER_BOUND

    def sample_boundary(self, seed: int, count: int) -> np.ndarray:
        rng = substream(seed, "sample-boundary", self.body_id)
        n, r, h = self.n, self.base_radius, self.height
        omega_n = math.exp(log_unit_ball_volume(n))
        cap_area = omega_n * r**n
        lateral_area = n * omega_n * r ** (n - 1) * h
        total = 2.0 * cap_area + lateral_area
        pick = rng.random(count)
        points = np.empty((count, self.ambient_dimension))
        top = pick < cap_area / total
        bottom = (pick >= cap_area / total) & (pick < 2.0 * cap_area / total)
        lateral = ~(top | bottom)
        for mask, sign in ((top, 1.0), (bottom, -1.0)):
            k = int(mask.sum())
            if k:
                dirs = unit_directions(rng, k, n)
                radii = r * rng.random(k) ** (1.0 / n)
                points[mask, :-1] = dirs * radii[:, None]
                points[mask, -1] = sign * 0.5 * h
        k = int(lateral.sum())
        if k:
            dirs = unit_directions(rng, k, n)
            points[lateral, :-1] = r * dirs
            points[lateral, -1] = h * (rng.random(k) - 0.5)
        return points

    def interior_point(self) -> np.ndarray:
        return np.zeros(self.ambient_dimension)

    def ray_exit(self, origin, direction) -> np.ndarray:
        o = _as_point(origin, self.ambient_dimension)
        d = _as_point(direction, self.ambient_dimension)
        d = d / np.linalg.norm(d)
        r, h = self.base_radius, self.height
        best = math.inf
        # caps
        if abs(d[-1]) > 1e-15:
            for cap_z in (0.5 * h, -0.5 * h):
                t = (cap_z - o[-1]) / d[-1]
                if t > 0:
                    hit = o + t * d
                    if np.linalg.norm(hit[:-1]) <= r + 1e-12 * r and t < best:
                        best = t
        # lateral piece
        op, dp = o[:-1], d[:-1]
        aa = float(dp @ dp)
        if aa > 1e-30:
            bb = float(op @ dp)
            cc = float(op @ op) - r * r
            disc = bb * bb - aa * cc
            if disc >= 0.0:
                t = (-bb + math.sqrt(disc)) / aa
                if t > 0:
                    hit = o + t * d
                    if abs(hit[-1]) <= 0.5 * h + 1e-12 * h and t < best:
                        best = t
        if not math.isfinite(best):
            raise DomainError("ray does not exit the cylinder; origin must be interior")
        return o + best * d


# ---------------------------------------------------------------------------
# convex polygon boundary (surface dimension 1)
# ---------------------------------------------------------------------------


class PolygonBoundary(ConvexBody):
    """Closed convex polygon in the plane, traversed counterclockwise."""

    def __init__(self, vertices, body_id: str | None = None):
        v = np.asarray(vertices, dtype=np.float64)
        if v.ndim != 2 or v.shape[1] != 2 or len(v) < 3:
            raise ConfigurationError("need at least three planar vertices")
        if not np.all(np.isfinite(v)):
            raise ConfigurationError("vertices must be finite")
        scale = float(np.max(np.abs(v))) or 1.0
        e1 = np.roll(v, -1, axis=0) - v
        e2 = np.roll(v, -2, axis=0) - v
        crosses = e1[:, 0] * e2[:, 1] - e1[:, 1] * e2[:, 0]
        if np.any(crosses <= 1e-12 * scale**2):
            raise ConfigurationError(
                "vertices must be in strictly convex counterclockwise position"
            )
        self.vertices = v
        self.ambient_dimension = 2
        self._edges = np.roll(v, -1, axis=0) - v
        self._edge_lengths = np.linalg.norm(self._edges, axis=1)
        self._cum = np.concatenate([[0.0], np.cumsum(self._edge_lengths)])
        self.perimeter = float(self._cum[-1])
        self.body_id = body_id or f"polygon-{len(v)}gon"

    def support(self, direction) -> float:
        u = _as_point(direction, 2)
        return float(np.max(self.vertices @ u))

    def support_batch(self, directions: np.ndarray) -> np.ndarray:
        return np.max(np.asarray(directions) @ self.vertices.T, axis=1)

    def boundary_area(self) -> float:
        return self.perimeter

    def enclosed_volume(self) -> float:
        x, y = self.vertices[:, 0], self.vertices[:, 1]
        return 0.5 * float(np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y))

    def point_at(self, s: float | np.ndarray) -> np.ndarray:
        """Boundary point at arc length s from the first vertex."""
        s = np.asarray(s, dtype=np.float64) % self.perimeter
        idx = np.minimum(
            np.searchsorted(self._cum, s, side="right") - 1, len(self.vertices) - 1
        )
        t = (s - self._cum[idx]) / self._edge_lengths[idx]
        return self.vertices[idx] + t[..., None] * self._edges[idx]

    def arclength_of(self, point) -> float:
        p = _as_point(point, 2)
        s = self.arclengths_of(p[None, :])
        return float(s[0])

    def arclengths_of(self, points: np.ndarray) -> np.ndarray:
        """Arc-length parameters of on-boundary points (vectorized)."""
        p = np.asarray(points, dtype=np.float64)
        rel = p[:, None, :] - self.vertices[None, :, :]
        t = np.einsum("pek,ek->pe", rel, self._edges) / self._edge_lengths**2
        t = np.clip(t, 0.0, 1.0)
        foot = self.vertices[None] + t[..., None] * self._edges[None]
        dist = np.linalg.norm(p[:, None, :] - foot, axis=2)
        best = np.argmin(dist, axis=1)
        rows = np.arange(len(p))
        tol = 1e-9 * max(self.perimeter, 1.0)
        if np.any(dist[rows, best] > tol):
            bad = p[dist[rows, best] > tol][0]
            raise DomainError(f"point is not on the polygon boundary: {bad!r}")
        return self._cum[best] + t[rows, best] * self._edge_lengths[best]

    def intrinsic_distance(self, x, y) -> tuple[float, str]:
        sx, sy = self.arclength_of(x), self.arclength_of(y)
        gap = abs(sx - sy)
        return min(gap, self.perimeter - gap), EXACT

    def intrinsic_distances_batch(self, xs, ys):
        gaps = np.abs(self.arclengths_of(xs) - self.arclengths_of(ys))
        return np.minimum(gaps, self.perimeter - gaps), EXACT

    def sample_boundary(self, seed: int, count: int) -> np.ndarray:
        rng = substream(seed, "sample-boundary", self.body_id)
        return self.point_at(rng.random(count) * self.perimeter)

    def interior_point(self) -> np.ndarray:
        return self.vertices.mean(axis=0)

    def min_width_exact(self) -> float:
        """Rotating-calipers minimum width (exact for convex polygons)."""
        best = math.inf
        for i, (v, e, length) in enumerate(
            zip(self.vertices, self._edges, self._edge_lengths)
        ):
            normal = np.array([-e[1], e[0]]) / length  # inward for ccw order
            heights = (self.vertices - v) @ normal
            best = min(best, float(np.max(heights)))
        return best

    def ray_exit(self, origin, direction) -> np.ndarray:
        o = _as_point(origin, 2)
        d = _as_point(direction, 2)
        d = d / np.linalg.norm(d)
        best = math.inf
        for v, e, length in zip(self.vertices, self._edges, self._edge_lengths):
            outward = np.array([e[1], -e[0]]) / length
            denom = float(outward @ d)
            if denom > 1e-15:
                t = float(outward @ (v - o)) / denom
                if 0.0 < t < best:
                    best = t
        if not math.isfinite(best):
            raise DomainError("ray does not exit the polygon; origin must be interior")
        return o + best * d


def equilateral_triangle(side: float = 1.0, body_id: str | None = None) -> PolygonBoundary:
    """Equilateral triangle with one side on the x-axis from the origin."""
    if not (math.isfinite(side) and side > 0.0):
        raise ConfigurationError(f"side must be positive, got {side!r}")
    v = np.array([[0.0, 0.0], [side, 0.0], [0.5 * side, 0.5 * math.sqrt(3.0) * side]])
    return PolygonBoundary(v, body_id=body_id or f"triangle-L{side:g}")


def regular_polygon(sides: int, circumradius: float = 1.0,
                    body_id: str | None = None) -> PolygonBoundary:
    """Regular convex polygon centered at the origin."""
    if sides < 3:
        raise ConfigurationError(f"need at least 3 sides, got {sides}")
    angles = 2.0 * np.pi * np.arange(sides) / sides
    v = circumradius * np.column_stack([np.cos(angles), np.sin(angles)])
    return PolygonBoundary(v, body_id=body_id or f"regular-{sides}gon-R{circumradius:g}")


# ---------------------------------------------------------------------------
# convex polytopes in R^3
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Face:
    """One planar facet: ordered vertex indices plus derived measurements."""

    indices: tuple[int, ...]
    normal: np.ndarray  # outward unit normal
    offset: float  # plane equation <normal, x> = offset
    area: float
    centroid: np.ndarray


class Polytope3(ConvexBody):
    """Convex polytope in R^3 built from a vertex cloud via its hull.

    Coplanar hull simplices are merged into true faces; faces are sorted
    by (normal, offset) so face indices are stable and documented.
    """

    def __init__(self, vertices, body_id: str | None = None,
                 geodesic_subdivision: int = 8):
        pts = np.asarray(vertices, dtype=np.float64)
        if pts.ndim != 2 or pts.shape[1] != 3 or len(pts) < 4:
            raise ConfigurationError("need at least four points in R^3")
        if not np.all(np.isfinite(pts)):
            raise ConfigurationError("vertices must be finite")
        try:
            hull = ConvexHull(pts)
        except QhullError as exc:
            raise ConfigurationError(f"degenerate vertex cloud: {exc}") from exc
        self.vertices = pts[hull.vertices]
        remap = {old: new for new, old in enumerate(hull.vertices)}
        self.ambient_dimension = 3
        if geodesic_subdivision < 0:
            raise ConfigurationError("geodesic subdivision must be nonnegative")
        self.geodesic_subdivision = int(geodesic_subdivision)
        self.body_id = body_id or f"polytope-{len(self.vertices)}v"
        self._scale = float(np.max(np.linalg.norm(self.vertices, axis=1))) or 1.0
        self.faces = self._merge_faces(hull, remap)
        self._check_euler()
        self._graphs: dict[int, object] = {}

    # -- construction ------------------------------------------------------

    def _merge_faces(self, hull: ConvexHull, remap: dict[int, int]) -> tuple[Face, ...]:
        groups: dict[tuple, list[int]] = {}
        tol_key = 7  # round normals/offsets to group coplanar simplices
        for simplex, eq in zip(hull.simplices, hull.equations):
            key = tuple(np.round(eq, tol_key))
            groups.setdefault(key, []).extend(remap[i] for i in simplex)
        faces = []
        for eq_key, idx in groups.items():
            normal = np.array(eq_key[:3])
            normal = normal / np.linalg.norm(normal)
            unique = sorted(set(idx))
            coords = self.vertices[unique]
            centroid = coords.mean(axis=0)
            # order vertices by angle in the face plane
            basis_u = coords[0] - centroid
            basis_u = basis_u / np.linalg.norm(basis_u)
            basis_v = np.cross(normal, basis_u)
            rel = coords - centroid
            order = np.argsort(np.arctan2(rel @ basis_v, rel @ basis_u))
            ordered = tuple(unique[i] for i in order)
            pts = self.vertices[list(ordered)]
            # refit the plane from the vertices themselves: qhull's facet
            # equations are loose by ~1e-8, too coarse for our tolerances
            fans = np.cross(pts[1:-1] - pts[0], pts[2:] - pts[0])
            refit = fans.sum(axis=0)
            refit_norm = float(np.linalg.norm(refit))
            if refit_norm <= 0.0 or refit @ normal <= 0.0:
                raise ConfigurationError("degenerate (zero-area) face in hull")
            normal = refit / refit_norm
            area = 0.5 * float(np.sum(fans @ normal))
            offset = float(np.mean(pts @ normal))
            faces.append(
                Face(indices=ordered, normal=normal, offset=offset, area=area,
                     centroid=pts.mean(axis=0))
            )
        faces.sort(key=lambda f: (tuple(np.round(f.normal, 9)), round(f.offset, 9)))
        return tuple(faces)

    def _check_euler(self) -> None:
        edges = set()
        for face in self.faces:
            k = len(face.indices)
            for i in range(k):
                a, b = face.indices[i], face.indices[(i + 1) % k]
                edges.add((min(a, b), max(a, b)))
        v, e, f = len(self.vertices), len(edges), len(self.faces)
        if v - e + f != 2:
            raise ConfigurationError(
                f"hull fails the Euler relation: V={v}, E={e}, F={f}"
            )
        self.edges = tuple(sorted(edges))

    # -- measurements -------------------------------------------------------

    def boundary_area(self) -> float:
        return float(sum(f.area for f in self.faces))

    def enclosed_volume(self) -> float:
        g = self.vertices.mean(axis=0)
        # stack of cones over the faces from an interior apex
        return float(
            sum(f.area * (f.offset - f.normal @ g) for f in self.faces) / 3.0
        )

    def solid_centroid(self) -> np.ndarray:
        g = self.vertices.mean(axis=0)
        total = 0.0
        acc = np.zeros(3)
        for face in self.faces:
            pts = self.vertices[list(face.indices)]
            for i in range(1, len(pts) - 1):
                tet = np.array([pts[0], pts[i], pts[i + 1]])
                vol = float(np.dot(np.cross(tet[1] - g, tet[2] - g), tet[0] - g)) / 6.0
                acc += vol * (g + tet.sum(axis=0)) / 4.0
                total += vol
        return acc / total

    def support(self, direction) -> float:
        u = _as_point(direction, 3)
        return float(np.max(self.vertices @ u))

    def support_batch(self, directions: np.ndarray) -> np.ndarray:
        return np.max(np.asarray(directions) @ self.vertices.T, axis=1)

    # -- boundary geometry ---------------------------------------------------

    def faces_containing(self, point: np.ndarray) -> list[int]:
        """Indices of faces whose closed polygon contains the point."""
        p = _as_point(point, 3)
        tol = 1e-9 * self._scale
        hits = []
        for fi, face in enumerate(self.faces):
            if abs(float(face.normal @ p) - face.offset) > tol:
                continue
            pts = self.vertices[list(face.indices)]
            edges = np.roll(pts, -1, axis=0) - pts
            rel = p - pts
            if np.all(np.cross(edges, rel) @ face.normal >= -tol * self._scale):
                hits.append(fi)
        return hits

    def intrinsic_distance(self, x, y, subdivision: int | None = None) -> tuple[float, str]:
        values, kind = self.intrinsic_distances_batch(
            np.asarray(x)[None, :], np.asarray(y)[None, :], subdivision
        )
        return float(values[0]), kind

    def intrinsic_distances_batch(self, xs, ys, subdivision: int | None = None):
        from .geodesic import GeodesicGraph  # local import to avoid a cycle

        m = self.geodesic_subdivision if subdivision is None else int(subdivision)
        if m not in self._graphs:
            self._graphs[m] = GeodesicGraph(self, m)
        graph: GeodesicGraph = self._graphs[m]  # type: ignore[assignment]
        return graph.pairwise_distances(np.asarray(xs), np.asarray(ys)), UPPER_BOUND

    def sample_boundary(self, seed: int, count: int) -> np.ndarray:
        rng = substream(seed, "sample-boundary", self.body_id)
        areas = np.array([f.area for f in self.faces])
        face_pick = rng.choice(len(self.faces), size=count, p=areas / areas.sum())
        out = np.empty((count, 3))
        for fi in np.unique(face_pick):
            face = self.faces[fi]
            mask = face_pick == fi
            k = int(mask.sum())
            pts = self.vertices[list(face.indices)]
            tri_areas = 0.5 * np.linalg.norm(
                np.cross(pts[1:-1] - pts[0], pts[2:] - pts[0]), axis=1
            )
            tri_pick = rng.choice(len(tri_areas), size=k, p=tri_areas / tri_areas.sum())
            u = np.sqrt(rng.random(k))
            v = rng.random(k)
            a = pts[0]
            b = pts[tri_pick + 1]
            c = pts[tri_pick + 2]
            out[mask] = (1 - u)[:, None] * a + (u * (1 - v))[:, None] * b + (
                u * v
            )[:, None] * c
        return out

    def interior_point(self) -> np.ndarray:
        return self.vertices.mean(axis=0)

    def ray_exit(self, origin, direction) -> np.ndarray:
        o = _as_point(origin, 3)
        d = _as_point(direction, 3)
        d = d / np.linalg.norm(d)
        best = math.inf
        for face in self.faces:
            denom = float(face.normal @ d)
            if denom > 1e-15:
                t = (face.offset - float(face.normal @ o)) / denom
                if 0.0 < t < best:
                    best = t
        if not math.isfinite(best):
            raise DomainError("ray does not exit the polytope; origin must be interior")
        return o + best * d


def cube(edge: float = 1.0, body_id: str | None = None,
         geodesic_subdivision: int = 8) -> Polytope3:
    """Axis-aligned cube centered at the origin."""
    if not (math.isfinite(edge) and edge > 0.0):
        raise ConfigurationError(f"edge must be positive, got {edge!r}")
    half = 0.5 * edge
    corners = np.array(
        [[sx, sy, sz] for sx in (-half, half) for sy in (-half, half)
         for sz in (-half, half)]
    )
    return Polytope3(corners, body_id=body_id or f"cube-a{edge:g}",
                     geodesic_subdivision=geodesic_subdivision)


def random_polytope(seed: int, vertex_count: int,
                    geodesic_subdivision: int = 8) -> Polytope3:
    """Hull of jittered sphere points; retries the next substream if degenerate."""
    if vertex_count < 4:
        raise ConfigurationError(f"need at least 4 vertices, got {vertex_count}")
    for attempt in range(16):
        rng = substream(seed, "random-polytope", str(attempt))
        dirs = unit_directions(rng, vertex_count, 3)
        radii = 1.0 + 0.35 * (rng.random(vertex_count) - 0.5)
        try:
            return Polytope3(
                dirs * radii[:, None],
                body_id=f"polytope-s{seed}-v{vertex_count}",
                geodesic_subdivision=geodesic_subdivision,
            )
        except ConfigurationError:
            continue
    raise ConfigurationError(
        f"could not build a nondegenerate polytope from seed {seed}"
    )
