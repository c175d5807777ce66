"""Shortest boundary paths on polytopes via Steiner-point graphs.

Polytope faces are flat and convex, so a straight segment between two
points on one face is a genuine boundary path.  Placing extra nodes
along every edge and connecting all nodes that share a face therefore
yields a graph whose shortest paths are achievable boundary paths; the
reported distances are upper bounds that tighten as the subdivision
grows (nested node sets give monotone improvement).
"""

from __future__ import annotations

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import dijkstra

from ..errors import DomainError

__all__ = ["GeodesicGraph"]


class GeodesicGraph:
    """Edge-subdivision graph over the boundary of a ``Polytope3``."""

    def __init__(self, polytope, subdivision: int):
        self.polytope = polytope
        self.subdivision = int(subdivision)
        m = self.subdivision

        nodes = [polytope.vertices]
        # node ids: polytope vertices first, then m interior points per edge
        edge_node_ids: dict[tuple[int, int], np.ndarray] = {}
        next_id = len(polytope.vertices)
        for a, b in polytope.edges:
            if m:
                t = (np.arange(1, m + 1) / (m + 1))[:, None]
                nodes.append(polytope.vertices[a] * (1 - t) + polytope.vertices[b] * t)
            edge_node_ids[(a, b)] = np.arange(next_id, next_id + m)
            next_id += m
        self.nodes = np.concatenate(nodes, axis=0)

        self.face_node_ids: list[np.ndarray] = []
        for face in polytope.faces:
            ids = list(face.indices)
            k = len(face.indices)
            for i in range(k):
                a, b = face.indices[i], face.indices[(i + 1) % k]
                ids.extend(edge_node_ids[(min(a, b), max(a, b))])
            self.face_node_ids.append(np.array(sorted(ids)))

        weights: dict[tuple[int, int], float] = {}
        for ids in self.face_node_ids:
            pts = self.nodes[ids]
            dists = np.linalg.norm(pts[:, None, :] - pts[None, :, :], axis=2)
            iu, ju = np.triu_indices(len(ids), k=1)
            for i, j, w in zip(ids[iu], ids[ju], dists[iu, ju]):
                weights[(int(i), int(j))] = float(w)
        self._base_weights = weights

    @property
    def node_count(self) -> int:
        return len(self.nodes)

    def _assemble(self, extra: dict[tuple[int, int], float], total: int) -> csr_matrix:
        pairs = list(self._base_weights.items()) + list(extra.items())
        rows = np.fromiter((p[0][0] for p in pairs), dtype=np.int64, count=len(pairs))
        cols = np.fromiter((p[0][1] for p in pairs), dtype=np.int64, count=len(pairs))
        vals = np.fromiter((p[1] for p in pairs), dtype=np.float64, count=len(pairs))
        return csr_matrix((vals, (rows, cols)), shape=(total, total))

    def pairwise_distances(self, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
        """Row-wise boundary-path distances between query point arrays."""
        xs = np.atleast_2d(np.asarray(xs, dtype=np.float64))
        ys = np.atleast_2d(np.asarray(ys, dtype=np.float64))
        if xs.shape != ys.shape:
            raise DomainError("query arrays must have matching shapes")
        k = len(xs)
        base = self.node_count
        total = base + 2 * k
        queries = np.concatenate([xs, ys], axis=0)

        extra: dict[tuple[int, int], float] = {}
        query_faces: list[set[int]] = []
        for qi, point in enumerate(queries):
            faces = self.polytope.faces_containing(point)
            if not faces:
                raise DomainError(
                    f"query point is not on the polytope boundary: {point!r}"
                )
            query_faces.append(set(faces))
            node_ids = np.unique(
                np.concatenate([self.face_node_ids[f] for f in faces])
            )
            lengths = np.linalg.norm(self.nodes[node_ids] - point, axis=1)
            for nid, w in zip(node_ids, lengths):
                extra[(int(nid), base + qi)] = float(w)
        for i in range(k):
            if query_faces[i] & query_faces[k + i]:
                extra[(base + i, base + k + i)] = float(
                    np.linalg.norm(xs[i] - ys[i])
                )

        graph = self._assemble(extra, total)
        sources = np.arange(base, base + k)
        dist = dijkstra(graph, directed=False, indices=sources)
        return dist[np.arange(k), base + k + np.arange(k)]

    def distance(self, x, y) -> float:
        return float(self.pairwise_distances(np.asarray(x)[None], np.asarray(y)[None])[0])
