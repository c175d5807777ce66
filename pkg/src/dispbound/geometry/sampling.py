"""Deterministic random-stream plumbing and direction sampling.

Every random quantity in the geometry layer flows from an explicit
64-bit seed through a named substream, so parallel and serial runs (and
repeated runs) produce byte-identical results.
"""

from __future__ import annotations

import zlib

import numpy as np

__all__ = ["fibonacci_sphere", "substream", "unit_directions"]


def substream(seed: int, *names: str) -> np.random.Generator:
    """Independent, reproducible generator for a named operation.

    The names are hashed into a spawn key, so streams for different
    operations never overlap and adding a new consumer cannot shift the
    draws of an existing one.
    """
    key = tuple(zlib.crc32(name.encode("utf-8")) for name in names)
    return np.random.default_rng(np.random.SeedSequence(int(seed), spawn_key=key))


def unit_directions(rng: np.random.Generator, count: int, dim: int) -> np.ndarray:
    """Uniform directions sampled by normalizing standard Gaussians."""
    v = rng.standard_normal((count, dim))
    norms = np.linalg.norm(v, axis=1)
    while np.any(norms < 1e-12):
        bad = norms < 1e-12
        v[bad] = rng.standard_normal((int(bad.sum()), dim))
        norms = np.linalg.norm(v, axis=1)
    return v / norms[:, None]


def fibonacci_sphere(count: int) -> np.ndarray:
    """Deterministic quasi-uniform directions on the 2-sphere (golden spiral)."""
    i = np.arange(count, dtype=np.float64)
    z = 1.0 - (2.0 * i + 1.0) / count
    phi = i * (np.pi * (3.0 - np.sqrt(5.0)))
    r = np.sqrt(np.maximum(0.0, 1.0 - z * z))
    return np.column_stack([r * np.cos(phi), r * np.sin(phi), z])
