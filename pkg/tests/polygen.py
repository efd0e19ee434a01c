"""Seeded random inputs shared by the test modules."""

from __future__ import annotations

import math

import numpy as np

from circumgon.geom import ConvexPolygon, GeometryError, validate_input
from circumgon.gini import LorenzData


def random_polygon(rng: np.random.Generator, n: int, jitter: float = 0.4, wobble: float = 0.15) -> ConvexPolygon:
    """Strictly convex n-gon near a random ellipse; may fail validate_input."""
    while True:
        k = np.arange(n) + jitter * rng.uniform(-1, 1, n)
        angles = np.sort(2 * math.pi * k / n)
        radii = 1 + wobble * rng.uniform(-1, 1, n)
        pts = np.column_stack([radii * np.cos(angles), radii * np.sin(angles)])
        axes = np.diag(rng.uniform(0.5, 1.5, 2))
        rot = rng.uniform(0, 2 * math.pi)
        c, s = math.cos(rot), math.sin(rot)
        pts = pts @ axes @ np.array([[c, s], [-s, c]]) + rng.uniform(-3, 3, 2)
        try:
            return ConvexPolygon.from_coords(pts.tolist())
        except GeometryError:
            continue


def random_valid_polygon(rng: np.random.Generator, n: int, **kw) -> ConvexPolygon:
    while True:
        P = random_polygon(rng, n, **kw)
        if not validate_input(P):
            return P


def random_affine(rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    while True:
        M = rng.normal(size=(2, 2))
        sv = np.linalg.svd(M, compute_uv=False)
        if sv[1] > 0.2 and sv[0] / sv[1] < 5:
            return M, rng.uniform(-5, 5, 2)


def random_lorenz(rng: np.random.Generator, m: int) -> LorenzData:
    """m segments with strictly increasing slopes from (0,0) to (1,1)."""
    while True:
        widths = rng.dirichlet(np.ones(m))
        slopes = np.sort(rng.uniform(0.05, 3.0, m))
        rise = slopes * widths
        rise /= rise.sum()
        p = np.concatenate([[0.0], np.cumsum(widths)])
        L = np.concatenate([[0.0], np.cumsum(rise)])
        p[-1] = L[-1] = 1.0
        if np.min(np.diff(p)) < 1e-3:
            continue
        try:
            data = LorenzData.from_pairs(zip(p.tolist(), L.tolist()))
        except ValueError:
            continue
        if not data.collinear:
            return data
