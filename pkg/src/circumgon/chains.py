"""Midpoint-reflection chains.

A chain ``q_0 q_1 ... q_t`` has the midpoint property for ``m_1 .. m_t``
when every ``m_k`` is the midpoint of ``q_{k-1} q_k``; each vertex is then
the point reflection of its predecessor, so the whole chain is an affine
function of ``q_0``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

from .config import DEFAULT
from .geom import (
    ConvexPolygon,
    Line,
    Point,
    as_point,
    cross,
    dot,
    external_wedge,
    in_external_region,
    signed_area,
)


class ChainKind(str, Enum):
    UNIQUE = "UNIQUE"
    FAMILY = "FAMILY"
    NONE = "NO_SOLUTION"


@dataclass(frozen=True)
class ReflectionComposition:
    """The map ``q -> offset + q`` (even) or ``q -> offset - q`` (odd)."""

    odd: bool
    offset: Point

    @property
    def sign(self) -> int:
        return -1 if self.odd else 1

    def __call__(self, q: Point) -> Point:
        return self.offset - q if self.odd else self.offset + q

    def image_line(self, line: Line) -> Line:
        """Image of an oriented line (odd maps reverse its orientation)."""
        p = self(line.point)
        d = -line.direction if self.odd else line.direction
        return Line.from_point_direction(p, d)


IDENTITY = ReflectionComposition(False, Point(0.0, 0.0))


def compose_reflections(midpoints: Sequence) -> ReflectionComposition:
    odd, ox, oy = False, 0.0, 0.0
    for m in midpoints:
        m = as_point(m)
        ox, oy = 2.0 * m.x - ox, 2.0 * m.y - oy
        odd = not odd
    return ReflectionComposition(odd, Point(ox, oy))


def reflect_chain(start: Point, midpoints: Sequence[Point]) -> list[Point]:
    pts = [start]
    for m in midpoints:
        pts.append(pts[-1].reflect(m))
    return pts


@dataclass(frozen=True)
class MidpointChain:
    vertices: tuple[Point, ...]
    midpoints: tuple[Point, ...]
    closed: bool = False

    @classmethod
    def from_start(cls, start: Point, midpoints: Sequence[Point], closed: bool = False):
        return cls(tuple(reflect_chain(start, midpoints)), tuple(midpoints), closed)

    @property
    def start(self) -> Point:
        return self.vertices[0]

    @property
    def end(self) -> Point:
        return self.vertices[-1]

    def midpoint_defect(self) -> float:
        """Largest deviation ``|q_{k-1} + q_k - 2 m_k|`` along the chain."""
        worst = 0.0
        for k, m in enumerate(self.midpoints, start=1):
            a, b = self.vertices[k - 1], self.vertices[k]
            worst = max(worst, math.hypot(a.x + b.x - 2 * m.x, a.y + b.y - 2 * m.y))
        return worst

    @property
    def signed_area(self) -> float:
        """Shoelace area of the closed curve ``q_0 .. q_{t-1}``."""
        return signed_area(self.vertices[:-1] if self.closed else self.vertices)


@dataclass(frozen=True)
class ClosedChainResult:
    kind: ChainKind
    chain: MidpointChain | None
    area: float | None
    alternating_sum: Point


def _alternating_sum(points: Sequence[Point]) -> Point:
    # sum_k (-1)^k p_k with 1-based k
    sx = math.fsum((-1) ** (k + 1) * p.x for k, p in enumerate(points))
    sy = math.fsum((-1) ** (k + 1) * p.y for k, p in enumerate(points))
    return Point(sx, sy)


def closed_chain(P: ConvexPolygon, start: Point | None = None, eps: float | None = None) -> ClosedChainResult:
    """Closed curve whose sides are bisected by ``p_0, p_1, ..., p_{n-1}`` in turn.

    ``q_0`` is the common vertex of the sides through ``p_{n-1}`` and ``p_0``;
    ``q_k`` is the reflection of ``q_{k-1}`` about ``p_{k-1}``.
    """
    eps = P.eps if eps is None else eps
    pts = list(P.vertices)
    n = len(pts)
    alt = _alternating_sum(pts)
    if n % 2 == 1:
        # q = sum_{k=1..n} (-1)^{n-k} p_k; for odd n this is -alt
        q0 = -alt
        chain = MidpointChain.from_start(q0, pts, closed=True)
        return ClosedChainResult(ChainKind.UNIQUE, chain, chain.signed_area, alt)
    tol = eps * P.scale
    if abs(alt.x) > tol or abs(alt.y) > tol:
        return ClosedChainResult(ChainKind.NONE, None, None, alt)
    probe = MidpointChain.from_start(pts[-1] if start is None else as_point(start), pts, closed=True)
    if start is None:
        return ClosedChainResult(ChainKind.FAMILY, None, probe.signed_area, alt)
    return ClosedChainResult(ChainKind.UNIQUE, probe, probe.signed_area, alt)


def path_gain(anchor_a: Point, chain: Sequence[Point], anchor_b: Point, midpoints: Sequence[Point]) -> float:
    """Signed area between a chain and the polygon path it replaces.

    The polygon path is ``anchor_a, midpoints..., anchor_b``; the chain runs
    ``anchor_a, q_0, ..., q_t, anchor_b``.
    """
    ring = [anchor_a, *chain, anchor_b, *reversed(midpoints)]
    return signed_area(ring)


@dataclass(frozen=True)
class OpenChainResult:
    kind: ChainKind
    line_a: Line
    anchor_a: Point
    midpoints: tuple[Point, ...]
    line_b: Line
    anchor_b: Point
    composition: ReflectionComposition
    chain: MidpointChain | None = None
    gain: float | None = None

    def chain_from(self, q0: Point) -> MidpointChain:
        return MidpointChain.from_start(q0, self.midpoints)

    def point_at(self, t: float) -> Point:
        return self.anchor_a + self.line_a.direction * t

    def parameter_of(self, q0: Point) -> float:
        return dot(q0 - self.anchor_a, self.line_a.direction)

    def gain_of(self, chain: MidpointChain) -> float:
        return path_gain(self.anchor_a, chain.vertices, self.anchor_b, self.midpoints)

    def with_start(self, q0: Point) -> "OpenChainResult":
        chain = self.chain_from(q0)
        return OpenChainResult(self.kind, self.line_a, self.anchor_a, self.midpoints,
                               self.line_b, self.anchor_b, self.composition, chain, self.gain_of(chain))


def open_chain(
    line_a: Line,
    anchor_a: Point,
    midpoints: Sequence[Point],
    line_b: Line,
    anchor_b: Point,
    start: Point | None = None,
    eps: float = DEFAULT.eps_geom,
) -> OpenChainResult:
    """Chain from ``line_a`` to ``line_b`` bisected by ``midpoints``.

    Non-parallel lines give a unique chain.  Parallel lines give either no
    chain or, when the image of ``line_a`` coincides with ``line_b``, a
    one-parameter family; its representative starts at ``start`` (default
    ``anchor_a``) and its gain is the same for every member.
    """
    mids = tuple(as_point(m) for m in midpoints)
    anchor_a, anchor_b = as_point(anchor_a), as_point(anchor_b)
    comp = compose_reflections(mids)
    d = line_a.direction
    base = line_a.project(anchor_a)
    args = (line_a, base, mids, line_b, as_point(anchor_b), comp)
    # q_t(s) = comp(base) + sign * s * d must lie on line_b
    slope = comp.sign * dot(line_b.normal, d)
    value = line_b.side(comp(base))
    if abs(cross(d, line_b.direction)) > eps:
        s = -value / slope
        chain = MidpointChain.from_start(base + d * s, mids)
        gain = path_gain(base, chain.vertices, args[4], mids)
        return OpenChainResult(ChainKind.UNIQUE, *args, chain=chain, gain=gain)
    if abs(value) > eps:
        return OpenChainResult(ChainKind.NONE, *args)
    probe = OpenChainResult(ChainKind.FAMILY, *args)
    q0 = line_a.project(as_point(start)) if start is not None else base
    return probe.with_start(q0)


def chain_feasible(chain: MidpointChain, sides, first_side: int, eps: float | None = None) -> bool:
    """Every ``q_k`` lies in the closed external region of side ``first_side + k``.

    ``sides`` is anything with ``sideline(i)``, ``len()`` and ``scale``
    (a ConvexPolygon or a SlotList).
    """
    eps = DEFAULT.eps_geom if eps is None else eps
    tol = eps * sides.scale
    n = len(sides)
    lines = [sides.sideline(i) for i in range(n)]
    verts = chain.vertices[:-1] if chain.closed else chain.vertices
    for k, q in enumerate(verts):
        if not in_external_region(q, *external_wedge(lines, first_side + k), tol):
            return False
    return True


def _clip_interval(lo: float, hi: float, slope: float, value: float, tol: float):
    """Intersect [lo, hi] with {s : value + slope * s >= -tol}."""
    if slope == 0.0:
        return (lo, hi) if value >= -tol else None
    bound = (-tol - value) / slope
    if slope > 0:
        lo = max(lo, bound)
    else:
        hi = min(hi, bound)
    return (lo, hi) if lo <= hi else None


def feasible_range(result: OpenChainResult, sides, first_side: int, eps: float | None = None):
    """Parameter interval of family members whose vertices stay in their external regions.

    The parameter is the signed distance of ``q_0`` from ``anchor_a`` along
    ``line_a``.  Returns ``(lo, hi)`` (possibly infinite ends) or None.
    """
    eps = DEFAULT.eps_geom if eps is None else eps
    tol = eps * sides.scale
    n = len(sides)
    lines = [sides.sideline(i) for i in range(n)]
    at0 = reflect_chain(result.point_at(0.0), result.midpoints)
    at1 = reflect_chain(result.point_at(1.0), result.midpoints)
    interval = (-math.inf, math.inf)
    for k, (q0, q1) in enumerate(zip(at0, at1)):
        prev, own, nxt = external_wedge(lines, first_side + k)
        for line, sign in ((own, -1.0), (prev, 1.0), (nxt, 1.0)):
            v0, v1 = sign * line.side(q0), sign * line.side(q1)
            interval = _clip_interval(*interval, v1 - v0, v0, tol)
            if interval is None:
                return None
    return interval


def family_representative(result: OpenChainResult, sides, first_side: int, eps: float | None = None):
    """Canonical family member: midpoint of the feasible parameter range.

    A half-infinite range uses its finite end.  Returns None when no member
    is feasible.
    """
    rng = feasible_range(result, sides, first_side, eps)
    if rng is None:
        return None
    lo, hi = rng
    if math.isfinite(lo) and math.isfinite(hi):
        s = 0.5 * (lo + hi)
    elif math.isfinite(lo):
        s = lo
    elif math.isfinite(hi):
        s = hi
    else:
        s = 0.0
    return result.with_start(result.point_at(s))


@dataclass(frozen=True)
class FeasibleRegion:
    """Convex set of admissible closed-chain starts (empty when ``vertices`` is)."""

    vertices: tuple[Point, ...]

    @property
    def empty(self) -> bool:
        return len(self.vertices) == 0

    @property
    def area(self) -> float:
        return signed_area(self.vertices) if len(self.vertices) >= 3 else 0.0

    @property
    def centroid(self) -> Point:
        n = len(self.vertices)
        return Point(math.fsum(p.x for p in self.vertices) / n, math.fsum(p.y for p in self.vertices) / n)

    def contains(self, p: Point, tol: float = 0.0) -> bool:
        n = len(self.vertices)
        if n < 3:
            return any(p.close_to(v, tol) for v in self.vertices)
        return all(
            cross(self.vertices[(k + 1) % n] - self.vertices[k], p - self.vertices[k])
            >= -tol * (self.vertices[(k + 1) % n] - self.vertices[k]).norm()
            for k in range(n)
        )


def clip_halfplane(poly: list[Point], normal: Point, offset: float) -> list[Point]:
    """Sutherland-Hodgman step: keep ``{x : normal . x >= offset}``."""
    out = []
    n = len(poly)
    for k in range(n):
        cur, nxt = poly[k], poly[(k + 1) % n]
        fc, fn = dot(normal, cur) - offset, dot(normal, nxt) - offset
        if fc >= 0:
            out.append(cur)
        if (fc >= 0) != (fn >= 0):
            t = fc / (fc - fn)
            out.append(cur + (nxt - cur) * t)
    return out


def intersect_halfplanes(halfplanes: Sequence[tuple[Point, float]], box: float, center: Point = Point(0.0, 0.0)) -> list[Point]:
    """Intersection of ``{x : n . x >= c}`` by incremental clipping of a square."""
    poly = [center + Point(-box, -box), center + Point(box, -box),
            center + Point(box, box), center + Point(-box, box)]
    for normal, offset in halfplanes:
        poly = clip_halfplane(poly, normal, offset)
        if not poly:
            break
    return poly


def all_n_feasible_region(P: ConvexPolygon, eps: float | None = None) -> FeasibleRegion:
    """Starts ``q`` whose closed midpoint chain keeps every vertex in its external region."""
    eps = P.eps if eps is None else eps
    pts = list(P.vertices)
    n = len(pts)
    alt = _alternating_sum(pts)
    tol = eps * P.scale
    if n % 2 == 1 or abs(alt.x) > tol or abs(alt.y) > tol:
        return FeasibleRegion(())
    lines = [P.sideline(i) for i in range(n)]
    halfplanes = []
    # q_k = sign_k * q + c_k faces side k-1
    sign, c = 1.0, Point(0.0, 0.0)
    for k in range(n):
        prev, own, nxt = external_wedge(lines, k - 1)
        for line, orient_sign in ((own, -1.0), (prev, 1.0), (nxt, 1.0)):
            nrm = line.normal * (orient_sign * sign)
            off = orient_sign * (line.c - dot(line.normal, c)) - tol
            halfplanes.append((nrm, off))
        c = pts[k] * 2.0 - c
        sign = -sign
    center = Point(sum(p.x for p in pts) / n, sum(p.y for p in pts) / n)
    poly = intersect_halfplanes(halfplanes, box=1e3 * P.scale, center=center)
    return FeasibleRegion(tuple(poly))
