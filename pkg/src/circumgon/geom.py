"""Planar primitives: points, oriented lines, strictly convex polygons.

Lines carry a unit normal pointing to their *left*; for a counterclockwise
polygon the left side of every sideline is the interior.  Tolerance checks
are done on geometry rescaled to unit diameter, so ``eps`` arguments are
always scale-free.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Iterable, Sequence

from .config import DEFAULT


class GeometryError(ValueError):
    """Input geometry violates a structural requirement."""


class ValidationError(GeometryError):
    """A polygon fails the existence conditions for a bounded optimum."""

    def __init__(self, message: str, issues: Sequence["Issue"] = ()):
        super().__init__(message)
        self.issues = tuple(issues)


class UnboundedError(ValidationError):
    pass


class Issue(str, Enum):
    UNBOUNDED = "UNBOUNDED"
    TOO_FEW_VERTICES = "TOO_FEW_VERTICES"


@dataclass(frozen=True, slots=True)
class Point:
    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise GeometryError(f"non-finite coordinate in ({self.x}, {self.y})")

    def __add__(self, other: "Point") -> "Point":
        return Point(self.x + other.x, self.y + other.y)

    def __sub__(self, other: "Point") -> "Point":
        return Point(self.x - other.x, self.y - other.y)

    def __mul__(self, k: float) -> "Point":
        return Point(self.x * k, self.y * k)

    __rmul__ = __mul__

    def __truediv__(self, k: float) -> "Point":
        return Point(self.x / k, self.y / k)

    def __neg__(self) -> "Point":
        return Point(-self.x, -self.y)

    def __iter__(self):
        yield self.x
        yield self.y

    def norm(self) -> float:
        return math.hypot(self.x, self.y)

    def reflect(self, center: "Point") -> "Point":
        """Point reflection about ``center``."""
        return Point(2.0 * center.x - self.x, 2.0 * center.y - self.y)

    def close_to(self, other: "Point", eps: float) -> bool:
        return math.hypot(self.x - other.x, self.y - other.y) <= eps


def as_point(p) -> Point:
    return p if isinstance(p, Point) else Point(float(p[0]), float(p[1]))


def cross(u: Point, v: Point) -> float:
    return u.x * v.y - u.y * v.x


def dot(u: Point, v: Point) -> float:
    return u.x * v.x + u.y * v.y


def orient(a: Point, b: Point, c: Point) -> float:
    """Twice the signed area of triangle abc (positive for a left turn)."""
    return (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x)


def signed_area(vertices: Sequence) -> float:
    pts = [as_point(v) for v in vertices]
    if len(pts) < 3:
        raise GeometryError("signed area needs at least 3 points")
    n = len(pts)
    return 0.5 * math.fsum(
        pts[k].x * pts[(k + 1) % n].y - pts[(k + 1) % n].x * pts[k].y for k in range(n)
    )


@dataclass(frozen=True, slots=True)
class Line:
    """Oriented line ``a*x + b*y = c`` with unit normal (a, b) on its left."""

    a: float
    b: float
    c: float

    def __post_init__(self):
        if abs(math.hypot(self.a, self.b) - 1.0) > 1e-12:
            raise GeometryError("line normal must be a unit vector")

    @classmethod
    def from_point_direction(cls, p: Point, d: Point) -> "Line":
        length = d.norm()
        if length == 0.0:
            raise GeometryError("degenerate line direction")
        a, b = -d.y / length, d.x / length
        return cls(a, b, a * p.x + b * p.y)

    @classmethod
    def through(cls, p: Point, q: Point) -> "Line":
        return cls.from_point_direction(p, q - p)

    @property
    def normal(self) -> Point:
        return Point(self.a, self.b)

    @property
    def direction(self) -> Point:
        return Point(self.b, -self.a)

    @property
    def point(self) -> Point:
        """Foot of the perpendicular from the origin."""
        return Point(self.a * self.c, self.b * self.c)

    def side(self, p: Point) -> float:
        """Signed distance; positive on the left (interior) side."""
        return self.a * p.x + self.b * p.y - self.c

    def reversed(self) -> "Line":
        return Line(-self.a, -self.b, -self.c)

    def project(self, p: Point) -> Point:
        s = self.side(p)
        return Point(p.x - s * self.a, p.y - s * self.b)

    def same_as(self, other: "Line", eps: float = DEFAULT.eps_geom) -> bool:
        return (
            abs(self.a - other.a) <= eps
            and abs(self.b - other.b) <= eps
            and abs(self.c - other.c) <= eps
        )


@dataclass(frozen=True, slots=True)
class Parallel:
    coincident: bool


def intersect_lines(l1: Line, l2: Line, eps: float = DEFAULT.eps_geom) -> Point | Parallel:
    det = l1.a * l2.b - l2.a * l1.b
    if abs(det) <= eps:
        return Parallel(coincident=abs(l2.side(l1.point)) <= eps)
    return Point((l1.c * l2.b - l2.c * l1.b) / det, (l1.a * l2.c - l2.a * l1.c) / det)


@dataclass(frozen=True)
class Similarity:
    """``x -> (x - center) / scale`` and back."""

    center: Point
    scale: float

    def forward(self, p: Point) -> Point:
        return Point((p.x - self.center.x) / self.scale, (p.y - self.center.y) / self.scale)

    def backward(self, p: Point) -> Point:
        return Point(p.x * self.scale + self.center.x, p.y * self.scale + self.center.y)

    def forward_line(self, line: Line) -> Line:
        return Line(line.a, line.b, (line.c - line.a * self.center.x - line.b * self.center.y) / self.scale)

    def backward_line(self, line: Line) -> Line:
        return Line(line.a, line.b, line.c * self.scale + line.a * self.center.x + line.b * self.center.y)


def diameter(points: Sequence[Point]) -> float:
    best = 0.0
    for i, p in enumerate(points):
        for q in points[i + 1:]:
            best = max(best, math.hypot(p.x - q.x, p.y - q.y))
    return best


def normalizing_similarity(points: Sequence[Point]) -> Similarity:
    n = len(points)
    center = Point(math.fsum(p.x for p in points) / n, math.fsum(p.y for p in points) / n)
    scale = diameter(points)
    if scale == 0.0:
        raise GeometryError("all points coincide")
    return Similarity(center, scale)


@dataclass(frozen=True)
class ConvexPolygon:
    """Strictly convex polygon with counterclockwise vertices ``p_0 .. p_{n-1}``.

    Indices are cyclic; side ``i`` runs from ``p_i`` to ``p_{i+1}``.
    """

    vertices: tuple[Point, ...]
    eps: float = field(default=DEFAULT.eps_geom, compare=False)

    def __post_init__(self):
        verts = tuple(as_point(v) for v in self.vertices)
        object.__setattr__(self, "vertices", verts)
        n = len(verts)
        if n < 3:
            raise GeometryError(f"polygon needs at least 3 vertices, got {n}")
        scale = diameter(verts)
        if scale == 0.0:
            raise GeometryError("degenerate polygon")
        if signed_area(verts) <= 0.0:
            raise GeometryError("vertices must be in counterclockwise order")
        limit = self.eps * scale * scale
        for i in range(n):
            if orient(verts[i - 1], verts[i], verts[(i + 1) % n]) <= limit:
                raise GeometryError(f"polygon is not strictly convex at vertex {i}")

    @classmethod
    def from_coords(cls, coords: Iterable, eps: float = DEFAULT.eps_geom) -> "ConvexPolygon":
        return cls(tuple(as_point(c) for c in coords), eps)

    @classmethod
    def from_json(cls, text: str, eps: float = DEFAULT.eps_geom) -> "ConvexPolygon":
        data = json.loads(text)
        if not isinstance(data, dict) or "vertices" not in data:
            raise GeometryError('polygon JSON must be an object with a "vertices" array')
        try:
            return cls.from_coords(data["vertices"], eps)
        except (TypeError, IndexError) as exc:
            raise GeometryError(f"malformed vertex list: {exc}") from None

    def to_json(self) -> str:
        return json.dumps({"vertices": [[p.x, p.y] for p in self.vertices]})

    @property
    def n(self) -> int:
        return len(self.vertices)

    def __len__(self) -> int:
        return len(self.vertices)

    def vertex(self, i: int) -> Point:
        return self.vertices[i % self.n]

    def side(self, i: int) -> tuple[Point, Point]:
        return self.vertex(i), self.vertex(i + 1)

    def sideline(self, i: int) -> Line:
        return Line.through(self.vertex(i), self.vertex(i + 1))

    @cached_property
    def area(self) -> float:
        return signed_area(self.vertices)

    @cached_property
    def scale(self) -> float:
        return diameter(self.vertices)

    def interior_angle(self, i: int) -> float:
        prev, cur, nxt = self.vertex(i - 1), self.vertex(i), self.vertex(i + 1)
        u, v = prev - cur, nxt - cur
        return math.atan2(abs(cross(u, v)), dot(u, v))

    def normalized(self) -> tuple["ConvexPolygon", Similarity]:
        sim = normalizing_similarity(self.vertices)
        return ConvexPolygon(tuple(sim.forward(p) for p in self.vertices), self.eps), sim

    def transformed(self, matrix, offset=(0.0, 0.0)) -> "ConvexPolygon":
        """Image under ``x -> M x + offset``; orientation is restored if det M < 0."""
        (m00, m01), (m10, m11) = matrix
        pts = [Point(m00 * p.x + m01 * p.y + offset[0], m10 * p.x + m11 * p.y + offset[1])
               for p in self.vertices]
        if m00 * m11 - m01 * m10 < 0:
            pts.reverse()
        return ConvexPolygon(tuple(pts), self.eps)


@dataclass(frozen=True)
class ExternalTriangle:
    side: int
    start: Point
    end: Point
    apex: Point | None
    bounded: bool

    @property
    def area(self) -> float:
        if not self.bounded:
            return math.inf
        return abs(signed_area([self.start, self.end, self.apex]))


def external_wedge(lines: Sequence[Line], i: int) -> tuple[Line, Line, Line]:
    """(previous, own, next) sidelines bounding the region facing side ``i``."""
    n = len(lines)
    return lines[(i - 1) % n], lines[i % n], lines[(i + 1) % n]


def in_external_region(p: Point, prev: Line, own: Line, nxt: Line, eps: float) -> bool:
    """Closed membership in the external triangle (or wedge) of ``own``."""
    return own.side(p) <= eps and prev.side(p) >= -eps and nxt.side(p) >= -eps


def external_triangle(P: ConvexPolygon, i: int) -> ExternalTriangle:
    prev, nxt = P.sideline(i - 1), P.sideline(i + 1)
    start, end = P.side(i)
    # the neighbouring sidelines meet beyond side i iff they turn by less than pi
    turn = cross(prev.direction, nxt.direction)
    if turn <= P.eps:
        return ExternalTriangle(i % P.n, start, end, None, False)
    apex = intersect_lines(prev, nxt, eps=0.0)
    return ExternalTriangle(i % P.n, start, end, apex, True)


def validate_input(P: ConvexPolygon, eps_angle: float = DEFAULT.eps_angle) -> list[Issue]:
    """Existence conditions for a maximum-area circumscribed polygon.

    Returns the list of failed conditions; an empty list means the optimum
    exists.
    """
    issues = []
    angles = [P.interior_angle(i) for i in range(P.n)]
    if any(angles[i] + angles[(i + 1) % P.n] <= math.pi + eps_angle for i in range(P.n)):
        issues.append(Issue.UNBOUNDED)
    if P.n < 5:
        issues.append(Issue.TOO_FEW_VERTICES)
    return issues


def require_valid(P: ConvexPolygon, eps_angle: float = DEFAULT.eps_angle) -> None:
    issues = validate_input(P, eps_angle)
    if Issue.UNBOUNDED in issues:
        raise UnboundedError(
            "no maximum exists: some pair of consecutive interior angles sums to at most pi",
            issues,
        )
    if issues:
        raise ValidationError("polygon needs at least five vertices", issues)


def point_on_boundary(Q: ConvexPolygon, p: Point, eps: float | None = None) -> bool:
    tol = (Q.eps if eps is None else eps) * Q.scale
    if not polygon_contains(Q, p, eps):
        return False
    return any(abs(Q.sideline(i).side(p)) <= tol for i in range(Q.n))


def polygon_contains(Q: ConvexPolygon, p: Point, eps: float | None = None) -> bool:
    tol = (Q.eps if eps is None else eps) * Q.scale
    return all(Q.sideline(i).side(p) >= -tol for i in range(Q.n))


def simplify_closed(points: Sequence[Point], eps: float) -> list[Point]:
    """Drop repeated vertices and vertices whose turn is below the convexity tolerance.

    A vertex ``b`` between ``a`` and ``c`` is dropped when
    ``|orient(a, b, c)| <= eps * diam**2``, the same test ConvexPolygon uses.
    """
    pts = list(points)
    if len(pts) < 3:
        return pts
    scale = diameter(pts)
    limit = eps * scale * scale
    changed = True
    while changed and len(pts) >= 3:
        changed = False
        n = len(pts)
        for k in range(n):
            a, b, c = pts[k - 1], pts[k], pts[(k + 1) % n]
            if b.close_to(a, eps * scale) or abs(orient(a, b, c)) <= limit:
                del pts[k]
                changed = True
                break
    return pts
