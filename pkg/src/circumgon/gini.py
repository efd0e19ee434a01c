"""Sharp Gini bounds from finitely many Lorenz-curve points.

The lower bound comes from the chord polyline through the data.  For the
upper bound, the region above a convex Lorenz curve inside the unit square
is a convex set whose boundary passes through every data point, so the
extremal curve is the lower boundary of a maximum-area circumscribed
polygon.  The square enters the slot list as two forced sides (x = 0 and
y = 1) and two zero-length phantom sides (y = 0 at the origin and x = 1 at
(1, 1)).
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from enum import Enum

from .config import DEFAULT, Config
from .geom import Line, Point, orient
from .solver import NoFeasibleSolution, Slot, SlotKind, SlotList, Solution, slot_used, solve_anchored

ORIGIN = Point(0.0, 0.0)
TOP_RIGHT = Point(1.0, 1.0)
TOP_LEFT = Point(0.0, 1.0)


class LorenzCode(str, Enum):
    NOT_CONVEX = "NOT_CONVEX"
    NOT_MONOTONE = "NOT_MONOTONE"
    BAD_RANGE = "BAD_RANGE"
    DUPLICATE_P = "DUPLICATE_P"


class LorenzError(ValueError):
    def __init__(self, code: LorenzCode, indices=(), detail: str = ""):
        self.code = LorenzCode(code)
        self.indices = tuple(indices)
        msg = f"{self.code.value}"
        if self.indices:
            msg += f" at indices {list(self.indices)}"
        if detail:
            msg += f": {detail}"
        super().__init__(msg)


@dataclass(frozen=True)
class LorenzData:
    """Validated Lorenz points from (0, 0) to (1, 1).

    ``collinear`` lists data segments that lie on a common line with a
    neighbour; every convex curve through the data contains them.
    """

    points: tuple[Point, ...]
    collinear: tuple[int, ...] = ()

    @property
    def m(self) -> int:
        return len(self.points) - 1

    @classmethod
    def from_pairs(cls, pairs, add_endpoints: bool = False, eps: float = DEFAULT.eps_geom) -> "LorenzData":
        pts = [Point(float(p), float(L)) for p, L in pairs]
        if add_endpoints:
            if not pts or not pts[0].close_to(ORIGIN, eps):
                pts.insert(0, ORIGIN)
            if not pts[-1].close_to(TOP_RIGHT, eps):
                pts.append(TOP_RIGHT)
        return cls(tuple(pts), _validate(pts, eps))

    def to_csv(self) -> str:
        return "".join(f"{p.x!r},{p.y!r}\n" for p in self.points)


def _validate(pts: list[Point], eps: float) -> tuple[int, ...]:
    if len(pts) < 2:
        raise LorenzError(LorenzCode.BAD_RANGE, detail="need at least the two endpoints")
    bad = [i for i, p in enumerate(pts) if not all(math.isfinite(v) and -eps <= v <= 1 + eps for v in p)]
    if bad:
        raise LorenzError(LorenzCode.BAD_RANGE, bad, "coordinates must lie in [0, 1]")
    if not pts[0].close_to(ORIGIN, eps) or not pts[-1].close_to(TOP_RIGHT, eps):
        raise LorenzError(LorenzCode.BAD_RANGE, detail="curve must start at (0, 0) and end at (1, 1)")
    dup = [i for i in range(1, len(pts)) if abs(pts[i].x - pts[i - 1].x) <= eps]
    if dup:
        raise LorenzError(LorenzCode.DUPLICATE_P, dup, "repeated p value")
    back = [i for i in range(1, len(pts)) if pts[i].x < pts[i - 1].x or pts[i].y < pts[i - 1].y - eps]
    if back:
        raise LorenzError(LorenzCode.NOT_MONOTONE, back, "p must increase and L must not decrease")
    concave, collinear = [], set()
    for i in range(1, len(pts) - 1):
        turn = orient(pts[i - 1], pts[i], pts[i + 1])
        if turn < -eps:
            concave.append(i)
        elif turn <= eps:
            collinear.update((i - 1, i))
    if concave:
        raise LorenzError(LorenzCode.NOT_CONVEX, concave, "slopes must not decrease")
    return tuple(sorted(collinear))


def parse_lorenz(text: str, add_endpoints: bool = False, eps: float = DEFAULT.eps_geom) -> LorenzData:
    """Read ``p,L`` rows; a non-numeric first row is treated as a header."""
    pairs = []
    for k, row in enumerate(csv.reader(io.StringIO(text))):
        cells = [c.strip() for c in row if c.strip()]
        if not cells:
            continue
        try:
            if len(cells) != 2:
                raise ValueError
            pairs.append((float(cells[0]), float(cells[1])))
        except ValueError:
            if k == 0 and not pairs:
                continue
            raise LorenzError(LorenzCode.BAD_RANGE, (len(pairs),), f"cannot parse row {row!r}") from None
    return LorenzData.from_pairs(pairs, add_endpoints, eps)


def gini_lower(data: LorenzData) -> tuple[float, list[Point]]:
    pts = list(data.points)
    under = math.fsum((b.x - a.x) * (a.y + b.y) / 2 for a, b in zip(pts, pts[1:]))
    return 1.0 - 2.0 * under, pts


@dataclass(frozen=True)
class LorenzSlots:
    """Slot list for the upper bound plus the bookkeeping to read results back."""

    slots: SlotList
    segment_slot: tuple[int, ...]  # data segment -> slot index
    bottom: int | None  # phantom slot on y = 0, absent if the first segment is horizontal
    right: int


def build_lorenz_slots(data: LorenzData, eps: float = DEFAULT.eps_geom) -> LorenzSlots:
    pts = data.points
    m = data.m
    collinear = set(data.collinear)
    # group maximal runs of collinear segments into one slot
    groups: list[list[int]] = []
    for s in range(m):
        joined = groups and s in collinear and (s - 1) in collinear and \
            abs(orient(pts[s - 1], pts[s], pts[s + 1])) <= eps
        if joined:
            groups[-1].append(s)
        else:
            groups.append([s])

    points = list(pts) + [TOP_LEFT]
    top_left = len(points) - 1
    slots: list[Slot] = []
    seg_slot = [0] * m
    first = pts[groups[0][0]], pts[groups[0][-1] + 1]
    flat_start = abs(first[1].y - first[0].y) <= eps
    bottom = None
    if not flat_start:
        bottom = len(slots)
        slots.append(Slot(Line.from_point_direction(ORIGIN, Point(1.0, 0.0)), ORIGIN, ORIGIN, SlotKind.PHANTOM, covers=(0,), label="bottom"))
    for g in groups:
        a, b = pts[g[0]], pts[g[-1] + 1]
        forced = len(g) > 1 or g[0] in collinear or (flat_start and g is groups[0])
        for s in g:
            seg_slot[s] = len(slots)
        slots.append(Slot(Line.through(a, b), a, b, SlotKind.REAL, forced,
                          tuple(range(g[0], g[-1] + 2)), label="D" + ",".join(map(str, g))))
    right = len(slots)
    slots.append(Slot(Line.from_point_direction(TOP_RIGHT, Point(0.0, 1.0)), TOP_RIGHT, TOP_RIGHT, SlotKind.PHANTOM, covers=(m,), label="right"))
    slots.append(Slot(Line.through(TOP_RIGHT, TOP_LEFT), TOP_RIGHT, TOP_LEFT, forced=True,
                      covers=(m, top_left), label="top"))
    slots.append(Slot(Line.through(TOP_LEFT, ORIGIN), TOP_LEFT, ORIGIN, forced=True,
                      covers=(top_left, 0), label="left"))
    return LorenzSlots(SlotList(tuple(slots), tuple(points), eps), tuple(seg_slot), bottom, right)


@dataclass(frozen=True)
class GiniBounds:
    lower: float
    upper: float
    lower_chain: tuple[Point, ...]
    upper_chain: tuple[Point, ...]
    pattern: str
    phantoms_used: tuple[bool, bool]
    area: float

    def to_dict(self) -> dict:
        return {
            "gini_lower": self.lower,
            "gini_upper": self.upper,
            "lower_chain": [[p.x, p.y] for p in self.lower_chain],
            "upper_chain": [[p.x, p.y] for p in self.upper_chain],
            "pattern": self.pattern,
            "phantoms_used": list(self.phantoms_used),
        }


def _lower_boundary(sol: Solution, tol: float) -> list[Point]:
    """Vertices of the optimum from the origin counterclockwise to (1, 1)."""
    verts = list(sol.polygon.vertices)
    n = len(verts)
    start = min(range(n), key=lambda k: (verts[k] - ORIGIN).norm())
    chain = []
    for k in range(n + 1):
        p = verts[(start + k) % n]
        chain.append(p)
        if p.close_to(TOP_RIGHT, tol):
            break
    return chain


def _upper(data: LorenzData, config: Config):
    ls = build_lorenz_slots(data, config.eps_geom)
    try:
        sol = solve_anchored(ls.slots, config=config)
    except NoFeasibleSolution as exc:  # pragma: no cover - the chord polyline is always feasible
        raise AssertionError("the data polyline should always be feasible") from exc
    tol = 4 * config.eps_geom
    used = [slot_used(sol.polygon, s, tol) for s in ls.slots.slots]
    pattern = "".join("U" if used[ls.segment_slot[s]] else "N" for s in range(data.m))
    phantoms = (True if ls.bottom is None else used[ls.bottom], used[ls.right])
    return 2.0 * sol.area - 1.0, _lower_boundary(sol, tol), pattern, phantoms, sol


def gini_upper(data: LorenzData, config: Config = DEFAULT) -> tuple[float, list[Point], str, tuple[bool, bool]]:
    """Upper bound, extremal chain, data-segment pattern and phantom usage."""
    return _upper(data, config)[:4]


def gini_bounds(data: LorenzData, config: Config = DEFAULT) -> GiniBounds:
    lower, lchain = gini_lower(data)
    upper, uchain, pattern, phantoms, sol = _upper(data, config)
    return GiniBounds(lower, upper, tuple(lchain), tuple(uchain), pattern, phantoms, sol.area)


def farris_example(n: int) -> LorenzData:
    """Quarter arc of the regular n-gon centred at (0, 1) with a vertex at the origin."""
    if n < 12 or n % 8 != 4:
        raise ValueError(f"n must be at least 12 with n = 4 (mod 8), got {n}")
    pts = []
    for k in range(n // 4 + 1):
        a = -math.pi / 2 + 2 * math.pi * k / n
        pts.append((math.cos(a), 1.0 + math.sin(a)))
    pts[0], pts[-1] = (0.0, 0.0), (1.0, 1.0)
    return LorenzData.from_pairs(pts)
