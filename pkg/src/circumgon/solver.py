"""Interval dynamic program for maximum-area circumscribed polygons.

The DP runs over a cyclic list of *slots*: sidelines that the circumscribed
polygon may (or, when forced, must) contain.  For a plain convex polygon the
slots are its sides.  A phantom slot is a zero-length side: a constraint
line through one vertex, used to express box constraints.

``gain[i, k]`` is the largest area added to the base polygon between slots
``i`` and ``i + k``, both used, with the slots strictly in between optional.
Either no slot in between is used (Type 0: a midpoint chain), or the span
splits at the first used slot ``i + alpha``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Sequence

import numpy as np

from .chains import (
    ChainKind,
    FeasibleRegion,
    MidpointChain,
    all_n_feasible_region,
    chain_feasible,
    closed_chain,
    family_representative,
    open_chain,
    reflect_chain,
)
from .config import DEFAULT, Config
from .geom import (
    ConvexPolygon,
    GeometryError,
    Line,
    Point,
    Similarity,
    cross,
    diameter,
    normalizing_similarity,
    require_valid,
    signed_area,
    simplify_closed,
)

TYPE0 = -1


class NoFeasibleSolution(RuntimeError):
    pass


class SlotKind(str, Enum):
    REAL = "real"
    PHANTOM = "phantom"


@dataclass(frozen=True)
class Slot:
    line: Line
    start: Point
    end: Point
    kind: SlotKind = SlotKind.REAL
    forced: bool = False
    covers: tuple[int, ...] = ()
    label: str = ""


@dataclass(frozen=True)
class SlotList:
    """Cyclic list of slots; slot ``s`` runs from ``w_s`` to ``w_{s+1}``.

    ``points`` are the vertices that must end up on the boundary of the
    circumscribed polygon; ``covers`` of each slot index into it.
    """

    slots: tuple[Slot, ...]
    points: tuple[Point, ...]
    eps: float = field(default=DEFAULT.eps_geom, compare=False)

    def __post_init__(self):
        n = len(self.slots)
        if n < 3:
            raise GeometryError("a slot list needs at least 3 slots")
        tol = self.eps * self.scale
        for s in range(n):
            cur, nxt = self.slots[s], self.slots[(s + 1) % n]
            if not cur.end.close_to(nxt.start, tol):
                raise GeometryError(f"slots {s} and {(s + 1) % n} do not share an anchor")
            if cross(cur.line.direction, nxt.line.direction) <= self.eps:
                raise GeometryError(f"slot directions must turn strictly left at slot {s}")
            for p in (cur.start, cur.end):
                if abs(cur.line.side(p)) > tol:
                    raise GeometryError(f"anchor of slot {s} is off its line")
        turning = sum(
            math.atan2(cross(a, b), a.x * b.x + a.y * b.y)
            for a, b in ((self.slots[s].line.direction, self.slots[(s + 1) % n].line.direction)
                         for s in range(n))
        )
        if abs(turning - 2 * math.pi) > 1e-6:
            raise GeometryError("slot directions must wind exactly once")

    @classmethod
    def from_polygon(cls, P: ConvexPolygon) -> "SlotList":
        slots = tuple(
            Slot(P.sideline(i), P.vertex(i), P.vertex(i + 1), covers=(i, (i + 1) % P.n), label=f"S{i}")
            for i in range(P.n)
        )
        return cls(slots, P.vertices, P.eps)

    def __len__(self) -> int:
        return len(self.slots)

    def __getitem__(self, s: int) -> Slot:
        return self.slots[s % len(self.slots)]

    def sideline(self, s: int) -> Line:
        return self[s].line

    def vertex(self, s: int) -> Point:
        """``w_s``, the shared anchor of slots ``s - 1`` and ``s``."""
        return self[s].start

    @cached_property
    def scale(self) -> float:
        return diameter(self.points)

    @cached_property
    def base_area(self) -> float:
        return signed_area(simplify_closed([s.start for s in self.slots], 0.0))

    @property
    def forced(self) -> list[int]:
        return [s for s, slot in enumerate(self.slots) if slot.forced]

    @property
    def optional(self) -> list[int]:
        return [s for s, slot in enumerate(self.slots) if not slot.forced]

    def transformed(self, sim: Similarity) -> "SlotList":
        slots = tuple(
            Slot(sim.forward_line(s.line), sim.forward(s.start), sim.forward(s.end),
                 s.kind, s.forced, s.covers, s.label)
            for s in self.slots
        )
        return SlotList(slots, tuple(sim.forward(p) for p in self.points), self.eps)

    def normalized(self) -> tuple["SlotList", Similarity]:
        sim = normalizing_similarity(self.points)
        return self.transformed(sim), sim

    def interior_forced(self, i: int, j: int) -> bool:
        n = len(self)
        return any(self[s].forced for s in range(i + 1, j)) if j - i <= n else True

    def arrays(self):
        w = np.array([[s.start.x, s.start.y] for s in self.slots])
        nrm = np.array([[s.line.a, s.line.b] for s in self.slots])
        off = np.array([s.line.c for s in self.slots])
        dirs = np.column_stack([nrm[:, 1], -nrm[:, 0]])
        return w, nrm, off, dirs


@dataclass(frozen=True)
class Type0:
    gain: float
    chain: MidpointChain
    family: bool


def type0_gain(slots: SlotList, i: int, j: int, eps: float | None = None) -> Type0 | None:
    """Best chain between used slots ``i`` and ``j`` using no slot in between.

    Straightforward O(j - i) evaluation through ``open_chain``; returns None
    when no convex chain exists.
    """
    eps = slots.eps if eps is None else eps
    n = len(slots)
    if not (i < j <= i + n):
        raise ValueError("need i < j <= i + n")
    if slots.interior_forced(i, j):
        return None
    mids = [slots.vertex(s) for s in range(i + 2, j)]
    res = open_chain(slots.sideline(i), slots.vertex(i + 1), mids, slots.sideline(j), slots.vertex(j),
                     eps=eps)
    if res.kind is ChainKind.NONE:
        return None
    if res.kind is ChainKind.FAMILY:
        rep = family_representative(res, slots, i + 1, eps)
        if rep is None:
            return None
        return Type0(rep.gain, rep.chain, True)
    if not chain_feasible(res.chain, slots, i + 1, eps):
        return None
    return Type0(res.gain, res.chain, False)


def _type0_row(w, nrm, off, dirs, forced, i: int, eps: float, tol: float):
    """Type-0 gains for spans ``(i, i + k)``, k = 2..n, in O(n) vectorised work.

    Every chain vertex is ``sign_m * (A + t D) + c_m`` with ``q_0 = A + t D``
    on slot ``i``'s line, so each external-region constraint is an interval
    in ``t`` and the shoelace gain is affine in ``q_0``.
    """
    n = len(w)
    m = np.arange(n - 1)
    sign = np.where(m % 2 == 0, 1.0, -1.0)
    A = w[(i + 1) % n]
    D = dirs[i]
    mids = w[(i + 2 + m[:-1]) % n]                    # midpoint between q_m and q_{m+1}
    S = np.zeros((n - 1, 2))
    S[1:] = np.cumsum(-sign[:-1, None] * mids, axis=0)  # sign_m * c_m / 2
    c = 2.0 * sign[:, None] * S

    face = (i + 1 + m) % n
    lo = np.full(n - 1, -np.inf)
    hi = np.full(n - 1, np.inf)
    dead = np.zeros(n - 1, dtype=bool)
    with np.errstate(divide="ignore", invalid="ignore"):
        for lines, flip in (((face - 1) % n, 1.0), (face, -1.0), ((face + 1) % n, 1.0)):
            nl = nrm[lines]
            slope = flip * sign * (nl @ D)
            value = flip * (sign * (nl @ A) + np.einsum("ij,ij->i", nl, c) - off[lines])
            bound = (-tol - value) / slope
            lo = np.where(slope > 0, np.maximum(lo, bound), lo)
            hi = np.where(slope < 0, np.minimum(hi, bound), hi)
            dead |= (slope == 0) & (value < -tol)
    LO = np.maximum.accumulate(lo)
    HI = np.minimum.accumulate(hi)
    DEAD = np.logical_or.accumulate(dead | (lo > hi))

    target = (i + 2 + m) % n
    nt = nrm[target]
    slope = sign * (nt @ D)
    value = sign * (nt @ A) + np.einsum("ij,ij->i", nt, c) - off[target]
    parallel = np.abs(dirs[target] @ np.array([-D[1], D[0]])) <= eps
    with np.errstate(divide="ignore", invalid="ignore"):
        t_unique = -value / slope
        finite_lo, finite_hi = np.isfinite(LO), np.isfinite(HI)
        t_family = np.where(finite_lo & finite_hi, 0.5 * (LO + HI),
                            np.where(finite_lo, LO, np.where(finite_hi, HI, 0.0)))
    t = np.where(parallel, t_family, t_unique)
    ok = ~DEAD & np.where(parallel, np.abs(value) <= tol, (t >= LO) & (t <= HI))

    # no forced slot strictly inside the span
    blocked = np.logical_or.accumulate(forced[(i + 1 + m) % n])
    ok &= ~blocked

    q0 = A[None, :] + t[:, None] * D[None, :]
    qm = sign[:, None] * q0 + c
    wj = w[target]
    K = np.zeros(n - 1)
    K[1:] = np.cumsum(c[:-1, 0] * c[1:, 1] - c[:-1, 1] * c[1:, 0])
    wa, wb = w[(i + 1 + m) % n], w[(i + 2 + m) % n]
    edges = wa[:, 0] * wb[:, 1] - wa[:, 1] * wb[:, 0]
    PE = np.cumsum(edges)
    V = -S
    twice = (
        t * (A[0] * D[1] - A[1] * D[0])
        + 2.0 * (q0[:, 0] * V[:, 1] - q0[:, 1] * V[:, 0])
        + K
        + (qm[:, 0] * wj[:, 1] - qm[:, 1] * wj[:, 0])
        - PE
    )
    gain = np.where(ok, 0.5 * twice, -np.inf)
    return gain, np.where(ok, t, np.nan), ok & parallel


@dataclass
class DpTable:
    """``gain[i, k]`` with backpointers; ``back`` is TYPE0, 0 (adjacent) or a split ``alpha``."""

    gain: np.ndarray
    back: np.ndarray
    type0: np.ndarray
    param: np.ndarray
    family: np.ndarray
    slots: SlotList
    tie_tol: float

    @property
    def n(self) -> int:
        return len(self.slots)

    def pieces(self, anchor: int) -> list[tuple[int, int]]:
        """Spans ``(i, k)`` of the optimum anchored at ``anchor``, in cyclic order."""
        out = []
        stack = [(anchor % self.n, self.n)]
        while stack:
            i, k = stack.pop()
            b = self.back[i, k]
            if k == 1 or b == TYPE0:
                out.append((i, k))
            else:
                stack.append(((i + b) % self.n, k - b))
                stack.append((i, b))
        return out

    def used(self, anchor: int) -> list[bool]:
        flags = [False] * self.n
        for i, k in self.pieces(anchor):
            flags[i] = True
            flags[(i + k) % self.n] = True
        return flags

    def optimal_patterns(self, anchor: int, cap: int = 256) -> set[frozenset[int]]:
        """All used-slot sets reaching ``gain[anchor, n]`` within the tie tolerance."""
        memo: dict[tuple[int, int], set[frozenset[int]]] = {}

        def walk(i: int, k: int) -> set[frozenset[int]]:
            key = (i, k)
            if key in memo:
                return memo[key]
            target = self.gain[i, k]
            out: set[frozenset[int]] = set()
            if k == 1:
                out.add(frozenset())
            else:
                if self.type0[i, k] >= target - self.tie_tol:
                    out.add(frozenset())
                for a in range(1, k):
                    j = (i + a) % self.n
                    if self.gain[i, a] + self.gain[j, k - a] >= target - self.tie_tol:
                        for left in walk(i, a):
                            for right in walk(j, k - a):
                                out.add(left | right | {j})
                                if len(out) >= cap:
                                    break
                    if len(out) >= cap:
                        break
            memo[key] = out
            return out

        return {s | {anchor % self.n} for s in walk(anchor % self.n, self.n)}


def dp_all_pairs(slots: SlotList, config: Config = DEFAULT) -> DpTable:
    """Fill the gain table by increasing span length (slots should be normalized)."""
    n = len(slots)
    eps = config.eps_geom
    tol = eps * slots.scale
    w, nrm, off, dirs = slots.arrays()
    forced = np.array([s.forced for s in slots.slots])
    type0 = np.full((n, n + 1), -np.inf)
    param = np.full((n, n + 1), np.nan)
    family = np.zeros((n, n + 1), dtype=bool)
    for i in range(n):
        g, t, fam = _type0_row(w, nrm, off, dirs, forced, i, eps, tol)
        type0[i, 2:] = g
        param[i, 2:] = t
        family[i, 2:] = fam

    tie = config.tie_tol * max(abs(slots.base_area), 1e-300)
    gain = np.full((n, n + 1), -np.inf)
    back = np.zeros((n, n + 1), dtype=np.int64)
    gain[:, 1] = 0.0
    rows = np.arange(n)[:, None]
    for k in range(2, n + 1):
        alphas = np.arange(1, k)
        split = gain[:, 1:k] + gain[(rows + alphas) % n, k - alphas]
        best = split.max(axis=1)
        first = np.argmax(split >= (best - tie)[:, None], axis=1)
        t0, fam = type0[:, k], family[:, k]
        # a family's boundary members are split configurations of equal area
        take = np.where(fam, t0 > best + tie, t0 >= best - tie)
        gain[:, k] = np.where(take, t0, split[np.arange(n), first])
        back[:, k] = np.where(take, TYPE0, first + 1)
    return DpTable(gain, back, type0, param, family, slots, tie)


@dataclass
class Solution:
    polygon: ConvexPolygon
    area: float
    pattern: tuple[bool, ...]
    un_sequence: str
    classification: tuple[str, ...]
    slots: SlotList
    dp_area: float
    ties: tuple[str, ...] = ()
    family: FeasibleRegion | None = None
    kind: str = "sides"

    @property
    def vertices(self) -> tuple[Point, ...]:
        return self.polygon.vertices

    def to_dict(self) -> dict:
        return {
            "area": self.area,
            "polygon": [[p.x, p.y] for p in self.polygon.vertices],
            "un_sequence": self.un_sequence,
            "classification": list(self.classification),
            "ties": list(self.ties),
        }


def _pattern_string(flags: Sequence[bool]) -> str:
    return "".join("U" if f else "N" for f in flags)


def _chain_for(table: DpTable, i: int, k: int) -> list[Point]:
    slots = table.slots
    n = len(slots)
    line = slots.sideline(i)
    q0 = slots.vertex(i + 1) + line.direction * float(table.param[i, k])
    mids = [slots.vertex(s) for s in range(i + 2, i + k)]
    return reflect_chain(q0, mids)


def _boundary_vertices(table: DpTable, anchor: int) -> list[Point]:
    slots = table.slots
    pts: list[Point] = []
    for i, k in table.pieces(anchor):
        if k == 1:
            pts.append(slots.vertex(i + 1))
        else:
            pts.extend(_chain_for(table, i, k))
    return pts


def _on_line(line: Line, p: Point, tol: float) -> bool:
    return abs(line.side(p)) <= tol


def slot_used(Q: ConvexPolygon, slot: Slot, tol: float) -> bool:
    """Whether the slot's segment (or, for a phantom, a nondegenerate piece of its line) lies on the boundary."""
    verts = Q.vertices
    n = len(verts)
    for k in range(n):
        a, b = verts[k], verts[(k + 1) % n]
        edge = Line.through(a, b)
        if not (_on_line(edge, slot.start, tol) and _on_line(edge, slot.end, tol)):
            continue
        if slot.kind is SlotKind.PHANTOM:
            if _on_line(slot.line, a, tol) and _on_line(slot.line, b, tol) and not a.close_to(b, tol):
                return True
        else:
            return True
    return False


def _finish(slots_orig: SlotList, boundary: list[Point], dp_area: float, pattern, config: Config,
            ties=(), family=None, kind="sides") -> Solution:
    eps = config.eps_geom
    ring = simplify_closed(boundary, eps)
    area = signed_area(boundary)
    Q = ConvexPolygon(tuple(ring), eps)
    tol = eps * Q.scale
    used = [slot_used(Q, s, tol) for s in slots_orig.slots]
    real = [u for u, s in zip(used, slots_orig.slots) if s.kind is SlotKind.REAL]
    touching: dict[int, bool] = {}
    for u, s in zip(used, slots_orig.slots):
        for idx in s.covers:
            touching[idx] = touching.get(idx, False) or u
    classification = tuple("USED" if touching.get(idx, False) else "MIDPOINT"
                           for idx in range(len(slots_orig.points)))
    return Solution(Q, area, tuple(pattern), _pattern_string(real), classification, slots_orig,
                    dp_area, tuple(ties), family, kind)


def solve_anchored(slots: SlotList, anchor: int | None = None, config: Config = DEFAULT,
                   table: DpTable | None = None) -> Solution:
    """Best circumscribed polygon using every forced slot (and ``anchor``)."""
    if anchor is None:
        forced = slots.forced
        if not forced:
            raise ValueError("solve_anchored needs a forced slot or an explicit anchor")
        anchor = forced[0]
    norm, sim = slots.normalized()
    if table is None:
        table = dp_all_pairs(norm, config)
    value = table.gain[anchor, len(slots)]
    if not np.isfinite(value):
        raise NoFeasibleSolution("every configuration is infeasible")
    boundary = [sim.backward(p) for p in _boundary_vertices(table, anchor)]
    dp_area = (norm.base_area + value) * sim.scale ** 2
    return _finish(slots, boundary, dp_area, table.used(anchor), config)


def solve_max_area(P: ConvexPolygon, config: Config = DEFAULT, all_optima: bool = False) -> Solution:
    """Maximum-area convex polygon circumscribed about ``P``."""
    require_valid(P, config.eps_angle)
    slots = SlotList.from_polygon(P)
    normP, sim = P.normalized()
    norm = slots.transformed(sim)
    table = dp_all_pairs(norm, config)
    n = P.n
    final = table.gain[:, n]
    best = final.max()
    anchors = np.flatnonzero(final >= best - table.tie_tol)
    anchor = int(anchors[0])
    best_value = normP.area + final[anchor]

    # no side used: closed midpoint chains
    family = None
    closed_candidate = None
    closed = closed_chain(normP, eps=config.eps_geom)
    if closed.kind is ChainKind.UNIQUE:
        if chain_feasible(closed.chain, normP, -1, config.eps_geom):
            closed_candidate = (closed.chain.signed_area, list(closed.chain.vertices[:-1]))
    elif closed.kind is ChainKind.FAMILY:
        region = all_n_feasible_region(normP, config.eps_geom)
        if not region.empty and region.area > 0.0:
            start = region.centroid
            rep = closed_chain(normP, start, config.eps_geom)
            closed_candidate = (rep.area, list(rep.chain.vertices[:-1]))
            family = FeasibleRegion(tuple(sim.backward(p) for p in region.vertices))

    ties: list[str] = []
    if all_optima:
        seen = set()
        for a in anchors:
            for used in table.optimal_patterns(int(a)):
                seen.add(_pattern_string([s in used for s in range(n)]))
        ties = sorted(seen)
    if closed_candidate is not None and closed_candidate[0] > best_value + table.tie_tol:
        boundary = [sim.backward(p) for p in closed_candidate[1]]
        sol = _finish(slots, boundary, closed_candidate[0] * sim.scale ** 2, [False] * n, config,
                      ties, family, kind="closed")
        return sol
    if all_optima and closed_candidate is not None and closed_candidate[0] >= best_value - table.tie_tol:
        ties.append("N" * n)
    boundary = [sim.backward(p) for p in _boundary_vertices(table, anchor)]
    return _finish(slots, boundary, best_value * sim.scale ** 2, table.used(anchor), config, ties, family)


def un_sequence(sol: Solution) -> str:
    return sol.un_sequence


def dihedral_orbit(pattern: str) -> set[str]:
    n = len(pattern)
    out = set()
    for s in (pattern, pattern[::-1]):
        for r in range(n):
            out.add(s[r:] + s[:r])
    return out


def same_orbit(a: str, b: str) -> bool:
    return len(a) == len(b) and a in dihedral_orbit(b)


def has_uuu(pattern: str) -> bool:
    """Three cyclically consecutive U's."""
    n = len(pattern)
    return n >= 3 and any(pattern[k] == pattern[(k + 1) % n] == pattern[(k + 2) % n] == "U" for k in range(n))
