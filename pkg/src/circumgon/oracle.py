"""Independent ground truth for the solver.

``brute_force_max`` tries every used/unused assignment of the optional
slots.  With the used set fixed, each run of unused slots between two used
ones admits at most one optimal chain (or a family of equal area), so each
assignment is evaluated exactly.  Runs are solved with the chain routines
directly; nothing here touches the DP.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .chains import (
    ChainKind,
    all_n_feasible_region,
    chain_feasible,
    closed_chain,
    family_representative,
    open_chain,
)
from .config import DEFAULT, Config
from .geom import ConvexPolygon, Point, signed_area, simplify_closed
from .solver import SlotKind, SlotList


class LimitExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class PatternResult:
    mask: str
    area: float | None
    pieces: tuple[tuple[Point, ...], ...] = ()

    @property
    def feasible(self) -> bool:
        return self.area is not None


@dataclass(frozen=True)
class OracleResult:
    area: float
    mask: str
    table: tuple[PatternResult, ...]

    def best(self) -> PatternResult:
        return next(r for r in self.table if r.mask == self.mask)


def _solve_run(slots: SlotList, u: int, v: int, eps: float):
    """Chain between used slots ``u`` and ``v`` (``u < v <= u + n``)."""
    mids = [slots.vertex(s) for s in range(u + 2, v)]
    res = open_chain(slots.sideline(u), slots.vertex(u + 1), mids, slots.sideline(v), slots.vertex(v),
                     eps=eps)
    if res.kind is ChainKind.NONE:
        return None
    if res.kind is ChainKind.FAMILY:
        res = family_representative(res, slots, u + 1, eps)
        return None if res is None else (res.gain, res.chain.vertices)
    if not chain_feasible(res.chain, slots, u + 1, eps):
        return None
    return res.gain, res.chain.vertices


def _closed_case(slots: SlotList, eps: float):
    """Nothing used: only meaningful for an ordinary polygon."""
    if any(s.kind is not SlotKind.REAL or s.forced for s in slots.slots):
        return None
    P = ConvexPolygon(tuple(slots.vertex(s) for s in range(len(slots))), eps)
    res = closed_chain(P, eps=eps)
    if res.kind is ChainKind.UNIQUE:
        if chain_feasible(res.chain, P, -1, eps):
            return res.area, res.chain.vertices[:-1]
        return None
    if res.kind is ChainKind.FAMILY:
        region = all_n_feasible_region(P, eps)
        if region.empty or region.area <= 0.0:
            return None
        rep = closed_chain(P, region.centroid, eps)
        return rep.area, rep.chain.vertices[:-1]
    return None


def brute_force_max(slots: SlotList | ConvexPolygon, limit: int | None = None,
                    config: Config = DEFAULT, keep_pieces: bool = False) -> OracleResult:
    """Exhaustive maximum over all used-slot masks.

    Masks are strings over the full slot list ("U" used, "N" not); forced
    slots are always "U".  Areas are reported in the caller's coordinates.
    """
    if isinstance(slots, ConvexPolygon):
        slots = SlotList.from_polygon(slots)
    limit = config.max_optional_slots if limit is None else limit
    optional = slots.optional
    if len(optional) > limit:
        raise LimitExceeded(f"{len(optional)} optional slots exceed the limit of {limit}")
    norm, sim = slots.normalized()
    eps = config.eps_geom
    n = len(norm)
    base = norm.base_area
    s2 = sim.scale ** 2
    runs: dict[tuple[int, int], tuple | None] = {}

    def run(u: int, v: int):
        key = (u, v)
        if key not in runs:
            runs[key] = _solve_run(norm, u, v, eps)
        return runs[key]

    table = []
    best_area, best_mask = -math.inf, None
    tie = config.tie_tol * abs(base) * s2
    for bits in range(2 ** len(optional)):
        used = [s.forced for s in norm.slots]
        for b, s in enumerate(optional):
            if bits >> b & 1:
                used[s] = True
        mask = "".join("U" if u else "N" for u in used)
        idx = [s for s in range(n) if used[s]]
        if not idx:
            closed = _closed_case(norm, eps)
            area = None if closed is None else closed[0] * s2
            pieces = () if closed is None else (tuple(closed[1]),)
        else:
            total, pieces, ok = 0.0, [], True
            for a, u in enumerate(idx):
                v = idx[a + 1] if a + 1 < len(idx) else idx[0] + n
                if v == u + 1:
                    pieces.append((norm.vertex(u + 1),))
                    continue
                r = run(u, v)
                if r is None:
                    ok = False
                    break
                total += r[0]
                pieces.append(tuple(r[1]))
            area = (base + total) * s2 if ok else None
        if area is not None:
            better = area > best_area + tie or (abs(area - best_area) <= tie and mask < best_mask)
            if better:
                best_area, best_mask = area, mask
        kept = tuple(tuple(sim.backward(p) for p in piece) for piece in pieces) if (
            area is not None and keep_pieces) else ()
        table.append(PatternResult(mask, area, kept))
    if best_mask is None:
        raise RuntimeError("no feasible mask")
    return OracleResult(best_area, best_mask, tuple(table))


def assemble(result: PatternResult, eps: float = DEFAULT.eps_geom) -> ConvexPolygon:
    """Polygon of a feasible mask (needs ``keep_pieces=True``)."""
    pts = [p for piece in result.pieces for p in piece]
    return ConvexPolygon(tuple(simplify_closed(pts, eps)), eps)


def pattern_area(result: PatternResult) -> float:
    return signed_area([p for piece in result.pieces for p in piece])


def regular_ngon(n: int, circumradius: float = 1.0) -> ConvexPolygon:
    if n < 3:
        raise ValueError("a regular polygon needs n >= 3")
    return ConvexPolygon.from_coords(
        [(circumradius * math.cos(2 * math.pi * k / n + math.pi / 2),
          circumradius * math.sin(2 * math.pi * k / n + math.pi / 2)) for k in range(n)]
    )


def regular_closed_form(n: int) -> tuple[float, str]:
    """Optimal area and a representative UN pattern for the unit-circumradius regular n-gon."""
    if n < 5:
        raise ValueError("closed forms need n >= 5")
    t = math.pi / n
    k = math.sin(t) ** 4 / math.cos(t) ** 2
    base = n * math.tan(t)
    if n % 2 == 0:
        return base + n / 2 * k * math.tan(2 * t), "UN" * (n // 2)
    if (n - 1) % 4 == 0:
        area = base + k * ((n + 3) / 4 * math.tan(2 * t) - math.tan(3 * math.pi / (2 * n)))
        gap = (n - 5) // 2
    else:
        area = base + k * ((n + 1) / 4 * math.tan(2 * t) - math.tan(math.pi / (2 * n)))
        gap = (n - 3) // 2
    head = "U" + "N" * gap
    return area, head + "UN" * ((n - len(head)) // 2)
