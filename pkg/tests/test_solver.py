import math

import numpy as np
import pytest

from circumgon.config import Config
from circumgon.geom import ConvexPolygon, GeometryError, Line, Point, UnboundedError, point_on_boundary
from circumgon.gini import build_lorenz_slots, parse_lorenz
from circumgon.oracle import regular_closed_form, regular_ngon
from circumgon.solver import (
    Slot,
    SlotList,
    dihedral_orbit,
    dp_all_pairs,
    has_uuu,
    same_orbit,
    solve_anchored,
    solve_max_area,
    type0_gain,
)

from polygen import random_lorenz, random_valid_polygon


def _compare_rows(slots: SlotList):
    norm, _ = slots.normalized()
    table = dp_all_pairs(norm)
    n = len(norm)
    for i in range(n):
        for k in range(2, n + 1):
            slow = type0_gain(norm, i, i + k)
            fast = table.type0[i, k]
            if slow is None:
                assert fast == -np.inf, (i, k)
            else:
                assert fast == pytest.approx(slow.gain, abs=1e-10), (i, k)
                assert bool(table.family[i, k]) == slow.family


@pytest.mark.parametrize("seed", range(6))
def test_vectorised_type0_matches_reference_on_polygons(seed):
    rng = np.random.default_rng(seed)
    P = random_valid_polygon(rng, int(rng.integers(5, 11)))
    _compare_rows(SlotList.from_polygon(P))


@pytest.mark.parametrize("n", [6, 8])
def test_vectorised_type0_matches_reference_with_families(n):
    _compare_rows(SlotList.from_polygon(regular_ngon(n)))


@pytest.mark.parametrize("seed", range(4))
def test_vectorised_type0_matches_reference_on_lorenz_slots(seed):
    rng = np.random.default_rng(100 + seed)
    _compare_rows(build_lorenz_slots(random_lorenz(rng, int(rng.integers(1, 7)))).slots)


@pytest.mark.parametrize("seed", range(15))
def test_solution_is_a_valid_circumscribed_polygon(seed):
    rng = np.random.default_rng(1000 + seed)
    P = random_valid_polygon(rng, int(rng.integers(5, 13)))
    sol = solve_max_area(P)
    Q = sol.polygon
    assert all(point_on_boundary(Q, p, 1e-8) for p in P.vertices)
    assert sol.area >= P.area
    assert sol.area == pytest.approx(Q.area, rel=1e-12)
    assert sol.area == pytest.approx(sol.dp_area, rel=1e-9)
    assert not has_uuu(sol.un_sequence)
    # vertices off every used side bisect their side of Q
    for idx, label in enumerate(sol.classification):
        p = P.vertex(idx)
        if label == "MIDPOINT":
            hits = [k for k in range(Q.n) if abs(Q.sideline(k).side(p)) < 1e-8 * Q.scale]
            assert len(hits) == 1
            a, b = Q.side(hits[0])
            assert ((a + b) * 0.5).close_to(p, 1e-7 * Q.scale)


def test_un_sequence_consistent_with_classification():
    P = regular_ngon(7)
    sol = solve_max_area(P)
    for i, c in enumerate(sol.un_sequence):
        if c == "U":
            assert sol.classification[i] == sol.classification[(i + 1) % 7] == "USED"


def test_pentagon_ties_form_one_orbit():
    sol = solve_max_area(regular_ngon(5), all_optima=True)
    assert set(sol.ties) == dihedral_orbit("UUNUN")
    assert len(sol.ties) == 5


def test_square_is_rejected():
    with pytest.raises(UnboundedError):
        solve_max_area(ConvexPolygon.from_coords([(0, 0), (1, 0), (1, 1), (0, 1)]))


def test_anchored_solutions_bound_the_optimum():
    rng = np.random.default_rng(7)
    P = random_valid_polygon(rng, 8)
    best = solve_max_area(P).area
    slots = SlotList.from_polygon(P)
    table = dp_all_pairs(slots.normalized()[0])
    areas = [solve_anchored(slots, a, table=table).area for a in range(P.n)]
    assert max(areas) == pytest.approx(best, rel=1e-12)
    for a, area in enumerate(areas):
        sol = solve_anchored(slots, a, table=table)
        assert sol.un_sequence[a] == "U"


def test_three_point_lorenz_slot_list():
    ls = build_lorenz_slots(parse_lorenz("0,0\n0.5,0.25\n1,1"))
    sol = solve_anchored(ls.slots)
    assert sol.area == pytest.approx(0.75, abs=1e-12)
    expected = [Point(0, 0), Point(1, 0.5), Point(1, 1), Point(0, 1)]
    got = list(sol.polygon.vertices)
    k = min(range(len(got)), key=lambda j: got[j].norm())
    got = got[k:] + got[:k]
    assert len(got) == 4 and all(a.close_to(b, 1e-12) for a, b in zip(got, expected))


def test_slot_list_rejects_bad_turns():
    P = regular_ngon(5)
    slots = list(SlotList.from_polygon(P).slots)
    slots[1], slots[2] = slots[2], slots[1]
    with pytest.raises(GeometryError):
        SlotList(tuple(slots), P.vertices)


def test_slot_anchor_must_lie_on_line():
    P = regular_ngon(5)
    slots = list(SlotList.from_polygon(P).slots)
    s = slots[0]
    slots[0] = Slot(Line.from_point_direction(s.start + Point(0, 0.1), s.line.direction), s.start, s.end)
    with pytest.raises(GeometryError):
        SlotList(tuple(slots), P.vertices)


def test_orbit_helpers():
    assert same_orbit("UUNUN", "NUNUU")
    assert same_orbit("UNNUNUN", "NUNUNNU")
    assert not same_orbit("UUNUN", "UNUNN" + "N")
    assert has_uuu("UNNUU") and not has_uuu("UUNUN")


def test_tie_tolerance_is_configurable():
    P = regular_ngon(6)
    loose = solve_max_area(P, Config(tie_tol=1e-6), all_optima=True)
    tight = solve_max_area(P, all_optima=True)
    assert loose.area == pytest.approx(tight.area, rel=1e-12)
    assert set(loose.ties) >= set(tight.ties)


def test_results_are_deterministic():
    rng = np.random.default_rng(21)
    P = random_valid_polygon(rng, 10)
    a, b = solve_max_area(P), solve_max_area(P)
    assert a.to_dict() == b.to_dict()


def test_scale_and_translation():
    P = regular_ngon(9)
    big = P.transformed(np.eye(2) * 1e3, (1e4, -2e4))
    assert solve_max_area(big).area == pytest.approx(1e6 * solve_max_area(P).area, rel=1e-9)
    assert math.isclose(solve_max_area(P).area, regular_closed_form(9)[0], rel_tol=1e-12)
