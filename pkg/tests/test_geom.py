from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from outerstring.errors import DegenerateContact, DegenerateInput, EpsilonTooLarge, InvalidString, ParseError
from outerstring.geom import (
    DoubleGroundedCurve,
    GroundedString,
    Instance,
    Kind,
    Point,
    coord_to_json,
    curves_from_json,
    curves_to_json,
    instance_from_json,
    instance_to_json,
    min_feature_distance,
    orient,
    perturb_copies,
    q,
    require_general_position,
    segment_intersection,
    strings_intersect,
    validate_general_position,
)

coords = st.integers(-30, 30)
points = st.builds(Point, coords, coords)


def seg(a, b):
    return (Point.of(*a), Point.of(*b))


class TestNumbers:
    def test_q_collapses_integral_fractions(self):
        assert q(Fraction(6, 3)) == 2 and type(q(Fraction(6, 3))) is int
        assert q("3/4") == Fraction(3, 4)

    @pytest.mark.parametrize("bad", [0.5, True, None])
    def test_q_rejects_inexact(self, bad):
        with pytest.raises(TypeError):
            q(bad)

    @given(points, points, points)
    def test_orient_antisymmetric(self, a, b, c):
        assert orient(a, b, c) == -orient(b, a, c) == orient(b, c, a)


class TestSegmentIntersection:
    def test_proper_crossing_is_exact(self):
        hit = segment_intersection(seg((0, 0), (3, 1)), seg((0, 1), (3, 0)))
        assert hit.kind is Kind.PROPER
        assert hit.point == Point(Fraction(3, 2), Fraction(1, 2))

    @pytest.mark.parametrize("s, t", [
        (((0, 0), (2, 2)), ((2, 2), (4, 0))),  # shared endpoint
        (((0, 0), (4, 0)), ((2, 0), (2, 3))),  # T-junction
        (((0, 0), (4, 4)), ((1, 1), (6, 6))),  # collinear overlap
    ])
    def test_degenerate_contacts(self, s, t):
        assert segment_intersection(seg(*s), seg(*t)).kind is Kind.DEGENERATE

    def test_disjoint(self):
        assert segment_intersection(seg((0, 0), (1, 1)), seg((2, 0), (3, 1))).kind is Kind.EMPTY

    @given(points, points, points, points)
    def test_symmetric_and_point_on_both(self, a, b, c, d):
        if a == b or c == d:
            return
        one = segment_intersection((a, b), (c, d))
        two = segment_intersection((c, d), (a, b))
        assert one.kind is two.kind
        if one.kind is Kind.PROPER:
            assert one.point == two.point
            assert orient(a, b, one.point) == 0 and orient(c, d, one.point) == 0


class TestCurves:
    def test_string_needs_ground_start(self):
        with pytest.raises(InvalidString):
            GroundedString("s", ((0, 1), (1, 2)))

    def test_string_stays_above_ground(self):
        with pytest.raises(InvalidString):
            GroundedString("s", ((0, 0), (1, 2), (2, 0)))

    def test_self_crossing_rejected(self):
        with pytest.raises(InvalidString):
            GroundedString("s", ((0, 0), (4, 4), (4, 1), (0, 3)))

    def test_fold_back_rejected(self):
        with pytest.raises(InvalidString):
            GroundedString("s", ((0, 0), (2, 2), (1, 1)))

    def test_double_grounded_endpoints(self):
        c = DoubleGroundedCurve("c", ((0, 0), (2, 3), (5, 0)))
        assert c.start == Point(0, 0) and c.end == Point(5, 0)
        with pytest.raises(InvalidString):
            DoubleGroundedCurve("c", ((0, 0), (5, 0)))

    def test_duplicate_ids(self):
        s = GroundedString("a", ((0, 0), (1, 1)))
        with pytest.raises(InvalidString):
            Instance((s, GroundedString("a", ((3, 0), (4, 1)))))

    def test_crossings_ordered_along_first(self):
        a = GroundedString("a", ((0, 0), (0, 10)))
        b = DoubleGroundedCurve("b", ((-2, 0), (2, 3), (-2, 6), (2, 9), (3, 0)))
        hit, pts = strings_intersect(a, b)
        assert hit and [p.y for p in pts] == sorted(p.y for p in pts) and len(pts) == 3

    def test_touch_raises(self):
        a = GroundedString("a", ((0, 0), (0, 4)))
        b = GroundedString("b", ((2, 0), (0, 2)))
        with pytest.raises(DegenerateContact):
            strings_intersect(a, b)


class TestGeneralPosition:
    def test_clean_instance(self):
        inst = Instance((GroundedString("a", ((0, 0), (4, 4))), GroundedString("b", ((4, 0), (0, 4)))))
        assert validate_general_position(inst) == []

    def test_kinds_reported(self):
        inst = Instance((
            GroundedString("a", ((0, 0), (4, 4))),
            GroundedString("b", ((4, 0), (0, 4))),
            GroundedString("c", ((2, 0), (2, 5))),  # through the a/b crossing
            GroundedString("d", ((8, 0), (9, 3))),
            GroundedString("e", ((8, 0), (7, 3))),
        ))
        kinds = {v.kind for v in validate_general_position(inst)}
        assert kinds == {"ConcurrentTriple", "DuplicateGround", "NonTransversal"}
        with pytest.raises(DegenerateInput):
            require_general_position(inst)

    def test_non_transversal(self):
        inst = Instance((GroundedString("a", ((0, 0), (0, 4))), GroundedString("b", ((2, 0), (0, 2)))))
        assert [v.kind for v in validate_general_position(inst)] == ["NonTransversal"]


class TestPerturbation:
    def test_copies_pairwise_cross(self):
        s = GroundedString("s", ((0, 0), (3, 3), (6, 2)))
        copies = perturb_copies(s, 4, Fraction(1, 4))
        assert len(copies) == 4 and copies[0] is s
        for i in range(4):
            for j in range(i + 1, 4):
                assert strings_intersect(copies[i], copies[j])[0]

    def test_relation_to_others_kept(self):
        s = GroundedString("s", ((0, 0), (3, 3)))
        near = GroundedString("t", ((2, 0), (2, 3)))
        eps = min_feature_distance([s, near]) / 8
        copies = perturb_copies(s, 3, eps, others=[near])
        assert all(strings_intersect(c, near)[0] for c in copies)
        with pytest.raises(EpsilonTooLarge):
            perturb_copies(s, 3, 8, others=[near])


class TestJson:
    def test_instance_round_trip_with_fractions(self):
        inst = Instance((GroundedString("a", ((Fraction(1, 3), 0), (2, Fraction(7, 2)))),))
        obj = instance_to_json(inst)
        assert obj["strings"][0]["vertices"][0] == [1, 3, 0, 1]
        assert instance_from_json(obj) == inst

    def test_curves_round_trip(self):
        cs = [DoubleGroundedCurve("c1", ((0, 0), (1, 2), (3, 0)))]
        assert curves_from_json(curves_to_json(cs)) == cs

    @pytest.mark.parametrize("obj", [
        {},
        {"strings": [{"id": "a"}]},
        {"strings": [{"vertices": [[0, 0], [1.5, 2]]}]},
        {"strings": [{"vertices": [[0, 0], [1, 0, 1, 1]]}]},
        {"strings": [{"vertices": [[0, 1], [1, 2]]}]},
    ])
    def test_bad_instances(self, obj):
        with pytest.raises(ParseError):
            instance_from_json(obj)

    def test_integer_coordinates_stay_short(self):
        assert coord_to_json(Point(3, 4)) == [3, 4]
