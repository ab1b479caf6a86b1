from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from outerstring.arrangement import (
    build_arrangement,
    check_halving,
    level_bound,
    level_regions,
    levels_bruteforce,
    levels_exact,
    levels_upper,
    max_crossing_level,
    point_level,
)
from outerstring.construct import lowerbound_instance, random_instance
from outerstring.errors import DegenerateInput, SizeLimitExceeded
from outerstring.geom import GroundedString, Instance


def inst(*strings):
    return Instance(tuple(GroundedString(f"s{i + 1}", v) for i, v in enumerate(strings)))


CROSS = inst(((0, 0), (4, 4)), ((4, 0), (0, 4)))
# two crossing strings capped by a bent third: the triangle under the cap is enclosed
TRIANGLE = inst(((0, 0), (4, 4)), ((4, 0), (0, 4)), ((6, 0), (6, 3), (-1, 3)))
# a face whose unit-cost distance is 2 but which needs only one distinct string
REPEAT = inst(((19, 0), (10, 9), (10, 5)), ((0, 0), (14, 12), (6, 4)), ((7, 0), (10, 10), (19, 8)))


class TestStructure:
    def test_empty_instance_has_one_face(self):
        arr = build_arrangement(Instance(()))
        assert len(arr.faces) == 1 and arr.levels == [0]
        assert max_crossing_level(arr) == (0, 0)

    def test_cross_is_all_ground(self):
        arr = build_arrangement(CROSS)
        assert len(arr.faces) == 2 and arr.levels == [0, 0]

    def test_triangle_levels(self):
        arr = build_arrangement(TRIANGLE)
        assert len(arr.faces) == 4
        assert arr.levels == [0, 0, 1, 0]
        assert max_crossing_level(arr) == (1, 2)
        assert level_regions(arr).gamma_sizes == [3, 3]

    @pytest.mark.parametrize("instance", [CROSS, TRIANGLE, REPEAT])
    def test_euler(self, instance):
        assert build_arrangement(instance).euler_characteristic() == 2

    def test_degenerate_input_rejected(self):
        bad = inst(((0, 0), (4, 4)), ((4, 0), (0, 4)), ((2, 0), (2, 5)))
        with pytest.raises(DegenerateInput):
            build_arrangement(bad)


class TestLevels:
    def test_repeat_crossing_counts_once(self):
        arr = build_arrangement(REPEAT)
        assert arr.levels == [0, 0, 1, 1, 1, 1, 1, 0, 1]
        assert levels_upper(arr) == [0, 0, 1, 1, 2, 1, 1, 0, 1]
        assert levels_bruteforce(arr) == arr.levels

    def test_point_level(self):
        arr = build_arrangement(TRIANGLE)
        assert point_level(arr, (2, Fraction(5, 2))) == 1
        # on the crossing itself the lowest adjacent face wins
        assert point_level(arr, (2, 2)) == 0

    def test_brute_force_cap(self):
        with pytest.raises(SizeLimitExceeded):
            levels_bruteforce(build_arrangement(random_instance(6, 0, 1)), cap=5)

    @settings(max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow])
    @given(st.integers(1, 9), st.integers(0, 3), st.integers(0, 10 ** 6))
    def test_exact_matches_oracle_and_upper(self, n, bends, seed):
        arr = build_arrangement(random_instance(n, bends, seed))
        exact = levels_exact(arr)
        assert exact == levels_bruteforce(arr)
        assert all(e <= u for e, u in zip(exact, levels_upper(arr)))
        for f in arr.ground_faces:
            assert exact[f] == 0

    @settings(max_examples=25, deadline=None)
    @given(st.integers(2, 12), st.integers(0, 3), st.integers(0, 10 ** 6))
    def test_adjacent_faces_differ_by_at_most_one(self, n, bends, seed):
        arr = build_arrangement(random_instance(n, bends, seed))
        for a in arr.arcs:
            assert abs(arr.levels[a.left] - arr.levels[a.right]) <= 1


class TestRegions:
    @pytest.mark.parametrize("n, alpha, want", [(1, 1, 4), (2, 1, 8), (50, 16, 384), (7, 0, 12), (0, 3, 0)])
    def test_level_bound(self, n, alpha, want):
        assert level_bound(n, alpha) == want

    def test_folk_profile_nested(self):
        prof = level_regions(build_arrangement(lowerbound_instance(3)))
        assert prof.is_nested()
        assert prof.gamma_sizes[0] == len(lowerbound_instance(3))
        assert [r.level for r in prof.regions] == list(range(prof.max_level + 1))

    def test_regions_contain_witness(self):
        arr = build_arrangement(random_instance(20, 3, 5))
        prof = level_regions(arr)
        for r in prof.regions:
            assert prof.witness_face in r.faces
            assert all(arr.levels[f] >= r.level for f in r.faces)

    def test_halving_indices(self):
        prof = level_regions(build_arrangement(TRIANGLE))
        assert check_halving(prof, 1) == []
        fake = type(prof)(prof.face_levels, 9, prof.witness_face, prof.regions * 5)
        checks = check_halving(fake, 1)
        assert [c.i for c in checks] == list(range(4, 10))
        assert checks[0].as_dict() == {"i": 4, "gamma_i": 3, "gamma_back": 3, "pass": False}
