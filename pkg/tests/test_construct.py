from __future__ import annotations

from fractions import Fraction

import pytest

from outerstring.construct import (
    GROUND_SPLIT,
    circular_family,
    folk,
    folk_contraction_model,
    folk_key,
    lowerbound_instance,
    lowerbound_instance_alpha,
    random_instance,
    split_to_instance,
)
from outerstring.geom import validate_curves, validate_general_position
from outerstring.graphcore import arboricity, intersection_graph, verify_minor_model


class TestFolk:
    def test_shape(self):
        f = folk(4, 3, x_offset=2)
        assert f.apexes == (2, 6, 10)
        assert len(f.strings) == 6
        assert f.strings[0].ground.x == 2 + GROUND_SPLIT

    def test_bad_arguments(self):
        with pytest.raises(ValueError):
            folk(0, 2)
        with pytest.raises(ValueError):
            lowerbound_instance(0)

    def test_keys(self):
        assert folk_key("F3.002L") == (3, 0)
        assert folk_key("F1.000R~2") == (1, 2)


class TestLowerBound:
    @pytest.mark.parametrize("m", range(1, 7))
    def test_size_and_model(self, m):
        inst = lowerbound_instance(m)
        assert len(inst) == 2 * sum(2 ** m // 2 ** i for i in range(1, m + 1))
        assert validate_general_position(inst) == []
        model = folk_contraction_model(inst)
        assert len(model) == m and verify_minor_model(intersection_graph(inst), model)

    @pytest.mark.parametrize("m, alpha", [(2, 2), (2, 3), (3, 2)])
    def test_alpha_copies(self, m, alpha):
        inst = lowerbound_instance_alpha(m, alpha)
        assert len(inst) == alpha * len(lowerbound_instance(m))
        g = intersection_graph(inst)
        model = folk_contraction_model(inst)
        assert len(model) == alpha * m and verify_minor_model(g, model)
        assert arboricity(g) <= 4 * alpha

    def test_alpha_one_is_base(self):
        assert lowerbound_instance_alpha(3, 1) == lowerbound_instance(3)


class TestRandom:
    def test_deterministic(self):
        assert random_instance(10, 2, 7) == random_instance(10, 2, 7)
        assert random_instance(10, 2, 7) != random_instance(10, 2, 8)

    @pytest.mark.parametrize("seed", range(5))
    def test_general_position(self, seed):
        inst = random_instance(30, 3, seed)
        assert len(inst) == 30 and validate_general_position(inst) == []


class TestCircular:
    @pytest.mark.parametrize("k", [1, 2, 5])
    def test_family(self, k):
        curves = circular_family(k, 3)
        assert len(curves) == 2 * k and validate_curves(curves) == []
        feet = [c.start.x for c in curves] + [c.end.x for c in curves]
        assert feet == sorted(feet)

    def test_split(self):
        curves = circular_family(3, 2)
        inst, rerouted = split_to_instance(curves)
        assert validate_general_position(inst) == [] and validate_curves(rerouted) == []
        assert [c.start for c in rerouted] == [c.start for c in curves]
        assert all(isinstance(v.x, (int, Fraction)) for c in rerouted for v in c.vertices)
