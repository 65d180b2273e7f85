from fractions import Fraction

import pytest

from mchern import cfun
from mchern.cfun import BaseFunction, ConstructibleFunction
from mchern.surface import GenericPoint, IntersectionPoint, PointOnCurve, SurfaceModel

K1 = SurfaceModel((GenericPoint(),))
NESTED = SurfaceModel((GenericPoint(), PointOnCurve(1)))
CHAIN = SurfaceModel((GenericPoint(), PointOnCurve(1), IntersectionPoint(1, 2)))


class TestConstructibleFunction:
    def test_zero_weights_dropped(self):
        f = ConstructibleFunction({frozenset((1,)): 0, frozenset(): 1})
        assert f.weights == {frozenset(): 1}

    def test_linear_structure(self):
        f = ConstructibleFunction.indicator((1,))
        g = ConstructibleFunction.indicator(())
        combo = Fraction(1, 2) * f + 3 * g
        assert combo.weights[frozenset((1,))] == Fraction(1, 2)
        assert combo.weights[frozenset()] == 3
        assert (f - f).weights == {}

    def test_indicator_closed_curve(self):
        f = ConstructibleFunction.indicator_closed_curve(CHAIN, 1)
        assert f.weights == {
            frozenset((1,)): 1,
            frozenset((1, 3)): 1,
        }


class TestPushforward:
    def test_closed_curve_gives_full_euler(self):
        f = ConstructibleFunction.indicator_closed_curve(K1, 1)
        base = cfun.pushforward(K1, f)
        assert base.generic_value == 0
        assert base.value_at("p1") == 2

    def test_weighted_unit_is_constant_one(self):
        f = cfun.weighted_unit(K1, 0)
        base = cfun.pushforward(K1, f)
        assert base.is_constant(1)
        assert base.value_at("p1") == 1

    def test_open_complement(self):
        base = cfun.pushforward(K1, ConstructibleFunction.indicator(()))
        assert base.generic_value == 1
        assert base.value_at("p1") == 0
        assert base.corrections == {"p1": -1}

    def test_unknown_stratum(self):
        with pytest.raises(ValueError, match="unknown stratum"):
            cfun.pushforward(K1, ConstructibleFunction.indicator((4,)))
        with pytest.raises(ValueError, match="do not cross"):
            cfun.pushforward(CHAIN, ConstructibleFunction.indicator((1, 2)))

    def test_linearity(self):
        f = ConstructibleFunction.indicator((1,))
        g = ConstructibleFunction.indicator(())
        combo = cfun.pushforward(NESTED, 2 * f + Fraction(1, 3) * g)
        single_f = cfun.pushforward(NESTED, f)
        single_g = cfun.pushforward(NESTED, g)
        for point in ("p1", "generic-ish"):
            assert combo.value_at(point) == 2 * single_f.value_at(point) + Fraction(
                1, 3
            ) * single_g.value_at(point)

    def test_two_route_euler_agreement(self, corpus_surfaces):
        # closed-curve push-forward values equal fiber Euler characteristics
        # computed straight from the incidence graph
        for s in corpus_surfaces[:60]:
            rel = s.relative(0)
            for j in rel.curves:
                base = cfun.pushforward(s, ConstructibleFunction.indicator_closed_curve(s, j))
                assert base.generic_value == 0
                for root in rel.root_order:
                    if rel.roots[j] == root:
                        assert base.value_at(root) == 2
                    else:
                        assert base.value_at(root) == 0


class TestWeightedUnit:
    def test_plane(self):
        f = cfun.weighted_unit(SurfaceModel(), 0)
        assert f.weights == {frozenset(): 1}

    def test_k1(self):
        f = cfun.weighted_unit(K1, 0)
        assert f.weights == {frozenset(): 1, frozenset((1,)): Fraction(1, 2)}

    def test_nested(self):
        f = cfun.weighted_unit(NESTED, 0)
        assert sorted(f.weights.values()) == [
            Fraction(1, 6),
            Fraction(1, 3),
            Fraction(1, 2),
            Fraction(1),
        ]


class TestUnitPushforward:
    def test_small_surfaces(self):
        for s in (SurfaceModel(), K1, NESTED, CHAIN):
            for m in range(s.k + 1):
                assert cfun.verify_unit_pushforward(s, m)

    def test_identity_stage_trivial(self):
        assert cfun.verify_unit_pushforward(K1, 1)

    def test_restricted_to_fiber_is_indicator(self):
        f = cfun.restrict_to_fiber(NESTED, cfun.weighted_unit(NESTED, 0), "p1")
        base = cfun.pushforward(NESTED, f)
        assert base.generic_value == 0
        assert base.value_at("p1") == 1

    def test_restrict_unknown_point(self):
        with pytest.raises(ValueError, match="unknown base point"):
            cfun.restrict_to_fiber(NESTED, cfun.weighted_unit(NESTED, 0), "p7")


class TestBaseFunction:
    def test_values_and_constancy(self):
        base = BaseFunction(Fraction(1), {"p1": Fraction(-1)})
        assert base.value_at("p1") == 0
        assert base.value_at("anywhere else") == 1
        assert not base.is_constant(1)
        assert BaseFunction(Fraction(2), {}).is_constant(2)

    def test_json(self):
        base = BaseFunction(Fraction(1, 2), {"p1": Fraction(3)})
        assert base.to_json() == {"generic": "1/2", "corrections": {"p1": "3"}}
