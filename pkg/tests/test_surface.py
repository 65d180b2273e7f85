from fractions import Fraction

import pytest

from mchern.corpus import (
    final_transposition,
    order_swap_pairs,
    swap_last_two,
    systems_isomorphic_under,
)
from mchern.blowup import BlowupCenter, BlowupProgram, run_program
from mchern.modsys import ModificationSystem
from mchern.ring import LPolynomial, MotivicClass
from mchern.surface import (
    ChowClass,
    GenericPoint,
    IntersectionPoint,
    PointOnCurve,
    SurfaceModel,
)

NESTED2 = (GenericPoint(), PointOnCurve(1))
CHAIN3 = (GenericPoint(), PointOnCurve(1), IntersectionPoint(1, 2))


class TestChowClass:
    def test_vector_arithmetic(self):
        a = ChowClass(1, (3, -1), 4)
        b = ChowClass(0, (0, 1), 2)
        assert a + b == ChowClass(1, (3, 0), 6)
        assert a - b == ChowClass(1, (3, -2), 2)
        assert Fraction(1, 2) * b == ChowClass(0, (0, Fraction(1, 2)), 1)

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            ChowClass(1, (3,), 3) + ChowClass(1, (3, -1), 4)

    def test_repr_mentions_generators(self):
        text = repr(ChowClass(1, (3, Fraction(-3, 2)), 3))
        assert "[Z]" in text and "h" in text and "e1" in text and "[pt]" in text


class TestEvents:
    def test_three_step_chain(self):
        s = SurfaceModel(CHAIN3)
        assert s.k == 3
        assert s.discrepancies == (1, 2, 4)
        assert s.curve_class(1) == ChowClass(0, (0, 1, -1, -1), 0)
        assert s.curve_class(2) == ChowClass(0, (0, 0, 1, -1), 0)
        assert s.curve_class(3) == ChowClass(0, (0, 0, 0, 1), 0)
        assert s.meeting_pairs() == ((1, 3), (2, 3))
        assert s.anchors == ("p1",)

    def test_first_blowup(self):
        s = SurfaceModel((GenericPoint(),))
        assert s.k == 1
        assert s.discrepancies == (1,)
        assert s.meeting_pairs() == ()
        assert s.curve_class(1) == ChowClass(0, (0, 1), 0)

    def test_two_anchors(self):
        s = SurfaceModel((GenericPoint(), GenericPoint(), PointOnCurve(2)))
        assert s.anchors == ("p1", "p2")
        assert s.anchor_of(3) == "p2"

    def test_invalid_curve_index(self):
        with pytest.raises(ValueError, match="invalid curve"):
            SurfaceModel((GenericPoint(), PointOnCurve(2)))

    def test_non_meeting_pair(self):
        with pytest.raises(ValueError, match="do not meet"):
            SurfaceModel((GenericPoint(), GenericPoint(), IntersectionPoint(1, 2)))

    def test_pair_destroyed_after_blowup(self):
        s = SurfaceModel(CHAIN3)
        assert not s.pair_meets(1, 2)
        with pytest.raises(ValueError, match="do not meet"):
            s.apply_event(IntersectionPoint(1, 2))

    def test_stage_model(self):
        s = SurfaceModel(CHAIN3)
        assert s.stage_model(2).events == CHAIN3[:2]
        assert s.stage_model(0).k == 0
        with pytest.raises(ValueError):
            s.stage_model(4)


class TestChern:
    def test_plane(self):
        assert SurfaceModel().chern_class() == ChowClass(1, (3,), 3)

    def test_one_blowup(self):
        assert SurfaceModel((GenericPoint(),)).chern_class() == ChowClass(1, (3, -1), 4)

    def test_two_nested(self):
        assert SurfaceModel(NESTED2).chern_class() == ChowClass(1, (3, -1, -1), 5)


def euler_from_incidence(surface, subset, stage=0):
    """Independent Euler characteristic of a stratum from the incidence graph."""
    rel = surface.relative(stage)
    if len(subset) == 2:
        return 1
    if len(subset) == 1:
        return 2 - rel.meets[subset[0]]
    curves, pairs = len(rel.curves), len(rel.pairs)
    return (3 + surface.k) - (2 * curves - pairs)


class TestCsmStrata:
    def test_single_curve_k1(self):
        s = SurfaceModel((GenericPoint(),))
        assert s.csm_stratum((1,)) == ChowClass(0, (0, 1), 2)

    def test_single_curve_nested(self):
        s = SurfaceModel(NESTED2)
        assert s.csm_stratum((1,)) == ChowClass(0, (0, 1, -1), 1)

    def test_empty_stratum_nested(self):
        s = SurfaceModel(NESTED2)
        assert s.csm_stratum(()) == ChowClass(1, (3, -2, -1), 2)

    def test_pair_stratum(self):
        s = SurfaceModel(CHAIN3)
        assert s.csm_stratum((1, 3)) == ChowClass.point(3)
        with pytest.raises(ValueError, match="do not meet"):
            s.csm_stratum((1, 2))

    def test_depth_three_rejected(self):
        s = SurfaceModel(CHAIN3)
        with pytest.raises(ValueError, match="depth"):
            s.csm_stratum((1, 2, 3))

    def test_partition_of_unity(self, corpus_surfaces):
        for s in corpus_surfaces[:120]:
            total = s.csm_stratum(())
            for j in range(1, s.k + 1):
                total = total + s.csm_stratum((j,))
            for pair in s.meeting_pairs():
                total = total + s.csm_stratum(pair)
            assert total == s.chern_class()

    def test_point_degrees_match_incidence_euler(self, corpus_surfaces):
        for s in corpus_surfaces[:120]:
            assert s.csm_stratum(()).points == euler_from_incidence(s, ())
            for j in range(1, s.k + 1):
                assert s.csm_stratum((j,)).points == euler_from_incidence(s, (j,))

    def test_closed_curve_class(self, corpus_surfaces):
        # closure CSM = stratum CSM plus one point per crossing
        for s in corpus_surfaces[:80]:
            for j in range(1, s.k + 1):
                closure = s.csm_stratum((j,))
                for a, b in s.meeting_pairs():
                    if j in (a, b):
                        closure = closure + ChowClass.point(s.k)
                assert closure == s.curve_class(j) + 2 * ChowClass.point(s.k)


class TestStringy:
    def test_plane(self):
        s = SurfaceModel()
        assert s.stringy_class(0) == s.chern_class()

    def test_k1(self):
        s = SurfaceModel((GenericPoint(),))
        assert s.stringy_class(0) == ChowClass(1, (3, Fraction(-3, 2)), 3)

    def test_nested_weights(self):
        s = SurfaceModel(NESTED2)
        expected = (
            s.csm_stratum(())
            + Fraction(1, 2) * s.csm_stratum((1,))
            + Fraction(1, 3) * s.csm_stratum((2,))
            + Fraction(1, 6) * ChowClass.point(2)
        )
        assert s.stringy_class(0) == expected

    def test_relative_discrepancies(self):
        s = SurfaceModel(CHAIN3)
        rel = s.relative(1)
        assert rel.curves == (2, 3)
        assert rel.mus == {2: 1, 3: 2}
        assert rel.pairs == ((2, 3),)
        rel0 = s.relative(0)
        assert rel0.mus == {1: 1, 2: 2, 3: 4}


class TestPushforward:
    def test_k1_recovers_plane_chern(self):
        s = SurfaceModel((GenericPoint(),))
        assert s.pushforward(s.stringy_class(0), 0) == ChowClass(1, (3,), 3)

    def test_identity_at_top_stage(self):
        s = SurfaceModel(NESTED2)
        cls = s.stringy_class(0)
        assert s.pushforward(cls, s.k) == cls

    def test_nested_stage_one(self):
        s = SurfaceModel(NESTED2)
        assert s.pushforward(s.stringy_class(1), 1) == ChowClass(1, (3, -1), 4)

    def test_matches_stage_chern_everywhere(self, corpus_surfaces):
        for s in corpus_surfaces[:120]:
            for m in range(s.k + 1):
                pushed = s.pushforward(s.stringy_class(m), m)
                assert pushed == s.stage_model(m).chern_class()

    def test_wrong_basis_rejected(self):
        s = SurfaceModel(NESTED2)
        with pytest.raises(ValueError):
            s.pushforward(ChowClass(1, (3,), 3), 0)


class TestExport:
    def test_k1_matches_engine_output(self):
        plane = ModificationSystem(
            2, (), {(): MotivicClass(LPolynomial((1, 1, 1)))},
            ambient_class=MotivicClass(LPolynomial((1, 1, 1))),
        )
        center = BlowupCenter(
            codim=2, containing=frozenset(), center_strata={frozenset(): MotivicClass.one()}
        )
        engine = run_program(BlowupProgram(plane, (center,))).final
        exported, _ = SurfaceModel((GenericPoint(),)).export_modification_system(0)
        assert systems_isomorphic_under(exported, engine, {"e1": "exc0"})

    def test_k0_trivial(self):
        system, loci = SurfaceModel().export_modification_system(0)
        assert len(system.divisors) == 0
        assert system.chi(loci["full"]) == MotivicClass(LPolynomial((1, 1, 1)))

    def test_nested_chi(self):
        s = SurfaceModel(NESTED2)
        system, loci = s.export_modification_system(0)
        assert system.validate() == []
        assert system.chi(loci["full"]) == s.class_of_stage(0)
        assert system.euler_chi(loci["full"]) == 3

    def test_fiber_loci_have_unit_chi(self, corpus_surfaces):
        for s in corpus_surfaces[:60]:
            for m in range(s.k + 1):
                system, loci = s.export_modification_system(m)
                for name, locus in loci.items():
                    if name == "full":
                        assert system.chi(locus) == s.class_of_stage(m)
                    else:
                        assert system.chi(locus) == MotivicClass.one()

    def test_stage_classes(self):
        s = SurfaceModel(CHAIN3)
        assert s.class_of_stage(0) == MotivicClass(LPolynomial((1, 1, 1)))
        assert s.class_of_stage(2) == MotivicClass(LPolynomial((1, 3, 1)))


class TestFiberProfiles:
    def test_k1(self):
        assert SurfaceModel((GenericPoint(),)).fiber_euler_profile("p1") == 1

    def test_nested_sum(self):
        s = SurfaceModel(NESTED2)
        # by hand: (2-1)/2 + (2-1)/3 + 1/6
        assert Fraction(1, 2) + Fraction(1, 3) + Fraction(1, 6) == 1
        assert s.fiber_euler_profile("p1") == 1

    def test_generic(self):
        assert SurfaceModel(CHAIN3).fiber_euler_profile("generic") == 1

    def test_unknown_anchor(self):
        with pytest.raises(ValueError, match="unknown anchor"):
            SurfaceModel(CHAIN3).fiber_euler_profile("p9")


class TestOrderIndependence:
    def test_swapped_final_events(self, corpus_programs):
        pairs = order_swap_pairs(corpus_programs, want=12)
        assert len(pairs) == 12
        for first, second in pairs:
            sa, sb = SurfaceModel(first), SurfaceModel(second)
            pushed_a = sa.pushforward(sa.stringy_class(0), 0)
            pushed_b = sb.pushforward(sb.stringy_class(0), 0)
            assert pushed_a == pushed_b
            ea, _ = sa.export_modification_system(0)
            eb, _ = sb.export_modification_system(0)
            assert systems_isomorphic_under(ea, eb, final_transposition(first))

    def test_swap_guard(self):
        # the second event references the first's curve: not independent
        assert swap_last_two((GenericPoint(), PointOnCurve(1))) is None
        assert swap_last_two((GenericPoint(),)) is None
        program = (GenericPoint(), GenericPoint(), PointOnCurve(1))
        swapped = swap_last_two(program)
        assert swapped == (GenericPoint(), PointOnCurve(1), GenericPoint())
