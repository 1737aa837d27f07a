import random

import pytest

from ultrakit.category import FiniteCategory
from ultrakit.exceptions import CarrierMismatch, FunctorialityViolation
from ultrakit.maps import UPFamily
from ultrakit.sheaf import (
    EtaleSheaf, EvaluationPoints, Presheaf, SheafMorphism, UltraSheaf, all_presheaves, coequalizer_sheaf, congruences,
    coproduct_sheaf, enumerate_etale, enumerate_sheaves, equalizer_sheaf, eta_unit, eta_validate, etale_isomorphic,
    ev_equivalence_check, ev_preserves_limits, ev_space, identity_morphism, initial_sheaf, iso_class_representatives,
    presheaf_to_ultrasheaf, pretopos_law_suite, product_sheaf, pullback_sheaf, quotient_sheaf, sampled_law_suite,
    sheaf_morphisms, terminal_sheaf, ultrasheaf_to_etale, ultrasheaf_to_presheaf
)
from ultrakit.space import FiniteSpace, SpaceMap, identity_space_map, open_inclusion
from ultrakit.ultrafilter import factorial
from ultrakit.vult import Alex, PtSpace


sierpinski = FiniteSpace.sierpinski()


class TestUltraSheaf:
    def test_enumeration_over_sierpinski(self):
        sheaves = list(enumerate_sheaves(PtSpace(sierpinski), 1))
        assert sorted(A.sizes for A in sheaves) == [(0, 0), (0, 1), (1, 1)]

    def test_iso_classes_over_a_point(self):
        sheaves = list(enumerate_sheaves(PtSpace(FiniteSpace.point()), 2))
        assert len(iso_class_representatives(sheaves)) == 3

    def test_functoriality_violation(self):
        base = PtSpace(sierpinski)
        with pytest.raises(FunctorialityViolation):
            UltraSheaf(base, [1, 1], [(0,), (1,), (0,)]).validate()

    def test_action_on_ultraarrows(self):
        base = PtSpace(sierpinski)
        A = UltraSheaf(base, [1, 2], [(0,), (1,), (0, 1)]).validate()
        f = base.hom(0, factorial(), UPFamily.alternating([1, 0]))[0]
        assert f.limit_object == 1
        assert A.act(f) == (1,)

    def test_document_round_trip(self):
        base = PtSpace(sierpinski)
        A = UltraSheaf(base, [1, 2], [(0,), (1,), (0, 1)])
        assert UltraSheaf.from_document(base, A.to_document()) == A

    def test_relabelling_preserves_the_class(self):
        A = UltraSheaf(PtSpace(sierpinski), [1, 2], [(0,), (1,), (0, 1)])
        assert A.relabel([(0,), (1, 0)]).canonical_key() == A.canonical_key()


class TestLimitsAndColimits:
    def setup_method(self):
        base = PtSpace(sierpinski)
        self.A = UltraSheaf(base, [1, 2], [(0,), (1,), (0, 1)])
        self.one = terminal_sheaf(base)

    def test_products(self):
        P, first, second = product_sheaf(self.A, self.one)
        assert P.sizes == self.A.sizes
        assert P.violation() is None
        assert first.is_natural() and second.is_natural()

    def test_coproducts_are_disjoint(self):
        S, left, right = coproduct_sheaf(self.A, self.one)
        assert S.sizes == (2, 3)
        assert left.is_mono() and right.is_mono()
        assert S.violation() is None

    def test_equalizer_of_identical_maps(self):
        identity = identity_morphism(self.A)
        E, inclusion = equalizer_sheaf(identity, identity)
        assert E.sizes == self.A.sizes
        assert inclusion.is_mono()

    def test_pullback_over_the_terminal_is_the_product(self):
        [to_one] = sheaf_morphisms(self.A, self.one)
        S, first, second = pullback_sheaf(to_one, to_one)
        assert S.sizes == (1, 4)
        assert first.is_natural() and second.is_natural()
        assert first.is_epi() and second.is_epi()

    def test_coequalizer_identifies(self):
        B = UltraSheaf(self.A.base, [0, 2], [(), (), (0, 1)])
        f = SheafMorphism(B, self.A, ((), (0, 1)))
        g = SheafMorphism(B, self.A, ((), (1, 0)))
        assert f.is_natural() and g.is_natural()
        Q, q = coequalizer_sheaf(f, g)
        assert Q.sizes == (1, 1)
        assert q.compose(f) == q.compose(g)
        with pytest.raises(CarrierMismatch):
            coequalizer_sheaf(f, identity_morphism(self.A))

    def test_quotients(self):
        Q, q = quotient_sheaf(self.A, [[], [(0, 1)]])
        assert Q.sizes == (1, 1)
        assert q.is_epi()
        with pytest.raises(FunctorialityViolation):
            quotient_sheaf(UltraSheaf(PtSpace(sierpinski), [2, 2], [(0, 1), (0, 1), (0, 1)]), [[(0, 1)], []])

    def test_congruences(self):
        assert len(list(congruences(self.one))) == 1
        assert len(list(congruences(self.A))) == 2

    def test_morphisms(self):
        assert len(list(sheaf_morphisms(self.one, self.A))) == 1
        assert len(list(sheaf_morphisms(self.A, initial_sheaf(self.A.base)))) == 0

    def test_pretopos_laws(self):
        assert pretopos_law_suite(PtSpace(FiniteSpace.point()), 2) == []
        assert pretopos_law_suite(PtSpace(sierpinski), 1) == []

    def test_sampled_laws_at_fiber_bound_three(self):
        assert sampled_law_suite(PtSpace(sierpinski), 3, 20, random.Random(7)) == []


class TestEtale:
    def test_ev_check_at_a_point(self):
        report = ev_equivalence_check(FiniteSpace.point(), 2)
        assert (report.etale_objects, report.sheaf_objects) == (3, 3)
        assert report.ok

    def test_ev_check_over_sierpinski(self):
        assert ev_equivalence_check(sierpinski, 1).ok

    def test_round_trip_through_etale_spaces(self):
        base = PtSpace(sierpinski)
        E = ultrasheaf_to_etale(terminal_sheaf(base))
        assert etale_isomorphic(E, EtaleSheaf.build(identity_space_map(sierpinski)))
        assert ev_space(E, base).canonical_key() == terminal_sheaf(base).canonical_key()

    def test_open_representable(self):
        E = EtaleSheaf.build(open_inclusion(sierpinski, [1]))
        assert ev_space(E).sizes == (0, 1)

    def test_non_etale_rejected(self):
        with pytest.raises(CarrierMismatch):
            EtaleSheaf.build(SpaceMap(sierpinski, FiniteSpace.point(), (0, 0)))

    def test_enumerate_etale(self):
        assert len(list(enumerate_etale(FiniteSpace.point(), 2))) == 3

    def test_products_of_etale_spaces(self):
        E = EtaleSheaf.build(identity_space_map(sierpinski))
        F = EtaleSheaf.build(open_inclusion(sierpinski, [1]))
        assert ev_preserves_limits(sierpinski, E, F)

    def test_unit_is_a_functor(self):
        assert eta_validate(FiniteSpace.point())
        assert eta_validate(sierpinski)

    def test_unit_sends_points_to_their_evaluations(self):
        eta = eta_unit(sierpinski)
        assert [eta.on_object(a) for a in sierpinski.points] == [0, 1]
        assert eta.on_star(0, 1, ()) in EvaluationPoints(sierpinski).star_hom(0, 1)


class TestPresheaves:
    def test_representable(self):
        P = Presheaf.representable(FiniteCategory.arrow_category(), 0)
        assert P.sizes == (1, 1)
        assert P.violation() is None

    def test_round_trip(self):
        P = Presheaf.representable(FiniteCategory.arrow_category(), 1)
        A = presheaf_to_ultrasheaf(P)
        assert ultrasheaf_to_presheaf(A) == P

    def test_count(self):
        assert len(list(all_presheaves(FiniteCategory.terminal(), 2))) == 3

    def test_only_alexandroff_bases(self):
        with pytest.raises(CarrierMismatch):
            ultrasheaf_to_presheaf(terminal_sheaf(PtSpace(sierpinski)))
        with pytest.raises(CarrierMismatch):
            ultrasheaf_to_etale(terminal_sheaf(Alex(FiniteCategory.terminal())))
