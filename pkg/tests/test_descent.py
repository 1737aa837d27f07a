import pytest

from ultrakit.exceptions import BoundExceeded, CategoryValidationError
from ultrakit.descent import (
    TopGroupoid, canonical_cocone, cocone_validate, desc_category, descent_search, effective_descent_criterion,
    equivariant_comparison, equivariant_sheaves, groupoid_diagram, kernel_groupoid, universality_check
)
from ultrakit.space import FiniteSpace, SpaceMap
from ultrakit.vult import FinSetVUlt, PointVUlt, space_functor


def collapse(space):
    return SpaceMap(space, FiniteSpace.point(), (0,) * space.n)


def z2_on_a_point():
    return TopGroupoid.cyclic_action(FiniteSpace.point(), 2, lambda k, x: x)


class TestKernel:
    def test_kernel_pair_of_a_covering(self):
        diagram = kernel_groupoid(collapse(FiniteSpace.discrete(2)))
        assert len(diagram.x1.objects) == 4
        assert len(diagram.x2.objects) == 8
        assert diagram.simplicial_violation() is None

    def test_canonical_cocone_is_valid(self):
        F = space_functor(collapse(FiniteSpace.sierpinski()))
        assert cocone_validate(canonical_cocone(kernel_groupoid(F), F))

    def test_caps(self):
        diagram = kernel_groupoid(collapse(FiniteSpace.discrete(2)))
        with pytest.raises(BoundExceeded):
            desc_category(diagram, FinSetVUlt(4))
        with pytest.raises(BoundExceeded):
            desc_category(diagram, PointVUlt(), max_objects=1)


class TestCriterion:
    def test_covering_satisfies_the_criterion(self):
        report = effective_descent_criterion(space_functor(collapse(FiniteSpace.discrete(2))), probe_period=2)
        assert report.holds and report.surjective

    def test_non_surjective(self):
        report = effective_descent_criterion(
            space_functor(SpaceMap(FiniteSpace.point(), FiniteSpace.discrete(2), (0,))), probe_period=2
        )
        assert not report.surjective
        assert report.witness == {"missing": "1"}

    def test_surjective_up_to_isomorphism(self):
        report = effective_descent_criterion(
            space_functor(SpaceMap(FiniteSpace.point(), FiniteSpace.codiscrete(2), (0,))), probe_period=2
        )
        assert report.surjective and not report.holds
        assert report.witness == {"missing": "1", "up_to_iso": True}

    def test_specialization_does_not_lift(self):
        f = SpaceMap(FiniteSpace.discrete(2), FiniteSpace.sierpinski(), (0, 1))
        report = effective_descent_criterion(space_functor(f), probe_period=2)
        assert report.surjective
        assert not report.holds
        assert report.witness["object"] == "0"


class TestUniversality:
    def test_covering_is_universal(self):
        F = space_functor(collapse(FiniteSpace.discrete(2)))
        reports = universality_check(canonical_cocone(kernel_groupoid(F), F), [PointVUlt(), FinSetVUlt(1)])
        assert all(r.ok for r in reports)
        assert [r.functors for r in reports] == [1, 2]

    def test_non_surjective_map_is_not_full(self):
        F = space_functor(SpaceMap(FiniteSpace.point(), FiniteSpace.discrete(2), (0,)))
        reports = universality_check(canonical_cocone(kernel_groupoid(F), F), [FinSetVUlt(1)])
        assert reports[0].essentially_surjective
        assert not reports[0].fully_faithful

    def test_search_over_a_point(self):
        assert descent_search([FiniteSpace.point()], [PointVUlt()]) == []


class TestGroupoids:
    def test_cyclic_action(self):
        G = z2_on_a_point()
        assert G.arrows.n == 2
        assert G.inverse == (0, 1)
        assert groupoid_diagram(G).simplicial_violation() is None

    def test_pair_and_trivial_groupoids(self):
        TopGroupoid.trivial(FiniteSpace.sierpinski())
        G = TopGroupoid.pair_groupoid(FiniteSpace.discrete(2))
        assert len(G.composable()) == 8

    def test_broken_groupoid(self):
        point, two = FiniteSpace.point(), FiniteSpace.discrete(2)
        multiply = {(g, f): 0 for g in range(2) for f in range(2)}
        with pytest.raises(CategoryValidationError):
            TopGroupoid(point, two, (0, 0), (0, 0), (0,), (0, 1), multiply).validate()

    def test_equivariant_sheaves(self):
        category = equivariant_sheaves(z2_on_a_point(), 2)
        assert category.objects == 4

    def test_comparison_on_a_point(self):
        G = z2_on_a_point()
        desc = desc_category(groupoid_diagram(G), FinSetVUlt(2))
        assert desc.objects == 5
        assert len(desc.iso_classes()) == 4
        report = equivariant_comparison(G, 2)
        assert report.ok
        assert (report.equivariant_objects, report.descent_objects) == (4, 5)
