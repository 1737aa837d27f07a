import pytest
from hypothesis import given, settings

from tests.strategies import nat_ultrafilters, upsets
from ultrakit.exceptions import CarrierMismatch, EmptyLargeFiber
from ultrakit.maps import IndexSet, ResidueMap, TableMap, UPFamily
from ultrakit.ultrafilter import factorial, principal
from ultrakit.ultraproduct import (
    BoundedFamily, UPElement, associator_coherence, associator_round_trip, curry, curry_matches_associator,
    dependent_product_check, diagonal, quantifier_exchange, reindex, reindex_associator_check, saturation_check,
    ufam_eq, unitor_triangles, uncurry, uprod_enumerate
)
from ultrakit.upset import UPSet


nat = IndexSet.nat()
fin1, fin2, fin3 = IndexSet.fin(1), IndexSet.fin(2), IndexSet.fin(3)


def split_family():
    """A_s = {0} on even s, {1, 2} on odd s."""
    return BoundedFamily.from_fibers(nat, 3, lambda s: {0} if s % 2 == 0 else {1, 2}, 0, 2)


class TestUltraproductSets:
    def test_classes_follow_the_ultrafilter(self):
        fam = split_family()
        assert uprod_enumerate(factorial(), fam).values() == [0]
        assert uprod_enumerate(principal(nat, 3), fam).values() == [1, 2]

    def test_empty_on_a_large_set(self):
        fam = BoundedFamily.from_fibers(nat, 2, lambda s: set() if s % 2 == 0 else {0}, 0, 2)
        with pytest.raises(EmptyLargeFiber):
            uprod_enumerate(factorial(), fam)
        assert len(uprod_enumerate(principal(nat, 1), fam)) == 1

    def test_carrier_checked(self):
        with pytest.raises(CarrierMismatch):
            uprod_enumerate(principal(fin2, 0), split_family())

    def test_class_of(self):
        space = uprod_enumerate(principal(nat, 3), split_family())
        x = UPElement(UPFamily.alternating([0, 2]), 3)
        assert space.contains(x)
        assert space.class_of(x) == 1

    def test_saturation(self):
        assert saturation_check(factorial(), split_family()).ok

    @settings(max_examples=40)
    @given(nat_ultrafilters(), upsets(2, 2), upsets(2, 2))
    def test_saturation_on_random_families(self, mu, q, r):
        fam = BoundedFamily(nat, 2, (q, ~q | r))
        report = saturation_check(mu, fam, 1, 2)
        assert report.ok
        assert 1 <= report.classes <= 2

    def test_element_equality(self):
        x = UPElement(UPFamily.alternating([0, 1]), 2)
        y = UPElement.constant(nat, 2, 0)
        assert ufam_eq(x, y, factorial())
        assert not ufam_eq(x, y, principal(nat, 1))

    def test_element_values_are_bounded(self):
        with pytest.raises(CarrierMismatch):
            UPElement.from_list([0, 3], 2)


class TestFunctoriality:
    def test_quantifier_exchange(self):
        fam = split_family()
        psi = [UPSet.evens(), UPSet.full(), UPSet.empty()]
        left, right = quantifier_exchange(factorial(), fam, psi)
        assert left == right
        left, right = quantifier_exchange(principal(nat, 1), fam, psi)
        assert left == right is False

    def test_reindex(self):
        a = UPElement(UPFamily.alternating([0, 1]), 2)
        fam = BoundedFamily.constant(nat, 2, [0, 1])
        pulled = reindex(ResidueMap.affine(2, 0), factorial(), factorial(), fam, a)
        assert pulled == UPElement.constant(nat, 2, 0)

    def test_diagonal(self):
        assert diagonal(factorial(), 1, 3) == UPElement.constant(nat, 3, 1)

    def test_dependent_product(self):
        fam = BoundedFamily(nat, 2, (UPSet.full(), UPSet.evens()))
        dependent = [[UPSet.full(), UPSet.empty()], [UPSet.odds(), UPSet.evens()]]
        left, right = dependent_product_check(factorial(), fam, dependent)
        assert left == right == {(0, 0), (1, 1)}


class TestAssociators:
    def test_round_trip(self):
        nus = UPFamily.from_list([principal(fin2, 0), principal(fin3, 2)])
        x = UPElement.from_list([0, 1, 1, 0, 1], 2)
        assert associator_round_trip(principal(fin2, 1), nus, x)

    def test_round_trip_on_nat(self):
        nus = UPFamily.constant(nat, principal(fin2, 1))
        x = UPElement(UPFamily.alternating([0, 1, 1]), 2)
        assert associator_round_trip(factorial(), nus, x)

    def test_curry_round_trip(self):
        mu = principal(fin2, 0)
        nus = UPFamily.from_list([principal(fin2, 0), principal(fin2, 1)])
        fam = BoundedFamily.from_fibers(IndexSet.fin(4), 2, lambda k: {k % 2})
        assert uncurry(mu, nus, curry(mu, nus, fam)) == fam
        x = UPElement.from_list([0, 1, 0, 1], 2)
        assert curry_matches_associator(mu, nus, fam, x)

    def test_unitors(self):
        x = UPElement(UPFamily.alternating([0, 1]), 2)
        assert unitor_triangles(factorial(), BoundedFamily.constant(nat, 2, [0, 1]), x)

    def test_coherence_square(self):
        nus = UPFamily.from_list([principal(fin1, 0), principal(fin2, 1)])
        lams = UPFamily.from_list([principal(fin2, 0), principal(fin1, 0), principal(fin2, 1)])
        x = UPElement.from_list([1, 0, 1, 1, 0], 2)
        assert associator_coherence(principal(fin2, 1), nus, lams, x)

    def test_reindexing_square(self):
        f = TableMap(fin3, fin2, (1, 1, 0))
        nus = UPFamily.from_list([principal(fin2, 0), principal(fin3, 1)])
        x = UPElement.from_list([0, 1, 0, 1, 1], 2)
        assert reindex_associator_check(f, principal(fin3, 0), principal(fin2, 1), nus, x)

    @pytest.mark.parametrize("p", [2, 3, 4])
    def test_coherence_square_over_factorial(self, p):
        nus = UPFamily.from_function(nat, lambda s: principal(fin2, s % 2), 0, 2)
        lams = UPFamily.from_function(nat, lambda j: principal(fin3, j % 3), 0, 3)
        x = UPElement(UPFamily.alternating(range(p)), p)
        assert associator_coherence(factorial(), nus, lams, x)

    @pytest.mark.parametrize("p", [2, 3, 4])
    def test_reindexing_square_over_factorial(self, p):
        nus = UPFamily.from_function(nat, lambda s: principal(fin2, s % 2), 0, 2)
        x = UPElement(UPFamily.alternating(range(p)), p)
        assert reindex_associator_check(ResidueMap.affine(p, 0), factorial(), factorial(), nus, x)
