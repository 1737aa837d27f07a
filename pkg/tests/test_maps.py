import pytest
from hypothesis import given
from hypothesis import strategies as st

from tests.strategies import affine_maps, naturals, residue_maps, upsets
from ultrakit.exceptions import CarrierMismatch, QueryOutsideAlgebra
from ultrakit.maps import (
    IndexSet, ResidueMap, StepMap, TableMap, UPFamily, compose, constant_map, identity_map, reindex_family
)
from ultrakit.upset import UPSet


class TestIndexSet:
    def test_points(self):
        assert list(IndexSet.fin(3).points()) == [0, 1, 2]
        with pytest.raises(ValueError):
            IndexSet.nat().points()

    def test_queries_are_clipped(self):
        assert IndexSet.fin(3).as_query(UPSet.evens()) == UPSet.finite([0, 2])
        assert IndexSet.fin(3).as_query([0, 5]) == UPSet.finite([0])
        with pytest.raises(QueryOutsideAlgebra):
            IndexSet.nat().as_query([1, 2])


class TestResidueMap:
    @given(residue_maps(), upsets(), naturals)
    def test_preimage_is_pointwise(self, f, q, n):
        assert (n in f.preimage(q)) == (f(n) in q)

    @given(residue_maps(), upsets(), st.integers(0, 200))
    def test_image_is_pointwise(self, f, s, y):
        witnesses = [k for k in range(0, 3 * (y + 10) * f.modulus) if k in s and f(k) == y]
        if witnesses:
            assert y in f.image(s)

    @given(affine_maps(), affine_maps(), naturals)
    def test_composition(self, f, g, n):
        assert compose(g, f)(n) == g(f(n))

    def test_affine_image(self):
        assert ResidueMap.affine(2, 1).image() == UPSet.odds()

    def test_pieces_are_reduced(self):
        assert ResidueMap(2, ((2, 0), (2, 1))) == ResidueMap.identity()
        assert ResidueMap.floor_div(2).modulus == 2

    def test_injectivity(self):
        assert ResidueMap.affine(2, 1).is_injective()
        assert not ResidueMap.floor_div(2).is_injective()
        assert not ResidueMap.affine(0, 4).is_injective()

    def test_negative_coefficients_rejected(self):
        with pytest.raises(ValueError):
            ResidueMap(1, ((-1, 0),))

    def test_limit_offset(self):
        assert ResidueMap.affine(0, 5).limit_offset(3) == ("point", 5)
        assert ResidueMap.affine(3, 2).limit_offset(1) == ("shift", 5)


class TestTableAndStepMaps:
    def test_table_preimage(self):
        f = TableMap(IndexSet.fin(4), IndexSet.fin(2), (0, 1, 1, 0))
        assert f.preimage(UPSet.finite([1])) == UPSet.finite([1, 2])

    def test_table_rejects_bad_images(self):
        with pytest.raises(CarrierMismatch):
            TableMap(IndexSet.fin(2), IndexSet.fin(2), (0, 2))

    def test_step_map(self):
        f = StepMap.residue_classes(3)
        assert f(7) == 1
        assert f.preimage(UPSet.finite([0])) == UPSet.residue(3, 0)

    def test_compose_table_after_step(self):
        f = StepMap.residue_classes(2)
        g = TableMap(IndexSet.fin(2), IndexSet.fin(3), (2, 0))
        h = compose(g, f)
        assert [h(n) for n in range(4)] == [2, 0, 2, 0]

    def test_compose_checks_carriers(self):
        with pytest.raises(CarrierMismatch):
            compose(TableMap.identity(2), ResidueMap.identity())

    def test_identity_and_constant(self):
        assert identity_map(IndexSet.fin(3)).is_identity()
        assert identity_map(IndexSet.nat()).is_identity()
        assert constant_map(IndexSet.nat(), IndexSet.fin(2), 1)(9) == 1


class TestUPFamily:
    def test_build_merges_values(self):
        fam = UPFamily.build(IndexSet.nat(), [("a", UPSet.evens()), ("a", UPSet.odds())])
        assert fam == UPFamily.constant(IndexSet.nat(), "a")

    def test_level_sets_must_partition(self):
        nat = IndexSet.nat()
        with pytest.raises(ValueError):
            UPFamily(nat, ("a", "b"), (UPSet.full(), UPSet.evens()))
        with pytest.raises(ValueError):
            UPFamily(nat, ("a",), (UPSet.evens(),))

    def test_alternating(self):
        fam = UPFamily.alternating("xyz")
        assert [fam(n) for n in range(5)] == ["x", "y", "z", "x", "y"]
        assert fam.shape() == (0, 3)

    def test_agreement(self):
        first = UPFamily.alternating([0, 1])
        second = UPFamily.constant(IndexSet.nat(), 0)
        assert first.agreement(second) == UPSet.evens()

    def test_reindex(self):
        fam = UPFamily.alternating([0, 1])
        assert reindex_family(fam, ResidueMap.affine(2, 1)) == UPFamily.constant(IndexSet.nat(), 1)

    def test_from_list_and_map_values(self):
        fam = UPFamily.from_list([3, 4, 3])
        assert fam.map_values(lambda v: v % 2)(1) == 0
        assert fam.level_set(3) == UPSet.finite([0, 2])
