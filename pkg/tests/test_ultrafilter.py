import pytest
from hypothesis import given

from tests.strategies import affine_maps, nat_ultrafilters, upsets
from ultrakit.enums import IsoVerdict, SumKind
from ultrakit.exceptions import CarrierMismatch, NotAnUltrafilterMap, UnsupportedEncoding
from ultrakit.maps import IndexSet, ResidueMap, StepMap, TableMap, UPFamily
from ultrakit.ultrafilter import (
    NormalForm, Principal, Sum, agree_on_probes, associativity_check, encoding_for, factorial, family_limit,
    from_normal_form, iso_witness_holds, lattice_law_violation, principal, product_filter_check,
    pushforward_functoriality_check, require_arrow,
    star, tensor, tensor_swap_search, uf_arrow_check, uf_equal, uf_iso, uf_limit, uf_pushforward, uf_sum,
    unitor_check
)
from ultrakit.upset import UPSet, probe_sets


fin2 = IndexSet.fin(2)
fin3 = IndexSet.fin(3)
nat = IndexSet.nat()


class TestLargeness:
    @given(nat_ultrafilters(), upsets())
    def test_exactly_one_of_a_set_and_its_complement(self, mu, q):
        assert mu.large(q) != mu.large(~q)

    @given(nat_ultrafilters(), upsets(), upsets())
    def test_lattice_laws(self, mu, a, b):
        assert lattice_law_violation(mu, a, b) is None

    def test_upward_closure_is_checked_on_unions(self):
        class EvensOnly:
            carrier = IndexSet.nat()

            def large(self, q):
                return q in (UPSet.residue(2, 0), UPSet.full())

        evens = UPSet.residue(2, 0)
        assert lattice_law_violation(EvensOnly(), evens, UPSet.finite([1])) == "not upward closed"

    @given(nat_ultrafilters())
    def test_normal_form_is_faithful(self, mu):
        assert agree_on_probes(mu, from_normal_form(mu.normal_form()))

    def test_factorial(self):
        mu = factorial()
        assert mu.large(UPSet.evens())
        assert not mu.large(UPSet.odds())
        assert not mu.large(UPSet.residue(3, 1))
        assert mu.large(UPSet.at_least(5))
        assert not mu.large(UPSet.finite([0, 1, 2, 6, 24]))

    def test_shifted_factorial(self):
        mu = from_normal_form(NormalForm(nat, shift=1))
        assert mu.large(UPSet.odds())
        assert mu.large(UPSet.residue(3, 1))

    def test_principal(self):
        assert principal(nat, 4).large(UPSet.evens())
        assert not principal(fin2, 1).large([0])
        with pytest.raises(CarrierMismatch):
            principal(fin2, 2)

    def test_star(self):
        assert star() == Principal(IndexSet.fin(1), 0)


class TestPushforward:
    @given(nat_ultrafilters(), affine_maps(), upsets())
    def test_largeness_pulls_back(self, mu, f, q):
        assert uf_pushforward(mu, f).large(q) == mu.large(f.preimage(q))

    @given(nat_ultrafilters(), affine_maps(), affine_maps())
    def test_functoriality(self, mu, f, g):
        assert pushforward_functoriality_check(mu, f, g)

    def test_collapse_to_principal(self):
        assert uf_pushforward(factorial(), StepMap.residue_classes(2)) == Principal(fin2, 0)
        assert uf_pushforward(factorial(), ResidueMap.affine(0, 3)) == Principal(nat, 3)

    def test_identity_is_skipped(self):
        mu = factorial()
        assert uf_pushforward(mu, ResidueMap.identity()) is mu

    def test_floor_div_keeps_factorial(self):
        assert uf_equal(uf_pushforward(factorial(), ResidueMap.floor_div(2)), factorial())

    def test_carrier_checked(self):
        with pytest.raises(CarrierMismatch):
            uf_pushforward(principal(fin2, 0), ResidueMap.identity())

    def test_arrows(self):
        f = StepMap.residue_classes(2)
        assert uf_arrow_check(f, factorial(), principal(fin2, 0))
        with pytest.raises(NotAnUltrafilterMap):
            require_arrow(f, factorial(), principal(fin2, 1))


class TestSums:
    def test_finite_sum_is_principal(self):
        nus = UPFamily.from_list([principal(fin3, 0), principal(fin2, 1)])
        assert uf_sum(principal(fin2, 1), nus) == Principal(IndexSet.fin(5), 4)

    def test_encodings(self):
        assert encoding_for(principal(fin2, 0), UPFamily.from_list([principal(fin3, 0)] * 2)).kind is SumKind.FIN_FIN
        assert encoding_for(factorial(), UPFamily.constant(nat, principal(fin2, 0))).kind is SumKind.NAT_FIN
        assert encoding_for(principal(fin2, 0), UPFamily.from_list([factorial()] * 2)).kind is SumKind.FIN_NAT
        assert encoding_for(factorial(), ResidueMap.affine(1, 0)).kind is SumKind.GRAPH
        with pytest.raises(UnsupportedEncoding):
            encoding_for(factorial(), UPFamily.constant(nat, factorial()))

    def test_encode_decode(self):
        enc = encoding_for(factorial(), UPFamily.constant(nat, principal(fin3, 0)))
        assert enc.encode(4, 2) == 14
        assert enc.decode(14) == (4, 2)
        enc = encoding_for(principal(fin3, 0), UPFamily.from_list([factorial()] * 3))
        assert enc.encode(1, 5) == 16
        assert enc.decode(16) == (1, 5)

    def test_tensor_with_principal(self):
        assert tensor(factorial(), principal(fin2, 1)).normal_form() == NormalForm(nat, shift=1)
        assert tensor(principal(fin2, 1), factorial()).normal_form() == NormalForm(nat, shift=1)

    def test_nonprincipal_sum_stays_symbolic(self):
        value = uf_sum(factorial(), UPFamily.constant(nat, principal(fin2, 0)))
        assert isinstance(value, Sum)
        assert value.large(UPSet.residue(4, 0))

    def test_graph_sum(self):
        value = uf_sum(factorial(), ResidueMap.affine(1, 0))
        assert value.normal_form() == NormalForm(nat, shift=0)

    def test_unitors(self):
        assert unitor_check(factorial())
        assert unitor_check(principal(fin3, 2))

    def test_product_filter(self):
        pairs = [(UPSet.evens(), UPSet.finite([1])), (UPSet.at_least(3), UPSet.full())]
        assert product_filter_check(factorial(), principal(fin2, 1), pairs) is None

    def test_no_tensor_swap_counterexample(self):
        assert tensor_swap_search([factorial(), principal(nat, 2), principal(fin2, 0)]) is None

    def test_finite_associativity(self):
        lam = principal(fin2, 0)
        mus = UPFamily.from_list([principal(fin2, 1), principal(IndexSet.fin(1), 0)])
        nus = UPFamily.from_list([principal(IndexSet.fin(1), 0), principal(fin2, 1), principal(fin3, 2)])
        assert associativity_check(lam, mus, nus)


class TestLimitsAndIso:
    def test_limit_of_alternating_family(self):
        family = UPFamily.alternating([principal(fin2, 0), principal(fin2, 1)])
        assert uf_limit(factorial(), family) == Principal(fin2, 0)

    def test_limit_of_constant_family(self):
        assert uf_limit(factorial(), UPFamily.constant(nat, principal(fin3, 2))) == principal(fin3, 2)

    def test_family_limit(self):
        assert family_limit(factorial(), UPFamily.alternating("abc")) == "a"
        assert family_limit(principal(nat, 4), UPFamily.alternating("abc")) == "b"

    def test_iso_verdicts(self):
        shifted = from_normal_form(NormalForm(nat, shift=2))
        result = uf_iso(factorial(), shifted)
        assert result.verdict is IsoVerdict.ISOMORPHIC
        assert iso_witness_holds(result, factorial(), shifted, probe_sets(2, 3))
        assert uf_iso(factorial(), principal(nat, 3)).verdict is IsoVerdict.NOT_ISOMORPHIC
        assert uf_iso(principal(fin2, 0), principal(nat, 7))

    def test_table_arrow(self):
        f = TableMap(fin3, fin2, (1, 1, 0))
        assert uf_arrow_check(f, principal(fin3, 1), principal(fin2, 1))
        assert not uf_arrow_check(f, principal(fin3, 2), principal(fin2, 1))
