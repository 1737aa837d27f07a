import pytest
from hypothesis import given

from tests.strategies import naturals, upsets
from ultrakit.enums import Classification
from ultrakit.exceptions import ParseError
from ultrakit.upset import UPSet, probe_sets, up_algebra, upset_union


class TestUPSet:
    @given(upsets(), upsets(), naturals)
    def test_boolean_operations_are_pointwise(self, a, b, n):
        assert (n in a & b) == (n in a and n in b)
        assert (n in a | b) == (n in a or n in b)
        assert (n in a - b) == (n in a and n not in b)
        assert (n in a ^ b) == ((n in a) != (n in b))
        assert (n in ~a) == (n not in a)

    @given(upsets())
    def test_double_complement(self, a):
        assert ~~a == a

    @given(upsets(), upsets())
    def test_de_morgan(self, a, b):
        assert ~(a | b) == ~a & ~b

    @given(upsets())
    def test_text_round_trip(self, a):
        assert UPSet.from_text(a.to_text()) == a

    def test_canonical_form(self):
        assert UPSet((1, 0), (1, 0)) == UPSet((), (1, 0))
        assert UPSet((), (1, 1, 1)) == UPSet.full()
        assert UPSet((0, 0), (0,)) == UPSet.empty()

    def test_classify(self):
        assert UPSet.empty().classify() is Classification.EMPTY
        assert UPSet.finite([1, 3]).classify() is Classification.FINITE
        assert UPSet.at_least(3).classify() is Classification.COFINITE
        assert UPSet.full().classify() is Classification.FULL
        assert UPSet.evens().classify() is Classification.NEITHER

    def test_elements(self):
        assert UPSet.finite([4, 1]).elements() == [1, 4]
        with pytest.raises(ValueError):
            UPSet.evens().elements()

    def test_residue(self):
        threes = UPSet.residue(3, 2)
        assert threes.members_below(12) == [2, 5, 8, 11]
        assert threes.first_member() == 2

    def test_shifted(self):
        assert UPSet.evens().shifted(1) == UPSet.odds()
        assert UPSet.finite([0, 2]).shifted(-1) == UPSet.finite([1])

    def test_subset(self):
        assert UPSet.residue(4, 0).is_subset(UPSet.evens())
        assert not UPSet.evens().is_subset(UPSet.residue(4, 0))

    def test_malformed_text(self):
        with pytest.raises(ParseError):
            UPSet.from_text("prefix:10;period:")
        with pytest.raises(ParseError):
            UPSet.from_text("prefix:12;period:1")
        with pytest.raises(ParseError):
            UPSet.from_text("period:1")

    def test_empty_period_rejected(self):
        with pytest.raises(ValueError):
            UPSet((1,), ())

    def test_algebra_by_name(self):
        a, b = UPSet.evens(), UPSet.at_least(3)
        assert up_algebra(a, b, "and") == a & b
        assert up_algebra(a, b, "diff") == a - b
        with pytest.raises(ValueError):
            up_algebra(a, b, "xor")

    def test_union_of_residues(self):
        assert upset_union(UPSet.residue(3, r) for r in range(3)) == UPSet.full()

    def test_probe_sets_are_distinct(self):
        probes = probe_sets(2, 3)
        assert len(probes) == len(set(probes))
        assert UPSet.empty() in probes and UPSet.full() in probes
