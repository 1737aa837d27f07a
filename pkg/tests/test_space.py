import random

import pytest
from hypothesis import assume, given

from tests.strategies import space_maps, spaces
from ultrakit.exceptions import (
    CarrierMismatch, MissingEmptyOrFull, NotClosedUnderIntersection, NotClosedUnderUnion, NotContinuous,
    UnboundedFibers
)
from ultrakit.maps import IndexSet, ResidueMap, StepMap, UPFamily
from ultrakit.space import (
    EtaleVerdict, FiniteSpace, PointFamily, SpaceMap, all_topologies, brute_force_topologies, continuous_by_opens,
    convergence_relation, derived_sets, etale_check, fiber_ultraproduct, identity_space_map, interior_by_lattice,
    limit_points, map_continuous, map_open, open_inclusion, principal_over, proper_check, random_space,
    rel_beta_validate, replay_etale, space_validate, ucvg, ucvg_to_topology
)
from ultrakit.ultrafilter import factorial, principal
from ultrakit.upset import UPSet


def collapse(space):
    return SpaceMap(space, FiniteSpace.point(), (0,) * space.n)


class TestFiniteSpace:
    def test_topology_counts(self):
        assert len(list(all_topologies(1))) == 1
        assert len(list(all_topologies(2))) == 4
        assert len(list(all_topologies(3))) == 29

    def test_enumeration_matches_brute_force(self):
        for n in (1, 2, 3):
            assert set(all_topologies(n)) == set(brute_force_topologies(n))

    def test_sierpinski(self):
        s = FiniteSpace.sierpinski()
        assert s.specializes(0, 1)
        assert not s.specializes(1, 0)
        assert s.is_t0()
        assert not FiniteSpace.codiscrete(2).is_t0()

    def test_validation_errors(self):
        with pytest.raises(MissingEmptyOrFull):
            space_validate(2, [[0], [0, 1]])
        with pytest.raises(NotClosedUnderUnion):
            space_validate(3, [[], [0], [1], [0, 1, 2]])
        with pytest.raises(NotClosedUnderIntersection):
            space_validate(3, [[], [0, 1], [1, 2], [0, 1, 2]])
        with pytest.raises(CarrierMismatch):
            space_validate(2, [[], [5], [0, 1]])

    def test_subspaces_and_products(self):
        s = FiniteSpace.sierpinski()
        sub, inclusion = s.subspace([1])
        assert sub == FiniteSpace.point()
        assert inclusion.images == (1,)
        assert s.product(FiniteSpace.point()) == s
        with pytest.raises(CarrierMismatch):
            open_inclusion(s, [0])

    def test_random_space_is_a_topology(self):
        rng = random.Random(7)
        for _ in range(20):
            space = random_space(rng, 4)
            assert space_validate(space.n, space.opens) == space

    @given(spaces())
    def test_convergence_round_trip(self, space):
        assert ucvg_to_topology(space.n, convergence_relation(space)) == space
        assert rel_beta_validate(space.n, convergence_relation(space)).valid

    @given(spaces())
    def test_interiors_agree(self, space):
        for subset in space.opens | {frozenset([0])}:
            assert interior_by_lattice(space, subset) == derived_sets(space, subset).interior


class TestConvergence:
    def test_principal_families(self):
        s = FiniteSpace.sierpinski()
        assert ucvg(s, 0, PointFamily.principal(1))
        assert not ucvg(s, 1, PointFamily.principal(0))

    def test_factorial_family(self):
        s = FiniteSpace.sierpinski()
        family = PointFamily(factorial(), UPFamily.alternating([0, 1]))
        assert family.pushforward_point() == 0
        assert limit_points(s, family) == frozenset([0])
        assert ucvg(s, 0, family)
        assert not ucvg(s, 1, family)

    def test_rel_beta_axioms(self):
        assert rel_beta_validate(2, {(0, 0)}).axiom == 1
        report = rel_beta_validate(3, {(0, 0), (1, 1), (2, 2), (0, 1), (1, 2)})
        assert not report.valid
        assert (report.axiom, report.witness) == (2, (0, 1, 2))


class TestMaps:
    @given(space_maps())
    def test_characterisations_agree(self, f):
        map_continuous(f)
        map_open(f)
        assert proper_check(f).agrees

    @given(space_maps())
    def test_etale_verdicts_replay(self, f):
        assume(continuous_by_opens(f))
        verdict = etale_check(f)
        assert replay_etale(f, verdict)

    def test_sierpinski_collapse_is_not_etale(self):
        verdict = etale_check(collapse(FiniteSpace.sierpinski()))
        assert not verdict.is_etale
        assert verdict.counterexample["point"] == 0
        assert len(verdict.counterexample["lifts"]) == 2
        assert verdict.to_document()["etale"] is False

    def test_coverings_are_etale(self):
        assert etale_check(collapse(FiniteSpace.discrete(2))).is_etale
        assert etale_check(identity_space_map(FiniteSpace.sierpinski())).is_etale
        assert etale_check(open_inclusion(FiniteSpace.sierpinski(), [1])).is_etale

    def test_forged_certificates_do_not_replay(self):
        covering = collapse(FiniteSpace.discrete(2))
        whole = frozenset({0, 1})
        assert replay_etale(covering, etale_check(covering))
        assert not replay_etale(covering, EtaleVerdict(True, ((0, whole, {0: 0}),)))
        onto = SpaceMap(FiniteSpace.discrete(2), FiniteSpace.sierpinski(), (0, 1))
        assert not replay_etale(onto, EtaleVerdict(True, ((0, whole, {0: 0, 1: 1}),)))
        assert not replay_etale(covering, EtaleVerdict(True, ((0, frozenset({0}), {0: 1}),)))

    def test_discontinuous_map_rejected(self):
        s = FiniteSpace.sierpinski()
        swap = SpaceMap(s, s, (1, 0))
        assert not map_continuous(swap)
        with pytest.raises(NotContinuous):
            etale_check(swap)

    def test_collapse_is_open(self):
        assert map_open(collapse(FiniteSpace.sierpinski()))


class TestFibers:
    def test_principal_over(self):
        assert principal_over(factorial(), ResidueMap.floor_div(2)).witness == UPSet.evens()
        assert not principal_over(factorial(), StepMap.residue_classes(2)).holds
        assert principal_over(factorial(), ResidueMap.affine(2, 1)).witness == UPSet.full()
        assert principal_over(principal(IndexSet.fin(2), 1), collapse(FiniteSpace.discrete(2))).holds

    def test_fiber_ultraproducts(self):
        assert len(fiber_ultraproduct(collapse(FiniteSpace.discrete(2)), principal(IndexSet.fin(1), 0))) == 2
        assert len(fiber_ultraproduct(ResidueMap.floor_div(2), factorial())) == 2
        with pytest.raises(UnboundedFibers):
            fiber_ultraproduct(ResidueMap.affine(0, 3), factorial())
