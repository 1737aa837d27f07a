import pytest

from ultrakit.category import FiniteCategory
from ultrakit.exceptions import CarrierMismatch, TypeMismatch
from ultrakit.maps import IndexSet, UPFamily
from ultrakit.space import FiniteSpace, SpaceMap
from ultrakit.ultrafilter import NormalForm, factorial, from_normal_form, principal, star
from ultrakit.vult import (
    Alex, FinSetVUlt, PointVUlt, PtSpace, VUltNat, all_vfunctors, all_vnats, associativity_holds, functor_validate,
    identity_vfunctor, nat_validate, probe_families, space_functor, unit_laws_hold, vult_compose, vult_points,
    vult_pullback
)


nat = IndexSet.nat()


def first_out(X, a):
    arrows = [(b, p) for b in X.objects for p in X.star_hom(a, b)]
    others = [(b, p) for b, p in arrows if (b, p) != (a, X.star_identity(a))]
    b, p = (others or arrows)[0]
    return X.star_arrow(a, b, p)


class TestHoms:
    def test_finset_hom_into_a_constant_family(self):
        X = FinSetVUlt(3)
        family = UPFamily.constant(nat, frozenset(range(3)))
        assert len(X.hom(frozenset([0, 1]), factorial(), family)) == 9

    def test_finset_hom_follows_the_ultrafilter(self):
        X = FinSetVUlt(3)
        family = UPFamily.alternating([frozenset([0]), frozenset([1, 2])])
        a = frozenset([0, 1])
        assert len(X.hom(a, factorial(), family)) == 1
        assert len(X.hom(a, from_normal_form(NormalForm(nat, shift=1)), family)) == 4

    def test_empty_fibers(self):
        X = FinSetVUlt(2)
        family = UPFamily.constant(nat, frozenset())
        assert X.hom(frozenset([0]), factorial(), family) == []
        assert len(X.hom(frozenset(), factorial(), family)) == 1

    def test_point_space_hom(self):
        X = PtSpace(FiniteSpace.sierpinski())
        family = UPFamily.alternating([0, 1])
        assert len(X.hom(0, factorial(), family)) == 1
        assert X.hom(1, factorial(), family) == []

    def test_alexandroff_hom(self):
        X = Alex(FiniteCategory.arrow_category())
        arrows = X.hom(0, principal(IndexSet.fin(2), 1), UPFamily.from_list([0, 1]))
        assert [f.payload for f in arrows] == [2]
        assert arrows[0].limit_object == 1

    def test_query_checks(self):
        X = PointVUlt()
        with pytest.raises(CarrierMismatch):
            X.hom(0, factorial(), UPFamily.from_list([0]))
        with pytest.raises(CarrierMismatch):
            X.hom(0, star(), UPFamily.from_list([3]))


class TestComposition:
    def test_laws_on_finset(self):
        X = FinSetVUlt(2)
        hs = [first_out(X, c) for c in X.objects]
        checked = 0
        for mu, family in probe_families(X, 2)[-12:]:
            for a in X.objects:
                for f in X.hom(a, mu, family):
                    gs = f.codomain.map_values(lambda b: first_out(X, b))
                    assert unit_laws_hold(X, f)
                    assert associativity_holds(X, f, gs, hs)
                    checked += 1
        assert checked > 0

    def test_mismatched_composition(self):
        X = PtSpace(FiniteSpace.sierpinski())
        f = X.star_arrow(0, 1, ())
        with pytest.raises(TypeMismatch):
            vult_compose(X, UPFamily.from_list([X.identity(0)]), f)

    def test_probe_families(self):
        X = PointVUlt()
        assert len(probe_families(X, 3)) == 1 + 2


class TestFunctors:
    def test_points(self):
        C = vult_points(PtSpace(FiniteSpace.sierpinski()))
        assert C.objects == 2
        assert len(C.arrows) == 3

    def test_all_functors(self):
        assert len(list(all_vfunctors(PointVUlt(), PtSpace(FiniteSpace.sierpinski())))) == 2
        assert len(list(all_vfunctors(PtSpace(FiniteSpace.sierpinski()), PointVUlt()))) == 1

    def test_space_functors(self):
        s = FiniteSpace.sierpinski()
        assert functor_validate(space_functor(SpaceMap(s, FiniteSpace.point(), (0, 0))), probe_period=2)
        report = functor_validate(space_functor(SpaceMap(s, s, (1, 0))), probe_period=2)
        assert not report.valid
        assert report.witness["law"] == "typing"
        assert report.strategy == "principal+factorial"

    def test_natural_transformations(self):
        X = PtSpace(FiniteSpace.sierpinski())
        identity = identity_vfunctor(X)
        assert nat_validate(VUltNat(identity, identity, ((), ())), probe_period=2)
        assert len(list(all_vnats(identity, identity))) == 1

    def test_kernel_pair(self):
        F = space_functor(SpaceMap(FiniteSpace.discrete(2), FiniteSpace.point(), (0, 0)))
        P = vult_pullback(F, F)
        assert len(P.objects) == 4
        assert sorted(o[1:] for o in P.objects) == [(0, 0), (0, 1), (1, 0), (1, 1)]
