from itertools import product

from hypothesis import strategies as st

from ultrakit.maps import IndexSet, ResidueMap, UPFamily
from ultrakit.space import FiniteSpace, SpaceMap
from ultrakit.ultrafilter import NormalForm, factorial, from_normal_form, principal
from ultrakit.upset import UPSet


bits = st.integers(min_value=0, max_value=1)
naturals = st.integers(min_value=0, max_value=80)


@st.composite
def upsets(draw, max_prefix=4, max_period=4):
    prefix = draw(st.lists(bits, max_size=max_prefix))
    period = draw(st.lists(bits, min_size=1, max_size=max_period))
    return UPSet(tuple(prefix), tuple(period))


@st.composite
def affine_maps(draw):
    return ResidueMap.affine(draw(st.integers(0, 4)), draw(st.integers(0, 6)))


@st.composite
def residue_maps(draw):
    modulus = draw(st.integers(1, 3))
    pieces = draw(st.lists(
        st.tuples(st.integers(0, 3), st.integers(0, 5)), min_size=modulus, max_size=modulus
    ))
    return ResidueMap(modulus, tuple(pieces))


def nat_ultrafilters():
    """Principal and shifted factorial ultrafilters on ℕ."""
    nat = IndexSet.nat()
    return st.one_of(
        st.integers(0, 20).map(lambda n: principal(nat, n)),
        st.just(factorial()),
        st.integers(1, 6).map(lambda b: from_normal_form(NormalForm(nat, shift=b))),
    )


@st.composite
def fin_ultrafilters(draw, max_size=3):
    size = draw(st.integers(1, max_size))
    return principal(IndexSet.fin(size), draw(st.integers(0, size - 1)))


@st.composite
def periodic_families(draw, values, max_period=4):
    """An ℕ-family cycling through a list drawn from ``values``."""
    cycle = draw(st.lists(st.sampled_from(values), min_size=1, max_size=max_period))
    return UPFamily.alternating(cycle)


def _closure(n, relation):
    relation = set(relation) | {(a, a) for a in range(n)}
    for k, a, b in product(range(n), repeat=3):
        if (a, k) in relation and (k, b) in relation:
            relation.add((a, b))
    return relation


@st.composite
def spaces(draw, max_points=3):
    n = draw(st.integers(1, max_points))
    pairs = draw(st.sets(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1))))
    relation = _closure(n, pairs)
    return FiniteSpace.from_preorder(n, lambda a, b: (a, b) in relation)


@st.composite
def space_maps(draw, max_points=3):
    source = draw(spaces(max_points))
    target = draw(spaces(max_points))
    images = draw(st.lists(st.integers(0, target.n - 1), min_size=source.n, max_size=source.n))
    return SpaceMap(source, target, tuple(images))
