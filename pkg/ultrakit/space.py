from __future__ import annotations

from collections import namedtuple
from dataclasses import dataclass
from itertools import combinations, product

from .exceptions import (
    CarrierMismatch, MissingEmptyOrFull, NotClosedUnderIntersection, NotClosedUnderUnion,
    NotContinuous, SearchInconclusive, TheoremMismatch, UnboundedFibers
)
from .maps import IndexSet, ResidueMap, StepMap, TableMap, UPFamily
from .ultrafilter import Principal
from .ultraproduct import BoundedFamily, uprod_enumerate
from .upset import UPSet

DerivedSets = namedtuple("DerivedSets", ["interior", "closure"])


@dataclass(frozen=True)
class FiniteSpace:
    """A topology on the points 0..n-1, stored by its opens."""
    n: int
    opens: frozenset

    @property
    def points(self):
        return range(self.n)

    @property
    def full(self):
        return frozenset(range(self.n))

    # Constructors

    @classmethod
    def from_preorder(cls, n, leq):
        """The opens are the sets closed upward under ``leq`` (a ≤ b: b is in every open containing a)."""
        opens = set()
        for bits in product((0, 1), repeat=n):
            subset = frozenset(i for i in range(n) if bits[i])
            if all(b in subset for a in subset for b in range(n) if leq(a, b)):
                opens.add(subset)
        return cls(n, frozenset(opens))

    @classmethod
    def discrete(cls, n):
        return cls.from_preorder(n, lambda a, b: a == b)

    @classmethod
    def codiscrete(cls, n):
        return cls.from_preorder(n, lambda a, b: True)

    @classmethod
    def sierpinski(cls):
        """Points ⊥ = 0 and ⊤ = 1; {⊤} is open."""
        return space_validate(2, [[], [1], [0, 1]])

    @classmethod
    def point(cls):
        return cls.discrete(1)

    # Structure

    def is_open(self, subset):
        return frozenset(subset) in self.opens

    def is_closed(self, subset):
        return self.full - frozenset(subset) in self.opens

    def specializes(self, a, b):
        """a ≼ δ_b: every open containing a contains b."""
        return all(b in u for u in self.opens if a in u)

    def specialization(self):
        return frozenset((a, b) for a in self.points for b in self.points if self.specializes(a, b))

    def minimal_open(self, a):
        return frozenset(b for b in self.points if self.specializes(a, b))

    def is_t0(self):
        return all(not (self.specializes(a, b) and self.specializes(b, a))
                   for a, b in combinations(self.points, 2))

    def subspace(self, points):
        """The subspace on ``points`` relabelled 0..k-1, with its inclusion."""
        points = sorted(set(points))
        position = {p: i for i, p in enumerate(points)}
        opens = {frozenset(position[p] for p in u if p in position) for u in self.opens}
        sub = FiniteSpace(len(points), frozenset(opens))
        return sub, SpaceMap(sub, self, tuple(points))

    def product(self, other):
        """Product space; the pair (a, b) is the point a·other.n + b."""
        m = other.n
        return FiniteSpace.from_preorder(
            self.n * m,
            lambda x, y: self.specializes(x // m, y // m) and other.specializes(x % m, y % m),
        )

    def to_document(self):
        return {"points": self.n, "opens": sorted(sorted(u) for u in self.opens)}

    def __str__(self):
        return "FiniteSpace({}, {})".format(self.n, sorted(sorted(u) for u in self.opens))


def space_validate(n, opens):
    """Validate a list of subsets of Fin(n) as a topology."""
    family = set()
    for u in opens:
        u = frozenset(u)
        if any(not isinstance(p, int) or not 0 <= p < n for p in u):
            raise CarrierMismatch(f"open {sorted(u)} is not a subset of Fin({n})")
        family.add(u)
    full = frozenset(range(n))
    if frozenset() not in family or full not in family:
        raise MissingEmptyOrFull("the empty set and the full set must both be open")
    for u, v in combinations(sorted(family, key=sorted), 2):
        if u | v not in family:
            raise NotClosedUnderUnion(f"{sorted(u)} ∪ {sorted(v)} is not open")
        if u & v not in family:
            raise NotClosedUnderIntersection(f"{sorted(u)} ∩ {sorted(v)} is not open")
    return FiniteSpace(n, frozenset(family))


def all_preorders(n):
    pairs = [(a, b) for a in range(n) for b in range(n) if a != b]
    for bits in product((0, 1), repeat=len(pairs)):
        relation = {pair for pair, bit in zip(pairs, bits) if bit}
        if all((a, c) in relation for a, b in relation for b2, c in relation if b == b2 and a != c):
            yield relation


def all_topologies(n):
    """Every topology on n points, one per preorder."""
    for relation in all_preorders(n):
        yield FiniteSpace.from_preorder(n, lambda a, b, relation=relation: a == b or (a, b) in relation)


def brute_force_topologies(n):
    """Every union- and intersection-closed family containing ∅ and the full set."""
    full = frozenset(range(n))
    middle = [frozenset(c) for k in range(1, n) for c in combinations(range(n), k)]
    for bits in product((0, 1), repeat=len(middle)):
        family = {frozenset(), full} | {u for u, bit in zip(middle, bits) if bit}
        if all(u | v in family and u & v in family for u in family for v in family):
            yield FiniteSpace(n, frozenset(family))


def random_space(rng, n, density=0.3):
    """A random topology from the transitive closure of a random relation."""
    relation = {(a, b) for a in range(n) for b in range(n) if a != b and rng.random() < density}
    changed = True
    while changed:
        changed = False
        for (a, b), (c, d) in product(list(relation), repeat=2):
            if b == c and a != d and (a, d) not in relation:
                relation.add((a, d))
                changed = True
    return FiniteSpace.from_preorder(n, lambda a, b: a == b or (a, b) in relation)


# Ultraconvergence


@dataclass(frozen=True)
class PointFamily:
    """A mu-family of points (x_s)_{s:mu}."""
    mu: object
    values: UPFamily

    def __post_init__(self):
        if self.values.index != self.mu.carrier:
            raise CarrierMismatch("the family must be indexed by the ultrafilter's carrier")

    @classmethod
    def principal(cls, point):
        """(point)_⋆."""
        return cls(Principal(IndexSet.fin(1), 0), UPFamily.from_list([point]))

    def pushforward_point(self):
        """The limit point of the family (the pushforward is principal on a finite space)."""
        for value, level in self.values.items():
            if self.mu.large(level):
                return value
        raise CarrierMismatch("no point is taken on a large set")


def ucvg(space, a, family):
    """a ≼ (x_s)_{s:mu}: every open containing a pulls back to a large set."""
    if any(v not in range(space.n) for v in family.values.values):
        raise CarrierMismatch("family values must be points of the space")
    return all(
        family.mu.large(family.values.where(lambda v, u=u: v in u))
        for u in space.opens if a in u
    )


def convergence_relation(space):
    """{(a, b) : a ≼ δ_b}."""
    return space.specialization()


def ucvg_to_topology(n, relation):
    """The topology whose opens are the sets A with a ∈ A, a ≼ δ_b  =>  b ∈ A."""
    related = relation if callable(relation) else (lambda a, b: (a, b) in relation)
    return FiniteSpace.from_preorder(n, related)


def derived_sets(space, subset):
    subset = frozenset(subset)
    interior = frozenset(a for a in space.points if all(b in subset for b in space.points if space.specializes(a, b)))
    closure = frozenset(a for a in space.points if any(b in subset for b in space.points if space.specializes(a, b)))
    return DerivedSets(interior, closure)


def interior_by_lattice(space, subset):
    """The largest open inside subset."""
    subset = frozenset(subset)
    result = frozenset()
    for u in space.opens:
        if u <= subset:
            result |= u
    return result


def limit_points(space, family):
    """The intersection of the closures of the images of large sets."""
    result = space.full
    values = list(family.values.values)
    for k in range(1, len(values) + 1):
        for chosen in combinations(values, k):
            if family.mu.large(family.values.where(lambda v: v in chosen)):
                result &= derived_sets(space, chosen).closure
    return result


@dataclass(frozen=True)
class RelBetaReport:
    valid: bool
    witness: tuple = ()
    axiom: int = 0


def rel_beta_validate(n, relation):
    """Axiom 1: a ≼ δ_a. Axiom 2, on finite carriers: the relation is transitive."""
    related = relation if callable(relation) else (lambda a, b: (a, b) in relation)
    for a in range(n):
        if not related(a, a):
            return RelBetaReport(False, (a,), 1)
    for a, b, c in product(range(n), repeat=3):
        if related(a, b) and related(b, c) and not related(a, c):
            return RelBetaReport(False, (a, b, c), 2)
    return RelBetaReport(True)


# Maps


@dataclass(frozen=True)
class SpaceMap:
    source: FiniteSpace
    target: FiniteSpace
    images: tuple

    def __post_init__(self):
        if len(self.images) != self.source.n or any(not 0 <= v < self.target.n for v in self.images):
            raise CarrierMismatch("a space map needs one image in the target per source point")

    def __call__(self, point):
        return self.images[point]

    def preimage(self, subset):
        return frozenset(a for a in self.source.points if self.images[a] in subset)

    def image(self, subset):
        return frozenset(self.images[a] for a in subset)

    def fiber(self, point):
        return [a for a in self.source.points if self.images[a] == point]

    def as_upmap(self):
        return TableMap(IndexSet.fin(self.source.n), IndexSet.fin(self.target.n), tuple(self.images))

    def compose(self, other):
        """self ∘ other."""
        return SpaceMap(other.source, self.target, tuple(self.images[v] for v in other.images))

    def to_document(self):
        return {"source": self.source.to_document(), "target": self.target.to_document(), "map": list(self.images)}


def identity_space_map(space):
    return SpaceMap(space, space, tuple(space.points))


def all_maps(source, target):
    for images in product(range(target.n), repeat=source.n):
        yield SpaceMap(source, target, images)


def continuous_by_opens(f):
    return all(f.source.is_open(f.preimage(u)) for u in f.target.opens)


def continuous_by_convergence(f):
    """a ≼ δ_b implies f(a) ≼ δ_{f(b)}."""
    return all(
        f.target.specializes(f(a), f(b))
        for a in f.source.points for b in f.source.points if f.source.specializes(a, b)
    )


def map_continuous(f):
    by_opens, by_convergence = continuous_by_opens(f), continuous_by_convergence(f)
    if by_opens != by_convergence:
        raise TheoremMismatch("continuity checks disagree", f.to_document())
    return by_opens


def open_by_images(f):
    return all(f.target.is_open(f.image(u)) for u in f.source.opens)


def open_by_lifting(f):
    """Every δ_c converging to f(a) lifts to some δ_b converging to a with f(b) = c."""
    return all(
        any(f.source.specializes(a, b) and f(b) == c for b in f.source.points)
        for a in f.source.points for c in f.target.points if f.target.specializes(f(a), c)
    )


def map_open(f):
    by_images, by_lifting = open_by_images(f), open_by_lifting(f)
    if by_images != by_lifting:
        raise TheoremMismatch("openness checks disagree", f.to_document())
    return by_images


@dataclass(frozen=True)
class ProperReport:
    closed_by_images: bool
    by_lifting: bool

    @property
    def agrees(self):
        return self.closed_by_images == self.by_lifting


def proper_check(f):
    """Closed-image test against the dual (downward) lifting test."""
    closed = all(
        f.target.is_closed(f.image(f.source.full - u)) for u in f.source.opens
    )
    lifting = all(
        any(f.source.specializes(b, a) and f(b) == c for b in f.source.points)
        for a in f.source.points for c in f.target.points if f.target.specializes(c, f(a))
    )
    return ProperReport(closed, lifting)


# Étale maps


@dataclass(frozen=True)
class EtaleVerdict:
    is_etale: bool
    certificate: tuple = ()
    counterexample: dict = None

    def to_document(self):
        if self.is_etale:
            return {"etale": True, "certificate": [
                {"point": e, "neighbourhood": sorted(v), "section": sorted(section.items())}
                for e, v, section in self.certificate
            ]}
        return {"etale": False, "counterexample": self.counterexample}


def lifting_counterexample(p):
    """
    The unique-lift conditions over principal ultrafilters: for every e and
    every δ_b converging to p(e) there is exactly one lift δ_e' with e ≼ δ_e'
    and p(e') = b. Lifts of principal ultrafilters are principal, so they are
    principal over the base.
    """
    for e in p.source.points:
        for b in p.target.points:
            if not p.target.specializes(p(e), b):
                continue
            lifts = [e2 for e2 in p.source.points if p.source.specializes(e, e2) and p(e2) == b]
            if len(lifts) != 1:
                return {
                    "point": e,
                    "ultrafilter": Principal(IndexSet.fin(p.target.n), b).to_text(),
                    "lifts": [Principal(IndexSet.fin(p.source.n), e2).to_text() for e2 in lifts],
                }
    return None


def _homeomorphic_onto_open(p, v):
    """Whether p maps the open v homeomorphically onto an open set."""
    image = p.image(v)
    if not p.source.is_open(v) or len(image) != len(v) or not p.target.is_open(image):
        return False
    sub_opens = {u & v for u in p.source.opens}
    image_opens = {w & image for w in p.target.opens}
    return {p.image(u) for u in sub_opens} == image_opens


def local_homeomorphism(p, e):
    """An open V ∋ e mapped homeomorphically onto an open set, as (V, section), or None."""
    for v in sorted(p.source.opens, key=len):
        if e in v and _homeomorphic_onto_open(p, v):
            return v, {p(x): x for x in v}
    return None


def etale_check(p):
    if not map_continuous(p):
        raise NotContinuous("étale maps must be continuous")
    counterexample = lifting_counterexample(p)
    certificate = []
    direct = True
    for e in p.source.points:
        found = local_homeomorphism(p, e)
        if found is None:
            direct = False
            break
        certificate.append((e, found[0], found[1]))
    if direct != (counterexample is None):
        raise TheoremMismatch("lifting and local-homeomorphism verdicts disagree", p.to_document())
    if counterexample is not None:
        return EtaleVerdict(False, counterexample=counterexample)
    return EtaleVerdict(True, tuple(certificate))


def replay_etale(p, verdict):
    """Re-check a verdict's certificate or counterexample against p."""
    if verdict.is_etale:
        for e, v, section in verdict.certificate:
            if e not in v or not _homeomorphic_onto_open(p, v):
                return False
            if set(section.values()) != set(v) or any(p(x) != b for b, x in section.items()):
                return False
        return True
    return lifting_counterexample(p) == verdict.counterexample


def open_inclusion(space, points):
    """The inclusion of an open subspace."""
    if not space.is_open(points):
        raise CarrierMismatch(f"{sorted(points)} is not open")
    return space.subspace(points)[1]


# Principal over a base


@dataclass(frozen=True)
class PrincipalOverResult:
    holds: bool
    witness: UPSet = None


def principal_over(nu, p, search_bound=64):
    """
    Whether p is injective on some nu-large set. ``p`` is a UPMap or a
    SpaceMap out of nu's carrier.
    """
    if isinstance(p, SpaceMap):
        p = p.as_upmap()
    if p.domain != nu.carrier:
        raise CarrierMismatch("the map must leave nu's carrier")
    nf = nu.normal_form()
    if nf.is_principal:
        return PrincipalOverResult(True, UPSet.finite([nf.point]))
    if isinstance(p, StepMap):
        # Injective sets have at most one point per value and are finite.
        return PrincipalOverResult(False)
    if isinstance(p, ResidueMap):
        if p.is_injective():
            return PrincipalOverResult(True, UPSet.full())
        r = nf.shift % p.modulus
        if p.pieces[r][0] > 0:
            return PrincipalOverResult(True, UPSet.residue(p.modulus, r))
        return PrincipalOverResult(False)
    for n in range(search_bound):
        if nu.large(UPSet.finite([n])):
            return PrincipalOverResult(True, UPSet.finite([n]))
    raise SearchInconclusive(f"no injective large set found below {search_bound}")


def fiber_ultraproduct(p, mu):
    """∫_{x:mu} E_x with each fiber labelled by rank (space maps) or by residue piece (residue maps)."""
    if isinstance(p, SpaceMap):
        if mu.carrier != IndexSet.fin(p.target.n):
            raise CarrierMismatch("mu must live on the target's points")
        fibers = [p.fiber(x) for x in p.target.points]
        bound = max((len(f) for f in fibers), default=0)
        fam = BoundedFamily.from_fibers(mu.carrier, bound, lambda x: range(len(fibers[x])))
        return uprod_enumerate(mu, fam)
    if isinstance(p, TableMap):
        return fiber_ultraproduct(SpaceMap(FiniteSpace.discrete(p.domain.size),
                                           FiniteSpace.discrete(p.codomain.size), p.values), mu)
    if isinstance(p, ResidueMap):
        if any(a == 0 for a, _ in p.pieces):
            raise UnboundedFibers("a constant piece has an infinite fiber")
        fiber_sets = tuple(
            UPSet.from_predicate(lambda y, a=a, b=b: y >= b and (y - b) % a == 0, b + 1, a)
            for a, b in p.pieces
        )
        return uprod_enumerate(mu, BoundedFamily(IndexSet.nat(), p.modulus, fiber_sets))
    raise UnboundedFibers(f"fibers of a {type(p).__name__} are not bounded")
