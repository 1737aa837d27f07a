from __future__ import annotations

from dataclasses import dataclass, field
from itertools import permutations, product

from .exceptions import CarrierMismatch, FunctorialityViolation, TheoremMismatch
from .space import FiniteSpace, SpaceMap, etale_check, map_continuous, open_inclusion
from .ultraproduct import BoundedFamily, uprod_enumerate
from .vult import Alex, PtSpace, VUltFunctor, VUltInstance, functor_validate


class UltraSheaf:
    """
    A functor from the points of ``base`` to finite sets. Fibers are
    Fin(sizes[i]) over ``base.objects[i]``; ``actions[k]`` is the function
    along the k-th ⋆-arrow of the base. For PtSpace and Alex bases the
    action on every ultraarrow is forced by its ⋆-part.
    """
    __slots__ = ("base", "sizes", "actions", "arrows", "_position")

    def __init__(self, base, sizes, actions):
        self.base = base
        self.arrows = tuple(base.star_arrows())
        self._position = {a: i for i, a in enumerate(base.objects)}
        self.sizes = tuple(sizes)
        if isinstance(actions, dict):
            actions = [actions[arrow] for arrow in self.arrows]
        self.actions = tuple(tuple(action) for action in actions)
        if len(self.sizes) != len(base.objects) or len(self.actions) != len(self.arrows):
            raise CarrierMismatch("one fiber per object and one action per ⋆-arrow")

    @classmethod
    def from_document(cls, base, data):
        fibers = data['fibers']
        sizes = [len(f) for f in fibers]
        table = {(a, b): images for a, b, images in data.get('actions', [])}
        actions = []
        for a, b, _ in base.star_arrows():
            if a == b:
                actions.append(table.get((a, b), list(range(sizes[a]))))
            else:
                actions.append(table[(a, b)])
        return cls(base, sizes, actions)

    def size(self, a):
        return self.sizes[self._position[a]]

    def fiber(self, a):
        return range(self.size(a))

    def action(self, a, b, payload):
        return self.actions[self.arrows.index((a, b, payload))]

    def fiber_family(self, family):
        """(A_{b_s})_s as a bounded family."""
        bound = max(self.sizes, default=0)
        return BoundedFamily.from_fibers(family.index, bound, lambda s: self.fiber(family(s)), *family.shape())

    def act(self, f):
        """A(f) : A_a -> ∫_{s:mu} A_{b_s} as the list of image classes."""
        images = self.action(f.domain, f.limit_object, f.payload)
        if images:
            classes = uprod_enumerate(f.mu, self.fiber_family(f.codomain)).values()
            if any(x not in classes for x in images):
                raise TheoremMismatch("an action leaves the ultraproduct of the fibers", f.to_document())
        return images

    def violation(self):
        """The first failing identity or composite, or None."""
        X = self.base
        for k, (a, b, payload) in enumerate(self.arrows):
            images = self.actions[k]
            if len(images) != self.size(a) or any(not 0 <= x < self.size(b) for x in images):
                return {"arrow": k, "law": "typing"}
            if a == b and payload == X.star_identity(a) and images != tuple(range(self.size(a))):
                return {"arrow": k, "law": "identity"}
        for g, (b, c, pg) in enumerate(self.arrows):
            for f, (a, b2, pf) in enumerate(self.arrows):
                if b != b2:
                    continue
                h = self.arrows.index((a, c, X.star_compose(a, b, c, pg, pf)))
                if self.actions[h] != tuple(self.actions[g][x] for x in self.actions[f]):
                    return {"arrows": [g, f], "law": "composition"}
        return None

    def validate(self):
        witness = self.violation()
        if witness is not None:
            raise FunctorialityViolation(f"not a functor on the points of {self.base.name}", witness)
        return self

    def key(self):
        return self.sizes, self.actions

    def canonical_key(self):
        """The least key over relabellings of every fiber."""
        best = None
        for perms in product(*(permutations(range(n)) for n in self.sizes)):
            key = self.relabel(perms).key()
            if best is None or key < best:
                best = key
        return best

    def relabel(self, perms):
        """Move x in the fiber over the i-th object to perms[i][x]."""
        actions = []
        for k, (a, b, _) in enumerate(self.arrows):
            pa, pb = perms[self._position[a]], perms[self._position[b]]
            inverse = {new: old for old, new in enumerate(pa)}
            actions.append(tuple(pb[self.actions[k][inverse[i]]] for i in range(len(pa))))
        return UltraSheaf(self.base, self.sizes, actions)

    def to_document(self):
        return {
            "fibers": [list(range(n)) for n in self.sizes],
            "actions": [
                [a, b, list(images)] for (a, b, _), images in zip(self.arrows, self.actions) if a != b
            ],
        }

    def __eq__(self, other):
        return isinstance(other, UltraSheaf) and self.arrows == other.arrows and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"<UltraSheaf over {self.base.name} fibers={list(self.sizes)}>"


@dataclass(frozen=True)
class SheafMorphism:
    source: UltraSheaf
    target: UltraSheaf
    components: tuple

    def __call__(self, a, x):
        return self.components[self.source.base.objects.index(a)][x]

    def is_natural(self):
        A, B = self.source, self.target
        for k, (a, b, _) in enumerate(A.arrows):
            ca, cb = self.components[A._position[a]], self.components[A._position[b]]
            if any(cb[A.actions[k][x]] != B.actions[k][ca[x]] for x in range(A.size(a))):
                return False
        return True

    def is_mono(self):
        return all(len(set(c)) == len(c) for c in self.components)

    def is_epi(self):
        return all(set(c) == set(range(n)) for c, n in zip(self.components, self.target.sizes))

    def compose(self, other):
        """self ∘ other."""
        return SheafMorphism(other.source, self.target, tuple(
            tuple(mine[x] for x in theirs) for mine, theirs in zip(self.components, other.components)
        ))


def sheaf_morphisms(A, B):
    choices = [list(product(range(m), repeat=n)) for n, m in zip(A.sizes, B.sizes)]
    for components in product(*choices):
        morphism = SheafMorphism(A, B, tuple(components))
        if morphism.is_natural():
            yield morphism


def identity_morphism(A):
    return SheafMorphism(A, A, tuple(tuple(range(n)) for n in A.sizes))


# Étale spaces


@dataclass(frozen=True)
class EtaleSheaf:
    projection: SpaceMap
    verdict: object = field(default=None, compare=False)

    @classmethod
    def build(cls, projection):
        verdict = etale_check(projection)
        if not verdict.is_etale:
            raise CarrierMismatch(f"not étale: {verdict.counterexample}")
        return cls(projection, verdict)

    @property
    def total(self):
        return self.projection.source

    @property
    def base(self):
        return self.projection.target

    def fiber(self, a):
        return self.projection.fiber(a)

    def lift(self, e, b):
        """The unique e' with e ≼ e' over b."""
        lifts = [x for x in self.fiber(b) if self.total.specializes(e, x)]
        if len(lifts) != 1:
            raise TheoremMismatch("étale lifts must be unique", self.projection.to_document())
        return lifts[0]


def ev_space(E, base=None):
    """The ultrasheaf of stalks of an étale space; a ≼ b carries e to its unique lift."""
    base = base or PtSpace(E.base)
    actions = []
    for a, b, _ in base.star_arrows():
        fa, fb = E.fiber(a), E.fiber(b)
        actions.append(tuple(fb.index(E.lift(e, b)) for e in fa))
    return UltraSheaf(base, [len(E.fiber(a)) for a in base.objects], actions)


def total_preorder(A):
    """(a, i) <= (b, j) iff a ≼ b and A(a ≼ b)(i) = j, on the points offset[a] + i."""
    offsets = [sum(A.sizes[:k]) for k in range(len(A.sizes))]
    related = set()
    for k, (a, b, _) in enumerate(A.arrows):
        for i, j in enumerate(A.actions[k]):
            related.add((offsets[a] + i, offsets[b] + j))
    owner = [a for a in range(len(A.sizes)) for _ in range(A.sizes[a])]
    return sum(A.sizes), related, owner


def ultrasheaf_to_etale(A):
    """
    The total space ⨆_a A_a whose opens are the sets the action restricts
    to; it is étale over the base.
    """
    if not isinstance(A.base, PtSpace):
        raise CarrierMismatch("étale spaces live over point-space bases")
    A.validate()
    n, related, owner = total_preorder(A)
    total = FiniteSpace.from_preorder(n, lambda x, y: x == y or (x, y) in related)
    return EtaleSheaf.build(SpaceMap(total, A.base.space, tuple(owner)))


def etale_isomorphic(E, F):
    """Whether a homeomorphism E -> F over the base exists."""
    if E.base != F.base or E.total.n != F.total.n:
        return False
    fibers = [(E.fiber(a), F.fiber(a)) for a in E.base.points]
    if any(len(x) != len(y) for x, y in fibers):
        return False
    for perms in product(*(permutations(y) for _, y in fibers)):
        images = [0] * E.total.n
        for (x, _), perm in zip(fibers, perms):
            for e, f in zip(x, perm):
                images[e] = f
        if {frozenset(images[e] for e in u) for u in E.total.opens} == F.total.opens:
            return True
    return False


def etale_morphisms(E, F):
    """Continuous maps E -> F over the base."""
    choices = [F.fiber(E.projection(e)) for e in E.total.points]
    for images in product(*choices):
        h = SpaceMap(E.total, F.total, tuple(images))
        if map_continuous(h):
            yield h


def etale_from_lifts(base, sizes, lifts):
    """
    The space generated by arbitrary lift data: the preorder closure of
    (a, i) <= (b, lifts[a, b][i]). Returns None when the result is not étale.
    """
    offsets = [sum(sizes[:k]) for k in range(len(sizes))]
    n = sum(sizes)
    leq = {(x, x) for x in range(n)}
    for (a, b), images in lifts.items():
        for i, j in enumerate(images):
            leq.add((offsets[a] + i, offsets[b] + j))
    changed = True
    while changed:
        changed = False
        for (x, y), (y2, z) in product(list(leq), repeat=2):
            if y == y2 and (x, z) not in leq:
                leq.add((x, z))
                changed = True
    owner = tuple(a for a in range(len(sizes)) for _ in range(sizes[a]))
    projection = SpaceMap(FiniteSpace.from_preorder(n, lambda x, y: (x, y) in leq), base, owner)
    if not map_continuous(projection):
        return None
    verdict = etale_check(projection)
    return EtaleSheaf(projection, verdict) if verdict.is_etale else None


def enumerate_etale(space, bound):
    """Every étale space over ``space`` with fibers of size <= bound reachable from lift data."""
    pairs = [(a, b) for a in space.points for b in space.points if a != b and space.specializes(a, b)]
    for sizes in product(range(bound + 1), repeat=space.n):
        choices = [list(product(range(sizes[b]), repeat=sizes[a])) for a, b in pairs]
        for picked in product(*choices):
            E = etale_from_lifts(space, sizes, dict(zip(pairs, picked)))
            if E is not None:
                yield E


# Presheaves over Alex(C)


@dataclass(frozen=True)
class Presheaf:
    """A functor C -> FinSet: sizes per object, a function per arrow."""
    category: object
    sizes: tuple
    actions: tuple

    @classmethod
    def representable(cls, category, c):
        """C(c, -)."""
        sizes = tuple(len(category.hom(c, a)) for a in range(category.objects))
        actions = []
        for f, (a, b) in enumerate(category.arrows):
            source, target = category.hom(c, a), category.hom(c, b)
            actions.append(tuple(target.index(category.compose(f, x)) for x in source))
        return cls(category, sizes, tuple(actions))

    def violation(self):
        C = self.category
        for f, (a, b) in enumerate(C.arrows):
            if len(self.actions[f]) != self.sizes[a] or any(not 0 <= x < self.sizes[b] for x in self.actions[f]):
                return {"arrow": f, "law": "typing"}
            if f < C.objects and self.actions[f] != tuple(range(self.sizes[a])):
                return {"arrow": f, "law": "identity"}
        for g, f in product(range(len(C.arrows)), repeat=2):
            if C.target(f) != C.source(g):
                continue
            if self.actions[C.compose(g, f)] != tuple(self.actions[g][x] for x in self.actions[f]):
                return {"arrows": [g, f], "law": "composition"}
        return None

    def validate(self):
        witness = self.violation()
        if witness is not None:
            raise FunctorialityViolation("not a functor", witness)
        return self


def presheaf_to_ultrasheaf(P, base=None):
    """
    The ultrasheaf over Alex(C) extending P: an arrow (f_s)_{s:mu} acts
    through the diagonal, so it acts as P at its limit.
    """
    base = base or Alex(P.category)
    return UltraSheaf(base, P.sizes, [P.actions[f] for _, _, f in base.star_arrows()]).validate()


def ultrasheaf_to_presheaf(A):
    if not isinstance(A.base, Alex):
        raise CarrierMismatch("presheaves come from ultrasheaves over Alexandroff instances")
    C = A.base.category
    return Presheaf(C, A.sizes, tuple(A.action(a, b, f) for f, (a, b) in enumerate(C.arrows)))


def all_presheaves(category, bound):
    for A in enumerate_sheaves(Alex(category), bound):
        yield ultrasheaf_to_presheaf(A)


# Enumeration


def enumerate_sheaves(base, bound):
    """Every ultrasheaf over ``base`` with fibers <= bound, by backtracking over ⋆-arrow actions."""
    arrows = list(base.star_arrows())
    position = {a: i for i, a in enumerate(base.objects)}
    index = {arrow: k for k, arrow in enumerate(arrows)}
    composites = []
    for g, (b, c, pg) in enumerate(arrows):
        for f, (a, b2, pf) in enumerate(arrows):
            if b == b2:
                composites.append((g, f, index[(a, c, base.star_compose(a, b, c, pg, pf))]))

    for sizes in product(range(bound + 1), repeat=len(base.objects)):
        actions = [None] * len(arrows)

        def consistent(k):
            for g, f, h in composites:
                if k not in (g, f, h):
                    continue
                if actions[g] is None or actions[f] is None or actions[h] is None:
                    continue
                if actions[h] != tuple(actions[g][x] for x in actions[f]):
                    return False
            return True

        def assign(k):
            if k == len(arrows):
                yield UltraSheaf(base, sizes, list(actions))
                return
            a, b, payload = arrows[k]
            na, nb = sizes[position[a]], sizes[position[b]]
            if a == b and payload == base.star_identity(a):
                options = [tuple(range(na))]
            else:
                options = list(product(range(nb), repeat=na))
            for option in options:
                actions[k] = option
                if consistent(k):
                    yield from assign(k + 1)
            actions[k] = None

        yield from assign(0)


def iso_class_representatives(sheaves):
    seen = {}
    for A in sheaves:
        seen.setdefault(A.canonical_key(), A)
    return seen


# Finite limits and colimits, fiberwise


def terminal_sheaf(base):
    return UltraSheaf(base, [1] * len(base.objects), [(0,) for _ in base.star_arrows()])


def initial_sheaf(base):
    return UltraSheaf(base, [0] * len(base.objects), [() for _ in base.star_arrows()])


def _same_base(*sheaves):
    if any(A.arrows != sheaves[0].arrows for A in sheaves):
        raise CarrierMismatch("sheaves over different bases")


def product_sheaf(A, B):
    """A × B with (i, j) at i·|B_a| + j, and both projections."""
    _same_base(A, B)
    actions = []
    for k, (a, b, _) in enumerate(A.arrows):
        mb = B.size(b)
        actions.append(tuple(
            A.actions[k][i] * mb + B.actions[k][j] for i in range(A.size(a)) for j in range(B.size(a))
        ))
    P = UltraSheaf(A.base, [m * n for m, n in zip(A.sizes, B.sizes)], actions)
    first = SheafMorphism(P, A, tuple(tuple(x // n for x in range(m * n)) for m, n in zip(A.sizes, B.sizes)))
    second = SheafMorphism(P, B, tuple(tuple(x % n for x in range(m * n)) for m, n in zip(A.sizes, B.sizes)))
    return P, first, second


def coproduct_sheaf(A, B):
    """A + B with B_a placed after A_a, and both inclusions."""
    _same_base(A, B)
    actions = []
    for k, (a, b, _) in enumerate(A.arrows):
        actions.append(A.actions[k] + tuple(A.size(b) + y for y in B.actions[k]))
    S = UltraSheaf(A.base, [m + n for m, n in zip(A.sizes, B.sizes)], actions)
    left = SheafMorphism(A, S, tuple(tuple(range(m)) for m in A.sizes))
    right = SheafMorphism(B, S, tuple(tuple(m + y for y in range(n)) for m, n in zip(A.sizes, B.sizes)))
    return S, left, right


def _subsheaf(A, members):
    """The subsheaf on ``members[i]`` (sorted element lists) with its inclusion."""
    actions = []
    for k, (a, b, _) in enumerate(A.arrows):
        mb = members[A._position[b]]
        actions.append(tuple(mb.index(A.actions[k][x]) for x in members[A._position[a]]))
    S = UltraSheaf(A.base, [len(m) for m in members], actions)
    return S, SheafMorphism(S, A, tuple(tuple(m) for m in members))


def equalizer_sheaf(f, g):
    if f.source is not g.source or f.target is not g.target:
        raise CarrierMismatch("an equalizer needs parallel morphisms")
    members = [
        [x for x in range(n) if cf[x] == cg[x]]
        for n, cf, cg in zip(f.source.sizes, f.components, g.components)
    ]
    return _subsheaf(f.source, members)


def pullback_sheaf(f, g):
    """A ×_C B for f : A -> C and g : B -> C, inside A × B."""
    P, first, second = product_sheaf(f.source, g.source)
    members = [
        [x for x in range(P.sizes[i]) if f.components[i][first.components[i][x]] == g.components[i][second.components[i][x]]]
        for i in range(len(P.sizes))
    ]
    S, inclusion = _subsheaf(P, members)
    return S, first.compose(inclusion), second.compose(inclusion)


def _classes(n, pairs):
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for x, y in pairs:
        rx, ry = find(x), find(y)
        if rx != ry:
            parent[max(rx, ry)] = min(rx, ry)
    roots = sorted({find(x) for x in range(n)})
    return tuple(roots.index(find(x)) for x in range(n)), len(roots)


def quotient_sheaf(A, relation):
    """A / R for per-object pair lists; R must be compatible with the action."""
    labels = [_classes(n, pairs) for n, pairs in zip(A.sizes, relation)]
    actions = []
    for k, (a, b, _) in enumerate(A.arrows):
        la, na = labels[A._position[a]]
        lb, _ = labels[A._position[b]]
        table = {}
        for x in range(A.size(a)):
            image = lb[A.actions[k][x]]
            if table.setdefault(la[x], image) != image:
                raise FunctorialityViolation("relation is not closed under the action", {"arrow": k})
        actions.append(tuple(table[c] for c in range(na)))
    Q = UltraSheaf(A.base, [n for _, n in labels], actions)
    return Q, SheafMorphism(A, Q, tuple(l for l, _ in labels))


def coequalizer_sheaf(f, g):
    if f.source is not g.source or f.target is not g.target:
        raise CarrierMismatch("a coequalizer needs parallel morphisms")
    relation = [list(zip(cf, cg)) for cf, cg in zip(f.components, g.components)]
    return quotient_sheaf(f.target, relation)


def _partitions(n):
    """Set partitions of range(n) as label tuples in restricted-growth form."""
    def grow(prefix, top):
        if len(prefix) == n:
            yield tuple(prefix)
            return
        for label in range(top + 2):
            yield from grow(prefix + [label], max(top, label))
    if n == 0:
        yield ()
        return
    yield from grow([0], 0)


def congruences(A):
    """Equivalence relations on A closed under the action, as per-object label tuples."""
    for labels in product(*(_partitions(n) for n in A.sizes)):
        if all(
            labels[A._position[b]][A.actions[k][x]] == labels[A._position[b]][A.actions[k][y]]
            for k, (a, b, _) in enumerate(A.arrows)
            for x in range(A.size(a)) for y in range(A.size(a))
            if labels[A._position[a]][x] == labels[A._position[a]][y]
        ):
            yield labels


# Law suites


def _strict_initial(A, zero):
    if any(A.sizes) and any(True for _ in sheaf_morphisms(A, zero)):
        return [{"law": "strict initial", "sheaf": A.to_document()}]
    return []


def _coproduct_laws(A, B, sources):
    violations = []
    S, left, right = coproduct_sheaf(A, B)
    if not (left.is_mono() and right.is_mono()):
        violations.append({"law": "coproduct inclusions are monic", "sheaves": [A.to_document(), B.to_document()]})
    meet, _, _ = pullback_sheaf(left, right)
    if any(meet.sizes):
        violations.append({"law": "disjoint coproducts", "sheaves": [A.to_document(), B.to_document()]})
    for C in sources:
        for h in sheaf_morphisms(C, S):
            first, _, _ = pullback_sheaf(h, left)
            second, _, _ = pullback_sheaf(h, right)
            glued, _, _ = coproduct_sheaf(first, second)
            if glued.canonical_key() != C.canonical_key():
                violations.append({"law": "pullback-stable coproducts", "sheaf": C.to_document()})
    return violations


def _quotient_laws(A, sources):
    violations = []
    for labels in congruences(A):
        relation = [
            [(x, y) for x in range(n) for y in range(n) if l[x] == l[y]]
            for n, l in zip(A.sizes, labels)
        ]
        Q, q = quotient_sheaf(A, relation)
        kernel, first, second = pullback_sheaf(q, q)
        pairs = [
            sorted(zip(first.components[i], second.components[i])) for i in range(len(A.sizes))
        ]
        if pairs != [sorted(r) for r in relation]:
            violations.append({"law": "effective quotients", "sheaf": A.to_document()})
        for B in sources:
            for h in sheaf_morphisms(B, Q):
                _, along, _ = pullback_sheaf(h, q)
                if not along.is_epi():
                    violations.append({"law": "pullback-stable quotients", "sheaf": B.to_document()})
    return violations


def pretopos_law_suite(base, bound, limit=None):
    """
    Strict initial object, disjoint and pullback-stable coproducts, and
    effective pullback-stable quotients, on every sheaf with fibers <= bound.
    Returns the list of violations.
    """
    sheaves = list(enumerate_sheaves(base, bound))
    if limit is not None:
        sheaves = sheaves[:limit]
    zero = initial_sheaf(base)
    violations = []
    for A in sheaves:
        violations += _strict_initial(A, zero)
    for A, B in product(sheaves, repeat=2):
        violations += _coproduct_laws(A, B, sheaves)
    for A in sheaves:
        violations += _quotient_laws(A, sheaves)
    return violations


def sampled_law_suite(base, bound, diagrams, rng):
    """
    The same laws on ``diagrams`` random diagrams (A, B, C): A and B have
    fibers <= bound, and C, the sheaf pulled back along, has at most
    ``bound`` elements in all. Returns the list of violations.
    """
    sheaves = list(enumerate_sheaves(base, bound))
    sources = [C for C in sheaves if sum(C.sizes) <= bound]
    zero = initial_sheaf(base)
    violations = []
    for _ in range(diagrams):
        A, B, C = rng.choice(sheaves), rng.choice(sheaves), rng.choice(sources)
        violations += _strict_initial(A, zero) + _coproduct_laws(A, B, [C]) + _quotient_laws(A, [C])
    return violations


def ev_preserves_limits(space, E, F):
    """ev_space(E × F) against the fiberwise product of ev_space(E) and ev_space(F)."""
    base = PtSpace(space)
    product_total = E.total.product(F.total)
    owner = []
    points = []
    for x in product_total.points:
        e, f = divmod(x, F.total.n)
        if E.projection(e) == F.projection(f):
            points.append(x)
            owner.append(E.projection(e))
    total, _ = product_total.subspace(points)
    fibered = EtaleSheaf.build(SpaceMap(total, space, tuple(owner)))
    expected, _, _ = product_sheaf(ev_space(E, base), ev_space(F, base))
    return ev_space(fibered, base).canonical_key() == expected.canonical_key()


@dataclass(frozen=True)
class EquivalenceReport:
    etale_objects: int
    sheaf_objects: int
    hom_mismatches: tuple
    missing: tuple

    @property
    def ok(self):
        return self.etale_objects == self.sheaf_objects and not self.hom_mismatches and not self.missing

    def to_document(self):
        return {
            "etale_objects": self.etale_objects,
            "sheaf_objects": self.sheaf_objects,
            "hom_mismatches": [list(m) for m in self.hom_mismatches],
            "missing": list(self.missing),
        }


def ev_equivalence_check(space, bound):
    """
    ev : sh(T) -> ultrasheaves on pt(T) at fibers <= bound: both sides are
    enumerated independently, matched by canonical key and compared on hom
    counts.
    """
    base = PtSpace(space)
    sheaves = iso_class_representatives(enumerate_sheaves(base, bound))
    etale = {}
    for E in enumerate_etale(space, bound):
        etale.setdefault(ev_space(E, base).canonical_key(), E)
    missing = tuple(sorted(str(key) for key in set(sheaves) ^ set(etale)))
    mismatches = []
    for k1, k2 in product(sorted(set(sheaves) & set(etale)), repeat=2):
        sheaf_count = sum(1 for _ in sheaf_morphisms(sheaves[k1], sheaves[k2]))
        etale_count = sum(1 for _ in etale_morphisms(etale[k1], etale[k2]))
        if sheaf_count != etale_count:
            mismatches.append((str(k1), str(k2), sheaf_count, etale_count))
    return EquivalenceReport(len(etale), len(sheaves), tuple(mismatches), missing)


# The unit at pt(T)


class EvaluationPoints(VUltInstance):
    """
    Stalk functors ev_a of sh(T). ⋆-arrows ev_a => ev_b are natural
    transformations computed on the open-representable sheaves, listed as
    one component per open.
    """
    __slots__ = ("space", "opens", "_representables", "_maps")

    def __init__(self, space):
        super().__init__(space.points, f"ev({space.n})")
        self.space = space
        self.opens = sorted(space.opens, key=lambda u: (len(u), sorted(u)))
        base = PtSpace(space)
        self._representables = [ev_space(EtaleSheaf.build(open_inclusion(space, u)), base) for u in self.opens]
        self._maps = [
            (i, j, m)
            for i, U in enumerate(self._representables) for j, V in enumerate(self._representables)
            for m in sheaf_morphisms(U, V)
        ]

    def star_hom(self, a, b):
        choices = [
            list(product(range(R.size(b)), repeat=R.size(a))) for R in self._representables
        ]
        return [tuple(components) for components in product(*choices) if self._natural(components, a, b)]

    def _natural(self, components, a, b):
        """α_V ∘ m_a = m_b ∘ α_U for every map m : y(U) -> y(V)."""
        for i, j, m in self._maps:
            before = [m(b, y) for y in components[i]]
            after = [components[j][m(a, x)] for x in range(self._representables[i].size(a))]
            if before != after:
                return False
        return True

    def star_identity(self, a):
        return tuple(tuple(range(R.size(a))) for R in self._representables)

    def star_compose(self, a, b, c, g, f):
        return tuple(tuple(gu[x] for x in fu) for gu, fu in zip(g, f))


def eta_unit(space):
    """η : PtSpace(T) -> EvaluationPoints(T), a |-> ev_a."""
    source, target = PtSpace(space), EvaluationPoints(space)

    def on_star(a, b, payload):
        arrows = target.star_hom(a, b)
        if len(arrows) != 1:
            raise TheoremMismatch("evaluation points over a specialization must have one arrow", {"from": a, "to": b})
        return arrows[0]

    return VUltFunctor(source, target, lambda a: a, on_star)


def eta_validate(space, probe_period=2):
    return functor_validate(eta_unit(space), probe_period)
