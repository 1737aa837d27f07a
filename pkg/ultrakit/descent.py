from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations, product

from . import constants
from .category import FiniteCategory
from .exceptions import BoundExceeded, CategoryValidationError
from .sheaf import EtaleSheaf, enumerate_etale, ev_space, etale_morphisms
from .space import FiniteSpace, SpaceMap, map_continuous
from .vult import (
    FinSetVUlt, PointVUlt, PtSpace, Pullback, VUltFunctor, all_vfunctors, pullback_projections,
    probe_families, space_functor, star_naturals
)


@dataclass(frozen=True)
class CodescentDiagram:
    """
    X2 ⇉ X1 ⇉ X0 with s, t : X1 -> X0, u : X0 -> X1 and the faces
    first, second, multiply : X2 -> X1 (first is applied before second).
    """
    x0: object
    x1: object
    x2: object
    source: VUltFunctor
    target: VUltFunctor
    unit: VUltFunctor
    first: VUltFunctor
    second: VUltFunctor
    multiply: VUltFunctor

    def simplicial_violation(self):
        """The first object or ⋆-arrow where an identity fails, or None."""
        laws = [
            ("s∘u = id", self.source.compose(self.unit), None, self.x0),
            ("t∘u = id", self.target.compose(self.unit), None, self.x0),
            ("s∘first = s∘multiply", self.source.compose(self.first), self.source.compose(self.multiply), self.x2),
            ("t∘second = t∘multiply", self.target.compose(self.second), self.target.compose(self.multiply), self.x2),
            ("t∘first = s∘second", self.target.compose(self.first), self.source.compose(self.second), self.x2),
        ]
        for name, left, right, domain in laws:
            for a in domain.objects:
                expected = a if right is None else right.on_object(a)
                if left.on_object(a) != expected:
                    return {"law": name, "object": str(a)}
            for a, b, p in domain.star_arrows():
                expected = p if right is None else right.on_star(a, b, p)
                if left.on_star(a, b, p) != expected:
                    return {"law": name, "arrow": [str(a), str(b), str(p)]}
        return None


def kernel_groupoid(F):
    """
    The iterated strict kernel of F : X0 -> Z. X1 holds triplets (θ, x, y)
    with θ : F(x) ≅ F(y); X2 holds composable pairs ((θ1, x, y), θ2, z).
    """
    if isinstance(F, SpaceMap):
        F = space_functor(F)
    x0, z = F.source, F.target
    x1 = Pullback(F, F)
    source, target = pullback_projections(x1)
    unit = VUltFunctor(
        x0, x1,
        lambda x: (z.star_identity(F.on_object(x)), x, x),
        lambda a, b, p: (p, p),
    )
    x2 = Pullback(F.compose(target), F)
    first = VUltFunctor(x2, x1, lambda w: w[1], lambda a, b, p: p[0])
    second = VUltFunctor(
        x2, x1,
        lambda w: (w[0], w[1][2], w[2]),
        lambda a, b, p: (p[0][1], p[1]),
    )

    def composite(w):
        theta2, (theta1, x, y), v = w
        return z.star_compose(F.on_object(x), F.on_object(y), F.on_object(v), theta2, theta1), x, v

    multiply = VUltFunctor(x2, x1, composite, lambda a, b, p: (p[0][0], p[1]))
    return CodescentDiagram(x0, x1, x2, source, target, unit, first, second, multiply)


@dataclass(frozen=True)
class DescentCocone:
    """F : X0 -> Z with θ_o : F(s o) ≅ F(t o) for every object o of X1."""
    diagram: CodescentDiagram
    functor: VUltFunctor
    theta: tuple

    def component(self, o):
        return self.theta[self.diagram.x1.objects.index(o)]

    def key(self):
        X0 = self.diagram.x0
        return (
            self.functor.object_table(),
            tuple(self.functor.on_star(a, b, p) for a, b, p in X0.star_arrows()),
            self.theta,
        )


def canonical_cocone(diagram, F):
    """F over its own kernel with θ_(θ, x, y) = θ."""
    return DescentCocone(diagram, F, tuple(o[0] for o in diagram.x1.objects))


@dataclass(frozen=True)
class CoconeReport:
    valid: bool
    condition: str = None
    witness: object = None

    def __bool__(self):
        return self.valid

    def to_document(self):
        return {"valid": self.valid, "condition": self.condition, "witness": None if self.witness is None else str(self.witness)}


def cocone_validate(cocone):
    D, F = cocone.diagram, cocone.functor
    Z = F.target
    s, t = D.source, D.target

    def obj(o, side):
        return F.on_object(side.on_object(o))

    for o in D.x1.objects:
        theta = cocone.component(o)
        if theta not in Z.star_hom(obj(o, s), obj(o, t)):
            return CoconeReport(False, "typing", o)
        if not Z.is_star_iso(obj(o, s), obj(o, t), theta):
            return CoconeReport(False, "invertibility", o)
    for o, o2, p in D.x1.star_arrows():
        left = Z.star_compose(
            obj(o, s), obj(o, t), obj(o2, t),
            F.on_star(t.on_object(o), t.on_object(o2), t.on_star(o, o2, p)), cocone.component(o),
        )
        right = Z.star_compose(
            obj(o, s), obj(o2, s), obj(o2, t),
            cocone.component(o2), F.on_star(s.on_object(o), s.on_object(o2), s.on_star(o, o2, p)),
        )
        if left != right:
            return CoconeReport(False, "naturality", (o, o2, p))
    for x in D.x0.objects:
        if cocone.component(D.unit.on_object(x)) != Z.star_identity(F.on_object(x)):
            return CoconeReport(False, "unit", x)
    for w in D.x2.objects:
        o1, o2, o = D.first.on_object(w), D.second.on_object(w), D.multiply.on_object(w)
        glued = Z.star_compose(obj(o1, s), obj(o1, t), obj(o2, t), cocone.component(o2), cocone.component(o1))
        if glued != cocone.component(o):
            return CoconeReport(False, "cocycle", w)
    return CoconeReport(True)


def _check_caps(diagram, apex, max_fiber, max_objects):
    if len(diagram.x0.objects) > max_objects:
        raise BoundExceeded(f"{len(diagram.x0.objects)} base objects exceed the cap of {max_objects}")
    if isinstance(apex, FinSetVUlt) and apex.bound > max_fiber:
        raise BoundExceeded(f"fibers up to {apex.bound} exceed the cap of {max_fiber}")


def descent_cocones(diagram, apex):
    D = diagram
    for F in all_vfunctors(D.x0, apex):
        choices = [
            [
                theta for theta in apex.star_hom(F.on_object(D.source.on_object(o)), F.on_object(D.target.on_object(o)))
                if apex.is_star_iso(F.on_object(D.source.on_object(o)), F.on_object(D.target.on_object(o)), theta)
            ]
            for o in D.x1.objects
        ]
        for theta in product(*choices):
            cocone = DescentCocone(D, F, tuple(theta))
            if cocone_validate(cocone):
                yield cocone


def desc_morphisms(first, second):
    """2-cells α : F ⇒ F' with (α·t) ∘ θ = θ' ∘ (α·s)."""
    D = first.diagram
    Z = first.functor.target
    F, G = first.functor, second.functor
    position = {x: i for i, x in enumerate(D.x0.objects)}
    for alpha in star_naturals(F, G):
        if all(
            Z.star_compose(
                F.on_object(D.source.on_object(o)), F.on_object(D.target.on_object(o)), G.on_object(D.target.on_object(o)),
                alpha[position[D.target.on_object(o)]], first.component(o),
            ) == Z.star_compose(
                F.on_object(D.source.on_object(o)), G.on_object(D.source.on_object(o)), G.on_object(D.target.on_object(o)),
                second.component(o), alpha[position[D.source.on_object(o)]],
            )
            for o in D.x1.objects
        ):
            yield alpha


def desc_category(diagram, apex, max_fiber=constants.MAX_COCONE_FIBER, max_objects=constants.MAX_COCONE_OBJECTS):
    """Desc(X•; Z): validated cocones with apex Z and the 2-cells between them."""
    _check_caps(diagram, apex, max_fiber, max_objects)
    cocones = list(descent_cocones(diagram, apex))

    def identity(c):
        return tuple(apex.star_identity(c.functor.on_object(x)) for x in diagram.x0.objects)

    def compose(g, f, a, b, c):
        return tuple(
            apex.star_compose(a.functor.on_object(x), b.functor.on_object(x), c.functor.on_object(x), gx, fx)
            for x, gx, fx in zip(diagram.x0.objects, g, f)
        )

    return category_of(cocones, desc_morphisms, identity, compose)


def category_of(objects, morphisms, identity, compose):
    """
    A FiniteCategory from a list of objects, a hom enumerator, the identity
    of each object and compose(g, f, a, b, c) for f : a -> b, g : b -> c.
    """
    identities = [(i, i, identity(a)) for i, a in enumerate(objects)]
    others = [
        (i, j, m)
        for i, a in enumerate(objects) for j, b in enumerate(objects)
        for m in morphisms(a, b) if i != j or m != identities[i][2]
    ]
    listing = identities + others
    lookup = {(i, j, m): k for k, (i, j, m) in enumerate(listing)}
    table = []
    for g, (j, k, mg) in enumerate(listing):
        for f, (i, j2, mf) in enumerate(listing):
            if j != j2:
                continue
            composite = compose(mg, mf, objects[i], objects[j], objects[k])
            if (i, k, composite) not in lookup:
                raise CategoryValidationError("a composite is missing from the hom sets", {"pair": [g, f]})
            table.append((g, f, lookup[(i, k, composite)]))
    return FiniteCategory(
        len(objects), [(i, j) for i, j, _ in listing], table,
        labels=objects, payloads=[m for _, _, m in listing], validate=False,
    )


# Effective descent


@dataclass(frozen=True)
class CriterionReport:
    holds: bool
    surjective: bool
    witness: object = None

    def __bool__(self):
        return self.holds


def effective_descent_criterion(pi, probe_period=constants.PROBE_PERIOD):
    """
    Surjective on objects, and every probed ultraarrow out of an image
    object lifts to an arrow of the same type over a lifted codomain family.
    ``surjective`` on the report is judged up to ⋆-isomorphism, so a
    functor can miss objects and still be essentially surjective.
    """
    X, Y = pi.source, pi.target
    images = {pi.on_object(x) for x in X.objects}
    missing = [y for y in Y.objects if y not in images]
    if missing:
        uncovered = [y for y in missing if not _isomorphic_to_image(Y, y, images)]
        if uncovered:
            return CriterionReport(False, False, {"missing": str(uncovered[0])})
        return CriterionReport(False, True, {"missing": str(missing[0]), "up_to_iso": True})
    preimages = {y: [x for x in X.objects if pi.on_object(x) == y] for y in Y.objects}
    for mu, family in probe_families(Y, probe_period):
        for x in X.objects:
            for f in Y.hom(pi.on_object(x), mu, family):
                if not _lifts(pi, x, f, preimages):
                    return CriterionReport(False, True, {"object": str(x), "arrow": f.to_document()})
    return CriterionReport(True, True)


def _isomorphic_to_image(Y, y, images):
    return any(Y.is_star_iso(z, y, payload) for z in images for payload in Y.star_hom(z, y))


def _lifts(pi, x, f, preimages):
    X = pi.source
    values = list(f.codomain.values)
    for picked in product(*(preimages[v] for v in values)):
        table = dict(zip(values, picked))
        lifted = f.codomain.map_values(lambda v: table[v])
        if any(pi(g).payload == f.payload for g in X.hom(x, f.mu, lifted)):
            return True
    return False


# Universality


@dataclass(frozen=True)
class UniversalityReport:
    apex: str
    essentially_surjective: bool
    fully_faithful: bool
    functors: int
    descent_data: int
    battery_version: int = constants.BATTERY_VERSION

    @property
    def ok(self):
        return self.essentially_surjective and self.fully_faithful

    def to_document(self):
        return {
            "apex": self.apex, "essentially_surjective": self.essentially_surjective,
            "fully_faithful": self.fully_faithful, "functors": self.functors,
            "descent_data": self.descent_data, "battery_version": self.battery_version,
        }


def whisker(cocone, H):
    """H ∘ (F, θ)."""
    F = cocone.functor
    D = cocone.diagram
    theta = tuple(
        H.on_star(F.on_object(D.source.on_object(o)), F.on_object(D.target.on_object(o)), cocone.component(o))
        for o in D.x1.objects
    )
    return DescentCocone(D, H.compose(F), theta)


def universality_check(cocone, apexes):
    """
    For every test apex Y, precomposition Hom(Z, Y) -> Desc(X•; Y) must be
    essentially surjective and fully faithful; both sides are enumerated.
    """
    reports = []
    F = cocone.functor
    for Y in apexes:
        desc = desc_category(cocone.diagram, Y)
        keys = {c.key(): i for i, c in enumerate(desc.labels)}
        functors = list(all_vfunctors(F.target, Y))
        images = [keys.get(whisker(cocone, H).key()) for H in functors]
        reached = {i for i in images if i is not None}
        essentially_surjective = all(
            any(desc.isomorphic_objects(i, j) for j in reached) for i in range(desc.objects)
        )
        fully_faithful = None not in images
        position = {z: i for i, z in enumerate(F.target.objects)}
        for (H, i), (K, j) in product(zip(functors, images), repeat=2):
            if not fully_faithful:
                break
            nats = list(star_naturals(H, K))
            restricted = {tuple(alpha[position[F.on_object(x)]] for x in F.source.objects) for alpha in nats}
            if len(restricted) != len(nats) or len(nats) != len(desc.hom(i, j)):
                fully_faithful = False
        reports.append(UniversalityReport(Y.name, essentially_surjective, fully_faithful, len(functors), desc.objects))
    return reports


def default_battery():
    """The test apexes universality is certified against."""
    return [
        FinSetVUlt(1), FinSetVUlt(2), PointVUlt(),
        PtSpace(FiniteSpace.point()), PtSpace(FiniteSpace.sierpinski()),
        PtSpace(FiniteSpace.discrete(2)), PtSpace(FiniteSpace.codiscrete(2)),
    ]


# Topological groupoids


@dataclass(frozen=True)
class TopGroupoid:
    """
    A groupoid internal to finite spaces. ``multiply`` maps (g, f) with
    t(f) = s(g) to g ∘ f.
    """
    objects: FiniteSpace
    arrows: FiniteSpace
    source: tuple
    target: tuple
    unit: tuple
    inverse: tuple
    multiply: dict

    @classmethod
    def trivial(cls, space):
        points = tuple(space.points)
        return cls(space, space, points, points, points, points, {(x, x): x for x in points}).validate()

    @classmethod
    def cyclic_action(cls, space, order, act):
        """ℤ/order acting on ``space`` through act(k, x); arrow (x, k) is x -> act(k, x) at x·order + k."""
        arrows = space.product(FiniteSpace.discrete(order))
        source = tuple(g // order for g in arrows.points)
        target = tuple(act(g % order, g // order) for g in arrows.points)
        unit = tuple(x * order for x in space.points)
        inverse = tuple(act(k, x) * order + (-k) % order for x in space.points for k in range(order))
        multiply = {}
        for g, f in product(arrows.points, repeat=2):
            if target[f] == source[g]:
                multiply[(g, f)] = source[f] * order + (g % order + f % order) % order
        return cls(space, arrows, source, target, unit, inverse, multiply).validate()

    @classmethod
    def pair_groupoid(cls, space):
        """One arrow x -> y for every pair, at x·n + y."""
        n = space.n
        arrows = space.product(space)
        source = tuple(g // n for g in arrows.points)
        target = tuple(g % n for g in arrows.points)
        unit = tuple(x * n + x for x in space.points)
        inverse = tuple((g % n) * n + g // n for g in arrows.points)
        multiply = {(g, f): (f // n) * n + g % n for g, f in product(arrows.points, repeat=2) if f % n == g // n}
        return cls(space, arrows, source, target, unit, inverse, multiply).validate()

    def composable(self):
        """Pairs (f, g) with t(f) = s(g), in the order composable_space lists them."""
        return [(f, g) for f in self.arrows.points for g in self.arrows.points if self.target[f] == self.source[g]]

    def composable_space(self):
        n = self.arrows.n
        whole = self.arrows.product(self.arrows)
        return whole.subspace([f * n + g for f, g in self.composable()])[0]

    def structure_maps(self):
        two = self.composable_space()
        pairs = self.composable()
        return {
            "source": SpaceMap(self.arrows, self.objects, self.source),
            "target": SpaceMap(self.arrows, self.objects, self.target),
            "unit": SpaceMap(self.objects, self.arrows, self.unit),
            "inverse": SpaceMap(self.arrows, self.arrows, self.inverse),
            "first": SpaceMap(two, self.arrows, tuple(f for f, _ in pairs)),
            "second": SpaceMap(two, self.arrows, tuple(g for _, g in pairs)),
            "multiply": SpaceMap(two, self.arrows, tuple(self.multiply[(g, f)] for f, g in pairs)),
        }

    def violation(self):
        for name, f in self.structure_maps().items():
            if not map_continuous(f):
                return {"law": "continuity", "map": name}
        s, t, u, inv, m = self.source, self.target, self.unit, self.inverse, self.multiply
        for x in self.objects.points:
            if s[u[x]] != x or t[u[x]] != x:
                return {"law": "unit typing", "object": x}
        for f in self.arrows.points:
            if m.get((u[t[f]], f)) != f or m.get((f, u[s[f]])) != f:
                return {"law": "unit", "arrow": f}
            if m.get((inv[f], f)) != u[s[f]] or m.get((f, inv[f])) != u[t[f]]:
                return {"law": "inverse", "arrow": f}
        for f, g in self.composable():
            h = m.get((g, f))
            if h is None or s[h] != s[f] or t[h] != t[g]:
                return {"law": "composition typing", "pair": [g, f]}
        for f, g in self.composable():
            for k in self.arrows.points:
                if t[g] == s[k] and m[(k, m[(g, f)])] != m[(m[(k, g)], f)]:
                    return {"law": "associativity", "triple": [k, g, f]}
        return None

    def validate(self):
        witness = self.violation()
        if witness is not None:
            raise CategoryValidationError("not a topological groupoid", witness)
        return self


def groupoid_diagram(G):
    """The pt-image of a topological groupoid as a codescent diagram."""
    maps = G.structure_maps()
    x0, x1 = PtSpace(G.objects), PtSpace(G.arrows)
    x2 = PtSpace(maps["first"].source)

    def functor(name, source, target):
        return space_functor(maps[name], source, target)

    return CodescentDiagram(
        x0, x1, x2,
        functor("source", x1, x0), functor("target", x1, x0), functor("unit", x0, x1),
        functor("first", x2, x1), functor("second", x2, x1), functor("multiply", x2, x1),
    )


@dataclass(frozen=True)
class EquivariantSheaf:
    """An étale space over T0 with bijections E_{s g} -> E_{t g} for every arrow g."""
    groupoid: TopGroupoid
    sheaf: EtaleSheaf
    action: tuple

    def act(self, g, e):
        """g · e for e over s(g)."""
        fiber = self.sheaf.fiber(self.groupoid.source[g])
        return self.sheaf.fiber(self.groupoid.target[g])[self.action[g][fiber.index(e)]]

    def violation(self):
        G, E = self.groupoid, self.sheaf
        for x in G.objects.points:
            if self.action[G.unit[x]] != tuple(range(len(E.fiber(x)))):
                return {"law": "unital", "object": x}
        for f, g in G.composable():
            h = G.multiply[(g, f)]
            for e in E.fiber(G.source[f]):
                if self.act(h, e) != self.act(g, self.act(f, e)):
                    return {"law": "multiplicative", "pair": [g, f]}
        pairs = [(g, e) for g in G.arrows.points for e in E.fiber(G.source[g])]
        n = E.total.n
        whole = G.arrows.product(E.total)
        domain = whole.subspace([g * n + e for g, e in pairs])[0]
        if not map_continuous(SpaceMap(domain, E.total, tuple(self.act(g, e) for g, e in pairs))):
            return {"law": "continuity"}
        return None


def equivariant_objects(G, bound):
    seen = set()
    for E in enumerate_etale(G.objects, bound):
        if E.projection in seen:
            continue
        seen.add(E.projection)
        choices = [
            list(permutations(range(len(E.fiber(G.target[g])))))
            if len(E.fiber(G.source[g])) == len(E.fiber(G.target[g])) else []
            for g in G.arrows.points
        ]
        for action in product(*choices):
            candidate = EquivariantSheaf(G, E, tuple(action))
            if candidate.violation() is None:
                yield candidate


def equivariant_morphisms(A, B):
    G = A.groupoid
    for h in etale_morphisms(A.sheaf, B.sheaf):
        if all(h(A.act(g, e)) == B.act(g, h(e)) for g in G.arrows.points for e in A.sheaf.fiber(G.source[g])):
            yield h.images


def equivariant_sheaves(G, bound):
    """The category of equivariant sheaves with fibers <= bound."""
    objects = list(equivariant_objects(G, bound))
    return category_of(
        objects, equivariant_morphisms,
        lambda a: tuple(a.sheaf.total.points),
        lambda g, f, a, b, c: tuple(g[x] for x in f),
    )


def comparison_cocone(diagram, equivariant, apex):
    """The descent datum of an equivariant sheaf with values in FinSetVUlt(bound)."""
    G, E = equivariant.groupoid, equivariant.sheaf
    stalks = ev_space(E, diagram.x0)
    objects = {x: frozenset(range(stalks.size(x))) for x in diagram.x0.objects}
    arrows = {(a, b, p): stalks.action(a, b, p) for a, b, p in diagram.x0.star_arrows()}
    F = VUltFunctor(diagram.x0, apex, objects, arrows)
    return DescentCocone(diagram, F, tuple(equivariant.action[g] for g in diagram.x1.objects))


@dataclass(frozen=True)
class ComparisonReport:
    equivariant_objects: int
    descent_objects: int
    essentially_surjective: bool
    fully_faithful: bool

    @property
    def ok(self):
        return self.essentially_surjective and self.fully_faithful

    def to_document(self):
        return {
            "equivariant_objects": self.equivariant_objects, "descent_objects": self.descent_objects,
            "essentially_surjective": self.essentially_surjective, "fully_faithful": self.fully_faithful,
        }


def equivariant_comparison(G, bound):
    """Equivariant sheaves against Desc(pt-image of G; FinSetVUlt(bound)), object by object."""
    diagram = groupoid_diagram(G)
    apex = FinSetVUlt(bound)
    desc = desc_category(diagram, apex)
    keys = {c.key(): i for i, c in enumerate(desc.labels)}
    objects = list(equivariant_objects(G, bound))
    images = [keys.get(comparison_cocone(diagram, A, apex).key()) for A in objects]
    reached = {i for i in images if i is not None}
    essentially_surjective = all(any(desc.isomorphic_objects(i, j) for j in reached) for i in range(desc.objects))
    fully_faithful = None not in images and all(
        sum(1 for _ in equivariant_morphisms(A, B)) == len(desc.hom(i, j))
        for (A, i), (B, j) in product(zip(objects, images), repeat=2)
    )
    return ComparisonReport(len(objects), desc.objects, essentially_surjective, fully_faithful)


# Exploration


@dataclass(frozen=True)
class SearchHit:
    source: str
    target: str
    images: tuple
    criterion: bool
    universal: bool


def descent_search(spaces, apexes=None):
    """
    Space maps whose canonical cocone is universal on the battery while the
    lifting criterion fails.
    """
    apexes = apexes if apexes is not None else default_battery()
    hits = []
    for source, target in product(spaces, repeat=2):
        for images in product(range(target.n), repeat=source.n):
            f = SpaceMap(source, target, images)
            if not map_continuous(f):
                continue
            F = space_functor(f)
            if len(F.source.objects) > constants.MAX_COCONE_OBJECTS:
                continue
            criterion = bool(effective_descent_criterion(F, probe_period=2))
            diagram = kernel_groupoid(F)
            universal = all(r.ok for r in universality_check(canonical_cocone(diagram, F), apexes))
            if universal and not criterion:
                hits.append(SearchHit(str(source), str(target), images, criterion, universal))
    return hits
