from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, product

from . import constants
from .category import FiniteCategory, all_functors
from .exceptions import (
    CarrierMismatch, EmptyLargeFiber, ProbeExhausted, TypeMismatch, UnsupportedUltrafilter
)
from .maps import IndexSet, UPFamily
from .space import PointFamily, ucvg
from .ultrafilter import (
    NormalForm, encoding_for, factorial, family_limit, from_normal_form, principal, product_set, star,
    uf_equal, uf_sum
)
from .ultraproduct import BoundedFamily, uprod_enumerate


@dataclass(frozen=True)
class UltraArrow:
    """
    f : a ⤚ (b_s)_{s:mu}. ``payload`` is the ⋆-arrow from ``domain`` to the
    object the codomain family takes on a mu-large set.
    """
    domain: object
    mu: object
    codomain: UPFamily
    payload: object

    @property
    def limit_object(self):
        return family_limit(self.mu, self.codomain)

    def to_document(self):
        return {
            "domain": _object_text(self.domain),
            "ultrafilter": self.mu.to_text(),
            "codomain": self.codomain.to_text(_object_text),
            "payload": _object_text(self.payload),
        }


def _object_text(value):
    if isinstance(value, frozenset):
        return "{" + ",".join(str(v) for v in sorted(value)) + "}"
    if isinstance(value, tuple):
        return "(" + ",".join(_object_text(v) for v in value) + ")"
    return str(value)


def same_family(x, y):
    return x.index == y.index and dict(x.items()) == dict(y.items())


def arrows_equal(f, g):
    return (
        f.domain == g.domain
        and f.payload == g.payload
        and uf_equal(f.mu, g.mu)
        and same_family(f.codomain, g.codomain)
    )


class VUltInstance:
    """
    A virtual ultracategory with finitely many objects, presented by its
    ⋆-arrows. A hom query over an ultrafamily collapses to the ⋆-hom into
    the object the family takes on a large set.
    """
    __slots__ = ("objects", "name")

    def __init__(self, objects, name):
        self.objects = list(objects)
        self.name = name

    def star_hom(self, a, b):
        raise NotImplementedError

    def star_identity(self, a):
        raise NotImplementedError

    def star_compose(self, a, b, c, g, f):
        """g ∘ f for ⋆-arrows f : a -> b and g : b -> c."""
        raise NotImplementedError

    def limit_hom(self, a, mu, family):
        """The ⋆-payloads of the arrows a ⤚ family."""
        return self.star_hom(a, family_limit(mu, family))

    def _check_query(self, a, mu, family):
        if family.index != mu.carrier:
            raise CarrierMismatch(f"family over {family.index} with an ultrafilter on {mu.carrier}")
        if a not in self.objects or any(b not in self.objects for b in family.values):
            raise CarrierMismatch(f"query mentions objects outside {self.name}")
        try:
            mu.normal_form()
        except UnsupportedUltrafilter:
            raise UnsupportedUltrafilter(f"{mu.to_text()} is outside the decidable fragment") from None

    def hom(self, a, mu, family):
        self._check_query(a, mu, family)
        return [UltraArrow(a, mu, family, payload) for payload in self.limit_hom(a, mu, family)]

    def star_arrow(self, a, b, payload):
        return UltraArrow(a, star(), UPFamily.from_list([b]), payload)

    def identity(self, a):
        return self.star_arrow(a, a, self.star_identity(a))

    def star_arrows(self):
        for a in self.objects:
            for b in self.objects:
                for payload in self.star_hom(a, b):
                    yield a, b, payload

    def is_star_iso(self, a, b, payload):
        return self.star_inverse(a, b, payload) is not None

    def star_inverse(self, a, b, payload):
        for back in self.star_hom(b, a):
            if (self.star_compose(a, b, a, back, payload) == self.star_identity(a)
                    and self.star_compose(b, a, b, payload, back) == self.star_identity(b)):
                return back
        return None

    def __repr__(self):
        return f"<{type(self).__name__} {self.name}>"


class PointVUlt(VUltInstance):
    """One object; every hom set is a singleton."""
    __slots__ = ()

    def __init__(self):
        super().__init__([0], "point")

    def star_hom(self, a, b):
        return [()]

    def star_identity(self, a):
        return ()

    def star_compose(self, a, b, c, g, f):
        return ()


class FinSetVUlt(VUltInstance):
    """
    Subsets of Fin(bound); an arrow a ⤚ (B_s)_{s:mu} is a function from a
    into ∫_{s:mu} B_s, stored as its images listed along sorted(a).
    """
    __slots__ = ("bound",)

    def __init__(self, bound):
        objects = [frozenset(c) for k in range(bound + 1) for c in combinations(range(bound), k)]
        super().__init__(objects, f"finset({bound})")
        self.bound = bound

    def star_hom(self, a, b):
        return list(product(sorted(b), repeat=len(a)))

    def limit_hom(self, a, mu, family):
        fam = BoundedFamily.from_fibers(mu.carrier, self.bound, family, *family.shape())
        try:
            classes = uprod_enumerate(mu, fam).values()
        except EmptyLargeFiber:
            classes = []
        return list(product(sorted(classes), repeat=len(a)))

    def star_identity(self, a):
        return tuple(sorted(a))

    def star_compose(self, a, b, c, g, f):
        images = dict(zip(sorted(b), g))
        return tuple(images[x] for x in f)


class PtSpace(VUltInstance):
    """Points of a finite space; a ⤚ (b_s)_{s:mu} has one arrow iff a ≼ (b_s)_{s:mu}."""
    __slots__ = ("space",)

    def __init__(self, space):
        super().__init__(space.points, f"pt({space.n})")
        self.space = space

    def star_hom(self, a, b):
        return [()] if self.space.specializes(a, b) else []

    def limit_hom(self, a, mu, family):
        return [()] if ucvg(self.space, a, PointFamily(mu, family)) else []

    def star_identity(self, a):
        return ()

    def star_compose(self, a, b, c, g, f):
        return ()


class Alex(VUltInstance):
    """The Alexandroff v-ultracategory of a finite category: a ⤚ (b_s)_{s:mu} is ∫_{s:mu} C(a, b_s)."""
    __slots__ = ("category",)

    def __init__(self, category):
        super().__init__(range(category.objects), f"alex({category.objects})")
        self.category = category

    def star_hom(self, a, b):
        return self.category.hom(a, b)

    def limit_hom(self, a, mu, family):
        bound = len(self.category.arrows)
        fam = BoundedFamily.from_fibers(mu.carrier, bound, lambda s: self.category.hom(a, family(s)), *family.shape())
        try:
            return sorted(uprod_enumerate(mu, fam).values())
        except EmptyLargeFiber:
            return []

    def star_identity(self, a):
        return a

    def star_compose(self, a, b, c, g, f):
        return self.category.compose(g, f)


class Pullback(VUltInstance):
    """
    The strict 2-pullback of F : X -> Z and G : Y -> Z. Objects are
    triplets (θ, x, y) with θ : F(x) -> G(y) invertible in the points of Z;
    arrows are pairs (f, g) with G(g) ∘ θ = θ' ∘ F(f).
    """
    __slots__ = ("first", "second", "base")

    def __init__(self, first, second):
        if first.target.name != second.target.name:
            raise CarrierMismatch("a pullback needs functors into the same instance")
        z = first.target
        objects = [
            (theta, x, y)
            for x in first.source.objects for y in second.source.objects
            for theta in z.star_hom(first.on_object(x), second.on_object(y))
            if z.is_star_iso(first.on_object(x), second.on_object(y), theta)
        ]
        super().__init__(objects, f"pullback({first.source.name},{second.source.name})")
        self.first, self.second, self.base = first, second, z

    def star_hom(self, a, b):
        (theta, x, y), (theta2, x2, y2) = a, b
        F, G, z = self.first, self.second, self.base
        fx, fx2, gy, gy2 = F.on_object(x), F.on_object(x2), G.on_object(y), G.on_object(y2)
        return [
            (f, g)
            for f in F.source.star_hom(x, x2) for g in G.source.star_hom(y, y2)
            if z.star_compose(fx, gy, gy2, G.on_star(y, y2, g), theta)
            == z.star_compose(fx, fx2, gy2, theta2, F.on_star(x, x2, f))
        ]

    def star_identity(self, a):
        _, x, y = a
        return self.first.source.star_identity(x), self.second.source.star_identity(y)

    def star_compose(self, a, b, c, g, f):
        (_, x, y), (_, x2, y2), (_, x3, y3) = a, b, c
        return (
            self.first.source.star_compose(x, x2, x3, g[0], f[0]),
            self.second.source.star_compose(y, y2, y3, g[1], f[1]),
        )


# Composition


def vult_compose(X, gs, f):
    """
    Compose f : a ⤚ (b_s)_{s:mu} with a mu-family of arrows
    g_s : b_s ⤚ (c_{s,t})_{t:ν_s}; the result has type Σ_{s:mu} ν_s.
    """
    mu = f.mu
    if gs.index != mu.carrier:
        raise CarrierMismatch(f"arrow family over {gs.index} composed after an arrow of type {mu.to_text()}")
    matching = f.codomain.pair(gs).where(lambda pair: pair[1].domain == pair[0])
    if not mu.large(matching):
        raise TypeMismatch("the arrows do not start where f ends on a large set")
    nus = gs.map_values(lambda g: g.mu)
    encoding = encoding_for(mu, nus)
    codomain = UPFamily.build(encoding.carrier, [
        (c, product_set(encoding, level, c_level))
        for g, level in gs.items()
        for c, c_level in g.codomain.items()
    ])
    g = family_limit(mu, gs)
    payload = X.star_compose(f.domain, g.domain, g.limit_object, g.payload, f.payload)
    return UltraArrow(f.domain, uf_sum(mu, nus), codomain, payload)


def identity_family(X, f):
    """(id_{b_s})_{s:mu} for the codomain of f."""
    return f.codomain.map_values(X.identity)


def unit_laws_hold(X, f):
    left = vult_compose(X, identity_family(X, f), f)
    right = vult_compose(X, UPFamily.from_list([f]), X.identity(f.domain))
    return arrows_equal(left, f) and arrows_equal(right, f)


def associativity_holds(X, f, gs, hs):
    """
    (h ∘ g) ∘ f against h ∘ (g ∘ f) for ⋆-typed outer layers: ``gs`` is a
    family over f's carrier and ``hs`` a family of ⋆-arrows on the objects
    the g's reach.
    """
    inner = vult_compose(X, gs, f)
    first = vult_compose(X, inner.codomain.map_values(lambda c: _pick(hs, c)), inner)
    composed = gs.map_values(lambda g: vult_compose(X, g.codomain.map_values(lambda c: _pick(hs, c)), g))
    second = vult_compose(X, composed, f)
    return arrows_equal(first, second)


def _pick(arrows, c):
    for arrow in arrows:
        if arrow.domain == c:
            return arrow
    raise TypeMismatch(f"no arrow out of {_object_text(c)}")


# Probes


def probe_families(X, probe_period=constants.PROBE_PERIOD):
    """
    Every (mu, family) query of the probe strategy: ⋆ and principal
    queries on Fin(2) exhaustively, and factorial queries putting b on
    multiples of p and c elsewhere for each p <= probe_period.
    """
    queries = [(star(), UPFamily.from_list([b])) for b in X.objects]
    for index in (0, 1):
        mu = principal(IndexSet.fin(2), index)
        queries += [(mu, UPFamily.from_list([b, c])) for b in X.objects for c in X.objects]
    nat = IndexSet.nat()
    for shift in (0, 1):
        mu = factorial() if shift == 0 else from_normal_form(NormalForm(nat, shift=shift))
        for p in range(2, probe_period + 1):
            for b, c in product(X.objects, repeat=2):
                if b == c:
                    continue
                family = UPFamily.from_function(nat, lambda n, b=b, c=c, p=p: b if n % p == 0 else c, 0, p)
                queries.append((mu, family))
    return queries


# Functors


class VUltFunctor:
    """
    A functor of v-ultracategories, given on objects and on ⋆-arrows. The
    action on an ultraarrow maps the codomain family pointwise and the
    payload at its limit object.
    """
    __slots__ = ("source", "target", "_objects", "_arrows")

    def __init__(self, source, target, objects, arrows):
        self.source = source
        self.target = target
        self._objects = objects
        self._arrows = arrows

    def on_object(self, a):
        if callable(self._objects):
            return self._objects(a)
        return self._objects[a]

    def on_star(self, a, b, payload):
        if callable(self._arrows):
            return self._arrows(a, b, payload)
        return self._arrows[(a, b, payload)]

    def __call__(self, f):
        return UltraArrow(
            self.on_object(f.domain),
            f.mu,
            f.codomain.map_values(self.on_object),
            self.on_star(f.domain, f.limit_object, f.payload),
        )

    def compose(self, other):
        """self ∘ other."""
        return VUltFunctor(
            other.source, self.target,
            lambda a: self.on_object(other.on_object(a)),
            lambda a, b, p: self.on_star(other.on_object(a), other.on_object(b), other.on_star(a, b, p)),
        )

    def object_table(self):
        return tuple(self.on_object(a) for a in self.source.objects)


def identity_vfunctor(X):
    return VUltFunctor(X, X, lambda a: a, lambda a, b, p: p)


def space_functor(f, source=None, target=None):
    """pt(f) : PtSpace(T) -> PtSpace(T') for a map of finite spaces."""
    return VUltFunctor(source or PtSpace(f.source), target or PtSpace(f.target), lambda a: f(a), lambda a, b, p: p)


def category_functor(functor, source=None, target=None):
    """Alex(F) for a functor of finite categories."""
    return VUltFunctor(
        source or Alex(functor.source), target or Alex(functor.target),
        functor.on_object, lambda a, b, p: functor(p),
    )


def pullback_projections(P):
    first = VUltFunctor(P, P.first.source, lambda o: o[1], lambda a, b, p: p[0])
    second = VUltFunctor(P, P.second.source, lambda o: o[2], lambda a, b, p: p[1])
    return first, second


def vult_pullback(F, G):
    return Pullback(F, G)


@dataclass(frozen=True)
class ValidationReport:
    valid: bool
    checked: int
    witness: dict = None
    strategy: str = constants.PROBE_STRATEGY
    strategy_version: int = constants.PROBE_STRATEGY_VERSION

    def __bool__(self):
        return self.valid


def _arrow_exists(Y, arrow):
    return arrow.domain in Y.objects and arrow.payload in Y.star_hom(arrow.domain, arrow.limit_object)


def functor_validate(F, probe_period=constants.PROBE_PERIOD, max_probes=None):
    """
    Functor laws on the probe set: F(f) is an arrow of the target with the
    right type, identities go to identities and F(g ∘ f) = F(g) ∘ F(f) for
    every probed f followed by ⋆-arrows.
    """
    X, Y = F.source, F.target
    checked = 0
    for a in X.objects:
        if not arrows_equal(F(X.identity(a)), Y.identity(F.on_object(a))):
            return ValidationReport(False, checked, {"identity": _object_text(a)})
    for mu, family in probe_families(X, probe_period):
        for a in X.objects:
            for f in X.hom(a, mu, family):
                checked += 1
                if max_probes is not None and checked > max_probes:
                    raise ProbeExhausted(f"validated on {max_probes} probes")
                image = F(f)
                if not _arrow_exists(Y, image):
                    return ValidationReport(False, checked, {"query": f.to_document(), "law": "typing"})
                for continuation in _star_continuations(X, family):
                    composite = vult_compose(X, continuation, f)
                    mapped = vult_compose(Y, continuation.map_values(F), image)
                    if not arrows_equal(F(composite), mapped):
                        return ValidationReport(False, checked, {"query": f.to_document(), "law": "composition"})
    return ValidationReport(True, checked)


def _star_continuations(X, family):
    """Families s |-> one ⋆-arrow out of b_s, one choice per distinct value."""
    values = list(family.values)
    choices = []
    for b in values:
        options = [X.star_arrow(b, c, p) for c in X.objects for p in X.star_hom(b, c)]
        choices.append(options[:2])
    for picked in product(*choices):
        table = dict(zip(values, picked))
        yield family.map_values(lambda b: table[b])


@dataclass(frozen=True)
class VUltNat:
    """α : F ⇒ G with ⋆-components α_a : F(a) -> G(a)."""
    first: VUltFunctor
    second: VUltFunctor
    components: tuple

    def component(self, a):
        X = self.first.source
        return self.first.target.star_arrow(
            self.first.on_object(a), self.second.on_object(a), self.components[X.objects.index(a)]
        )


def nat_validate(alpha, probe_period=constants.PROBE_PERIOD):
    """G(f) ∘ α_a = (α_{b_s})_{s:mu} ∘ F(f) on every probed f."""
    F, G = alpha.first, alpha.second
    X, Y = F.source, F.target
    checked = 0
    for a in X.objects:
        fa, ga = F.on_object(a), G.on_object(a)
        if alpha.components[X.objects.index(a)] not in Y.star_hom(fa, ga):
            return ValidationReport(False, checked, {"component": _object_text(a)})
    for mu, family in probe_families(X, probe_period):
        for a in X.objects:
            for f in X.hom(a, mu, family):
                checked += 1
                left = vult_compose(Y, UPFamily.from_list([G(f)]), alpha.component(a))
                right = vult_compose(Y, f.codomain.map_values(alpha.component), F(f))
                if not (left.payload == right.payload and uf_equal(left.mu, right.mu)
                        and same_family(left.codomain, right.codomain)):
                    return ValidationReport(False, checked, {"query": f.to_document()})
    return ValidationReport(True, checked)


# Points


def vult_points(X):
    """The category of points: the objects of X with hom(a, b) = X(a, (b)_⋆)."""
    identities = [(a, a, X.star_identity(a)) for a in X.objects]
    others = [arrow for arrow in X.star_arrows() if arrow[0] != arrow[1] or arrow[2] != X.star_identity(arrow[0])]
    position = {a: i for i, a in enumerate(X.objects)}
    listing = identities + others
    lookup = {arrow: k for k, arrow in enumerate(listing)}
    compose = []
    for g, (b, c, pg) in enumerate(listing):
        for f, (a, b2, pf) in enumerate(listing):
            if b != b2:
                continue
            compose.append((g, f, lookup[(a, c, X.star_compose(a, b, c, pg, pf))]))
    return FiniteCategory(
        len(X.objects),
        [(position[a], position[b]) for a, b, _ in listing],
        compose,
        labels=X.objects,
        payloads=[p for _, _, p in listing],
        validate=False,
    )


def all_vfunctors(X, Y):
    """
    Every functor X -> Y, read off the functors between the point
    categories; the ultraarrow action is determined by the ⋆-part.
    """
    px, py = vult_points(X), vult_points(Y)
    for functor in all_functors(px, py):
        objects = {px.labels[i]: py.labels[functor.on_object(i)] for i in range(px.objects)}
        arrows = {
            (px.labels[a], px.labels[b], px.payloads[f]): py.payloads[functor(f)]
            for f, (a, b) in enumerate(px.arrows)
        }
        yield VUltFunctor(X, Y, objects, arrows)


def all_vnats(F, G):
    """Every natural transformation F ⇒ G, by components, validated on probes."""
    for components in star_naturals(F, G):
        alpha = VUltNat(F, G, components)
        if nat_validate(alpha, probe_period=2):
            yield alpha


def star_naturals(F, G):
    """Components α_a : F(a) -> G(a) with G(f) ∘ α_a = α_b ∘ F(f) on every ⋆-arrow f."""
    X, Y = F.source, F.target
    choices = [Y.star_hom(F.on_object(a), G.on_object(a)) for a in X.objects]
    position = {a: i for i, a in enumerate(X.objects)}
    for components in product(*choices):
        if all(
            Y.star_compose(F.on_object(a), G.on_object(a), G.on_object(b), G.on_star(a, b, p), components[position[a]])
            == Y.star_compose(F.on_object(a), F.on_object(b), G.on_object(b), components[position[b]], F.on_star(a, b, p))
            for a, b, p in X.star_arrows()
        ):
            yield tuple(components)
