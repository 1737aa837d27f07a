from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations, product

from .exceptions import CategoryValidationError, TypeMismatch


class FiniteCategory:
    """
    Objects are 0..n-1; arrow i has ``arrows[i] = (source, target)`` and
    arrows 0..n-1 are the identities. ``labels`` and ``payloads`` keep
    the names the objects and arrows had where the category came from.
    """
    __slots__ = ("objects", "arrows", "labels", "payloads", "_compose")

    def __init__(self, objects, arrows, compose, labels=None, payloads=None, validate=True):
        self.objects = objects
        self.arrows = tuple(tuple(arrow) for arrow in arrows)
        self.labels = tuple(labels) if labels is not None else tuple(range(objects))
        self.payloads = tuple(payloads) if payloads is not None else tuple(range(len(self.arrows)))
        if isinstance(compose, dict):
            self._compose = dict(compose)
        else:
            self._compose = {(g, f): h for g, f, h in compose}
        for f, (a, b) in enumerate(self.arrows):
            self._compose.setdefault((b, f), f)
            self._compose.setdefault((f, a), f)
        if validate:
            self.validate()

    @classmethod
    def from_document(cls, data):
        return cls(data['objects'], data['arrows'], data.get('compose', []))

    @classmethod
    def discrete(cls, n):
        return cls(n, [(a, a) for a in range(n)], [])

    @classmethod
    def terminal(cls):
        return cls.discrete(1)

    @classmethod
    def arrow_category(cls):
        """• -> •."""
        return cls(2, [(0, 0), (1, 1), (0, 1)], [])

    @classmethod
    def from_preorder(cls, n, leq, labels=None):
        arrows = [(a, a) for a in range(n)]
        arrows += [(a, b) for a in range(n) for b in range(n) if a != b and leq(a, b)]
        index = {arrow: i for i, arrow in enumerate(arrows)}
        compose = [
            (index[(b, c)], index[(a, b)], index[(a, c)])
            for (a, b) in arrows for (b2, c) in arrows if b == b2
        ]
        return cls(n, arrows, compose, labels)

    @classmethod
    def cyclic_group(cls, order):
        """ℤ/order as a one-object category; arrow k is k ∈ ℤ/order."""
        return cls(1, [(0, 0)] * order, [(g, f, (g + f) % order) for g in range(order) for f in range(order)])

    # Structure

    def source(self, f):
        return self.arrows[f][0]

    def target(self, f):
        return self.arrows[f][1]

    def identity(self, a):
        return a

    def hom(self, a, b):
        return [f for f, arrow in enumerate(self.arrows) if arrow == (a, b)]

    def arrows_from(self, a):
        return [f for f, arrow in enumerate(self.arrows) if arrow[0] == a]

    def compose(self, g, f):
        """g ∘ f."""
        if self.target(f) != self.source(g):
            raise TypeMismatch(f"arrow {g} does not start where arrow {f} ends")
        return self._compose[(g, f)]

    def validate(self):
        for a in range(self.objects):
            if self.arrows[a] != (a, a):
                raise CategoryValidationError(f"arrow {a} must be the identity on object {a}", {"arrow": a})
        for f, (a, b) in enumerate(self.arrows):
            if not (0 <= a < self.objects and 0 <= b < self.objects):
                raise CategoryValidationError(f"arrow {f} has an endpoint outside the objects", {"arrow": f})
        for g, f in product(range(len(self.arrows)), repeat=2):
            if self.target(f) != self.source(g):
                continue
            h = self._compose.get((g, f))
            if h is None:
                raise CategoryValidationError(f"{g} ∘ {f} is missing", {"pair": [g, f]})
            if self.arrows[h] != (self.source(f), self.target(g)):
                raise CategoryValidationError(f"{g} ∘ {f} has the wrong type", {"pair": [g, f]})
        for h, g, f in product(range(len(self.arrows)), repeat=3):
            if self.target(f) != self.source(g) or self.target(g) != self.source(h):
                continue
            if self.compose(h, self.compose(g, f)) != self.compose(self.compose(h, g), f):
                raise CategoryValidationError("composition is not associative", {"triple": [h, g, f]})

    def inverse(self, f):
        a, b = self.arrows[f]
        for g in self.hom(b, a):
            if self.compose(g, f) == a and self.compose(f, g) == b:
                return g
        return None

    def is_iso(self, f):
        return self.inverse(f) is not None

    def isomorphic_objects(self, a, b):
        return any(self.is_iso(f) for f in self.hom(a, b))

    def iso_classes(self):
        classes = []
        for a in range(self.objects):
            for cls in classes:
                if self.isomorphic_objects(cls[0], a):
                    cls.append(a)
                    break
            else:
                classes.append([a])
        return classes

    def is_isomorphic_to(self, other):
        """Brute-force isomorphism of categories (not mere equivalence)."""
        if self.objects != other.objects or len(self.arrows) != len(other.arrows):
            return False
        for objects in permutations(range(other.objects)):
            functor = _extend_functor(self, other, objects, bijective=True)
            if functor is not None:
                return True
        return False

    def to_document(self):
        compose = sorted(
            [g, f, h] for (g, f), h in self._compose.items()
            if g >= self.objects and f >= self.objects
        )
        return {"objects": self.objects, "arrows": [list(arrow) for arrow in self.arrows], "compose": compose}

    def __len__(self):
        return self.objects

    def __repr__(self):
        return f"<FiniteCategory objects={self.objects} arrows={len(self.arrows)}>"


@dataclass(frozen=True)
class CategoryFunctor:
    source: FiniteCategory
    target: FiniteCategory
    objects: tuple
    arrows: tuple

    def __call__(self, f):
        return self.arrows[f]

    def on_object(self, a):
        return self.objects[a]

    def compose(self, other):
        """self ∘ other."""
        return CategoryFunctor(
            other.source, self.target,
            tuple(self.objects[a] for a in other.objects),
            tuple(self.arrows[f] for f in other.arrows),
        )


def identity_functor(category):
    return CategoryFunctor(category, category, tuple(range(category.objects)), tuple(range(len(category.arrows))))


def _extend_functor(source, target, objects, bijective=False):
    """Search for an arrow map over a fixed object map; the first functor found or None."""
    choices = []
    for f, (a, b) in enumerate(source.arrows):
        if f < source.objects:
            choices.append([objects[f]])
        else:
            choices.append(target.hom(objects[a], objects[b]))
    for arrows in product(*choices):
        if bijective and len(set(arrows)) != len(arrows):
            continue
        if _is_functorial(source, target, arrows):
            return CategoryFunctor(source, target, tuple(objects), tuple(arrows))
    return None


def _is_functorial(source, target, arrows):
    for g, f in product(range(len(source.arrows)), repeat=2):
        if source.target(f) != source.source(g):
            continue
        if arrows[source.compose(g, f)] != target.compose(arrows[g], arrows[f]):
            return False
    return True


def all_functors(source, target):
    """Every functor source -> target."""
    for objects in product(range(target.objects), repeat=source.objects):
        choices = []
        for f, (a, b) in enumerate(source.arrows):
            if f < source.objects:
                choices.append([objects[f]])
            else:
                choices.append(target.hom(objects[a], objects[b]))
        for arrows in product(*choices):
            if _is_functorial(source, target, arrows):
                yield CategoryFunctor(source, target, tuple(objects), tuple(arrows))


def natural_transformations(first, second):
    """Every family of components α_a : F(a) -> G(a) natural in a."""
    source, target = first.source, first.target
    choices = [target.hom(first.objects[a], second.objects[a]) for a in range(source.objects)]
    for components in product(*choices):
        if all(
            target.compose(second(f), components[a]) == target.compose(components[b], first(f))
            for f, (a, b) in enumerate(source.arrows)
        ):
            yield tuple(components)


def functor_category(source, target):
    """Functors source -> target and natural transformations, as a finite category."""
    functors = list(all_functors(source, target))
    arrows = [(i, i) for i in range(len(functors))]
    identity_components = {
        i: tuple(functor.objects[a] for a in range(source.objects)) for i, functor in enumerate(functors)
    }
    others = []
    for i, first in enumerate(functors):
        for j, second in enumerate(functors):
            for components in natural_transformations(first, second):
                if i == j and components == identity_components[i]:
                    continue
                others.append(((i, j), components))
    arrows += [pair for pair, _ in others]
    payloads = [identity_components[i] for i in range(len(functors))] + [c for _, c in others]
    lookup = {(arrows[k], payloads[k]): k for k in range(len(arrows))}
    compose = []
    for g, (b, c) in enumerate(arrows):
        for f, (a, b2) in enumerate(arrows):
            if b != b2:
                continue
            components = tuple(target.compose(payloads[g][x], payloads[f][x]) for x in range(source.objects))
            compose.append((g, f, lookup[((a, c), components)]))
    return FiniteCategory(len(functors), arrows, compose, labels=functors, payloads=payloads), functors


def small_categories(max_objects, max_parallel):
    """
    Every category on at most ``max_objects`` objects with at most
    ``max_parallel`` arrows in each hom set, by backtracking over
    composition tables. Isomorphic copies are not removed.
    """
    for n in range(1, max_objects + 1):
        pairs = [(a, b) for a in range(n) for b in range(n)]
        counts = [range(max_parallel) if a == b else range(max_parallel + 1) for a, b in pairs]
        for extra in product(*counts):
            arrows = [(a, a) for a in range(n)]
            for (a, b), k in zip(pairs, extra):
                arrows += [(a, b)] * k
            yield from _composition_tables(n, arrows)


def _composition_tables(n, arrows):
    hom = {}
    for f, arrow in enumerate(arrows):
        hom.setdefault(arrow, []).append(f)
    table = {}
    for f, (a, b) in enumerate(arrows):
        table[(b, f)] = f
        table[(f, a)] = f
    open_pairs = [
        (g, f) for g in range(n, len(arrows)) for f in range(n, len(arrows))
        if arrows[f][1] == arrows[g][0]
    ]
    if any((arrows[f][0], arrows[g][1]) not in hom for g, f in open_pairs):
        return

    def associative():
        for (g, f), gf in list(table.items()):
            for h in range(len(arrows)):
                if arrows[h][0] != arrows[g][1]:
                    continue
                hg = table.get((h, g))
                left, right = table.get((h, gf)), None if hg is None else table.get((hg, f))
                if left is not None and right is not None and left != right:
                    return False
        return True

    def assign(k):
        if k == len(open_pairs):
            yield FiniteCategory(n, arrows, dict(table))
            return
        g, f = open_pairs[k]
        for h in hom[(arrows[f][0], arrows[g][1])]:
            table[(g, f)] = h
            if associative():
                yield from assign(k + 1)
        del table[(g, f)]

    yield from assign(0)
