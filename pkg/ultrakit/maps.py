from __future__ import annotations

from dataclasses import dataclass
from math import gcd

from .enums import IndexKind
from .exceptions import CarrierMismatch, QueryOutsideAlgebra, UnsupportedEncoding
from .upset import UPSet, lcm, upset_union


@dataclass(frozen=True)
class IndexSet:
    """Either Fin(size) or ℕ (size None)."""
    kind: IndexKind
    size: int = None

    @classmethod
    def fin(cls, n):
        if n < 0:
            raise ValueError("Fin(n) needs n >= 0")
        return cls(IndexKind.FIN, n)

    @classmethod
    def nat(cls):
        return cls(IndexKind.NAT, None)

    @property
    def is_finite(self):
        return self.kind == IndexKind.FIN

    def full(self):
        return UPSet.below(self.size) if self.is_finite else UPSet.full()

    def points(self):
        if not self.is_finite:
            raise ValueError("ℕ has no point list")
        return range(self.size)

    def __contains__(self, point):
        if not isinstance(point, int) or point < 0:
            return False
        return not self.is_finite or point < self.size

    def as_query(self, q):
        """Coerce a query into the queryable subalgebra of this index set."""
        if isinstance(q, UPSet):
            return q & self.full() if self.is_finite else q
        if self.is_finite:
            try:
                return UPSet.finite(n for n in q if n in self)
            except TypeError:
                pass
        raise QueryOutsideAlgebra(f"{q!r} is not a queryable subset of {self}")

    def to_text(self):
        return f"fin({self.size})" if self.is_finite else "nat"

    def __str__(self):
        return "Fin({})".format(self.size) if self.is_finite else "ℕ"


@dataclass(frozen=True)
class UPFamily:
    """
    A function out of an index set with finitely many values and
    ultimately periodic level sets. ``level_sets[i]`` is where the
    family takes ``values[i]``.
    """
    index: IndexSet
    values: tuple
    level_sets: tuple

    def __post_init__(self):
        if len(self.values) != len(self.level_sets):
            raise ValueError("one level set per value")
        if len(set(self.values)) != len(self.values):
            raise ValueError("values must be distinct")
        full = self.index.full()
        covered = UPSet.empty()
        for level in self.level_sets:
            if not level.is_subset(full):
                raise CarrierMismatch(f"level set {level} escapes {self.index}")
            if not (covered & level).is_empty():
                raise ValueError("level sets must be disjoint")
            covered = covered | level
        if covered != full:
            raise ValueError("level sets must cover the index set")

    @classmethod
    def build(cls, index, pieces):
        """Build from (value, UPSet) pairs, merging repeated values and dropping empty pieces."""
        merged = {}
        for value, level in pieces:
            level = index.as_query(level)
            if level.is_empty():
                continue
            merged[value] = merged[value] | level if value in merged else level
        return cls(index, tuple(merged), tuple(merged.values()))

    @classmethod
    def constant(cls, index, value):
        return cls.build(index, [(value, index.full())])

    @classmethod
    def from_list(cls, values):
        return cls.build(IndexSet.fin(len(values)), [(v, UPSet.finite([i])) for i, v in enumerate(values)])

    @classmethod
    def from_function(cls, index, function, prefix_length=0, period=1):
        """Sample ``function`` on the index set; on ℕ it must be periodic past ``prefix_length``."""
        if index.is_finite:
            return cls.from_list([function(i) for i in index.points()])
        seen = []
        for n in range(prefix_length + period):
            value = function(n)
            if value not in seen:
                seen.append(value)
        return cls.build(index, [
            (value, UPSet.from_predicate(lambda n, v=value: function(n) == v, prefix_length, period))
            for value in seen
        ])

    @classmethod
    def alternating(cls, values):
        """ℕ-family cycling through ``values``."""
        values = tuple(values)
        return cls.from_function(IndexSet.nat(), lambda n: values[n % len(values)], 0, len(values))

    def __call__(self, point):
        for value, level in zip(self.values, self.level_sets):
            if point in level:
                return value
        raise CarrierMismatch(f"{point} is not in {self.index}")

    def level_set(self, value):
        for v, level in zip(self.values, self.level_sets):
            if v == value:
                return level
        return UPSet.empty()

    def items(self):
        return zip(self.values, self.level_sets)

    def shape(self):
        """(prefix bound, common period) valid for every level set."""
        length = max((len(level.prefix) for level in self.level_sets), default=0)
        period = 1
        for level in self.level_sets:
            period = lcm(period, len(level.period))
        return length, period

    def map_values(self, function):
        return UPFamily.build(self.index, [(function(v), level) for v, level in self.items()])

    def where(self, predicate):
        return upset_union(level for v, level in self.items() if predicate(v))

    def agreement(self, other):
        """The set of indices where both families take the same value."""
        if self.index != other.index:
            raise CarrierMismatch("families live on different index sets")
        return upset_union(
            level & other.level_set(v) for v, level in self.items()
        )

    def pair(self, other):
        if self.index != other.index:
            raise CarrierMismatch("families live on different index sets")
        return UPFamily.build(self.index, [
            ((v, w), level & other_level)
            for v, level in self.items()
            for w, other_level in other.items()
        ])

    def as_map(self, codomain):
        if self.index.is_finite:
            return TableMap(self.index, codomain, tuple(self(i) for i in self.index.points()))
        return StepMap(self.index, codomain, self)

    def to_text(self, value_text=str):
        return "family({};{})".format(
            self.index.to_text(),
            "|".join(f"{value_text(v)}={level.to_text()}" for v, level in self.items()),
        )


class UPMap:
    """A map between index sets along which UPSets pull back to UPSets."""
    domain: IndexSet
    codomain: IndexSet

    def __call__(self, point):
        raise NotImplementedError

    def preimage(self, q):
        raise NotImplementedError

    def is_injective(self):
        raise NotImplementedError

    def is_identity(self):
        return False


@dataclass(frozen=True)
class TableMap(UPMap):
    """A map out of Fin(n) given by its list of images."""
    domain: IndexSet
    codomain: IndexSet
    values: tuple

    def __post_init__(self):
        if not self.domain.is_finite or len(self.values) != self.domain.size:
            raise CarrierMismatch("table maps need a Fin domain and one image per point")
        for v in self.values:
            if v not in self.codomain:
                raise CarrierMismatch(f"image {v} is not in {self.codomain}")

    @classmethod
    def identity(cls, n):
        return cls(IndexSet.fin(n), IndexSet.fin(n), tuple(range(n)))

    @classmethod
    def constant(cls, n, codomain, value):
        return cls(IndexSet.fin(n), codomain, (value,) * n)

    def __call__(self, point):
        return self.values[point]

    def preimage(self, q):
        q = self.codomain.as_query(q)
        return UPSet.finite(i for i, v in enumerate(self.values) if v in q)

    def is_injective(self):
        return len(set(self.values)) == len(self.values)

    def is_identity(self):
        return self.domain == self.codomain and self.values == tuple(range(self.domain.size))

    def to_text(self):
        return "table({};{})".format(self.codomain.to_text(), ",".join(map(str, self.values)))


@dataclass(frozen=True)
class StepMap(UPMap):
    """A map out of ℕ with finitely many values and UPSet level sets."""
    domain: IndexSet
    codomain: IndexSet
    family: UPFamily

    def __post_init__(self):
        if self.domain.is_finite or self.family.index != self.domain:
            raise CarrierMismatch("step maps are maps out of ℕ")
        for v in self.family.values:
            if v not in self.codomain:
                raise CarrierMismatch(f"image {v} is not in {self.codomain}")

    @classmethod
    def partition(cls, parts):
        """ℕ -> Fin(len(parts)) sending parts[j] to j."""
        return cls(IndexSet.nat(), IndexSet.fin(len(parts)),
                   UPFamily.build(IndexSet.nat(), list(enumerate(parts))))

    @classmethod
    def residue_classes(cls, modulus):
        return cls.partition([UPSet.residue(modulus, r) for r in range(modulus)])

    def __call__(self, point):
        return self.family(point)

    def preimage(self, q):
        q = self.codomain.as_query(q)
        return self.family.where(lambda v: v in q)

    def is_injective(self):
        return False

    def to_text(self):
        return "step({};{})".format(
            self.codomain.to_text(),
            "|".join(f"{v}={level.to_text()}" for v, level in self.family.items()),
        )


def _reduce_pieces(modulus, pieces):
    for d in range(1, modulus + 1):
        if modulus % d:
            continue
        e = modulus // d
        candidate = []
        for r in range(d):
            a, b = pieces[r]
            if a % e:
                break
            candidate.append((a // e, b))
        else:
            if all(pieces[r] == (candidate[r % d][0] * e, candidate[r % d][0] * (r // d) + candidate[r % d][1])
                   for r in range(modulus)):
                return d, tuple(candidate)
    return modulus, tuple(pieces)


@dataclass(frozen=True)
class ResidueMap(UPMap):
    """
    ℕ -> ℕ, k = c·j + i  |->  a_i·j + b_i.

    Affine maps are the modulus-1 case and k |-> k // d is the case
    with d equal pieces (1, 0). Pieces are stored reduced to the
    smallest modulus describing the same map.
    """
    modulus: int
    pieces: tuple
    domain: IndexSet = IndexSet.nat()
    codomain: IndexSet = IndexSet.nat()

    def __post_init__(self):
        if self.modulus < 1 or len(self.pieces) != self.modulus:
            raise ValueError("one piece per residue")
        pieces = tuple((int(a), int(b)) for a, b in self.pieces)
        if any(a < 0 or b < 0 for a, b in pieces):
            raise ValueError("pieces must have nonnegative coefficients")
        modulus, pieces = _reduce_pieces(self.modulus, pieces)
        object.__setattr__(self, "modulus", modulus)
        object.__setattr__(self, "pieces", pieces)

    @classmethod
    def affine(cls, a, b=0):
        return cls(1, ((a, b),))

    @classmethod
    def identity(cls):
        return cls.affine(1, 0)

    @classmethod
    def floor_div(cls, d):
        return cls(d, ((1, 0),) * d)

    @classmethod
    def fit(cls, function, modulus, checks=3):
        """Recover a residue map from samples of a function known to be residue-affine."""
        pieces = []
        for i in range(modulus):
            b = function(i)
            pieces.append((function(modulus + i) - b, b))
        try:
            fitted = cls(modulus, tuple(pieces))
        except ValueError:
            raise UnsupportedEncoding("function is not residue-affine with nonnegative pieces")
        for k in range(modulus * (checks + 2)):
            if fitted(k) != function(k):
                raise UnsupportedEncoding(f"function is not residue-affine modulo {modulus}")
        return fitted

    def __call__(self, point):
        j, i = divmod(point, self.modulus)
        a, b = self.pieces[i]
        return a * j + b

    def preimage(self, q):
        q = self.codomain.as_query(q)
        length, period = len(q.prefix), len(q.period)
        start = 0
        for a, b in self.pieces:
            if a > 0 and length > b:
                start = max(start, -(-(length - b) // a))
        return UPSet.from_predicate(lambda k: self(k) in q, self.modulus * (start + 1), self.modulus * period)

    def image(self, s=None):
        s = UPSet.full() if s is None else s
        step = 1
        for a, _ in self.pieces:
            if a > 0:
                step = lcm(step, a)
        first = -(-len(s.prefix) // self.modulus)
        length = 1 + max(b + a * first for a, b in self.pieces)
        period = step * self.modulus * len(s.period)

        def hit(y):
            for i, (a, b) in enumerate(self.pieces):
                if a == 0:
                    if y == b and not (s & UPSet.residue(self.modulus, i)).is_empty():
                        return True
                elif y >= b and (y - b) % a == 0 and self.modulus * ((y - b) // a) + i in s:
                    return True
            return False

        return UPSet.from_predicate(hit, length, period)

    def is_injective(self):
        if any(a == 0 for a, _ in self.pieces):
            return False
        for i, (a, b) in enumerate(self.pieces):
            for a2, b2 in self.pieces[i + 1:]:
                if (b - b2) % gcd(a, a2) == 0:
                    return False
        return True

    def is_identity(self):
        return self.modulus == 1 and self.pieces == ((1, 0),)

    def limit_offset(self, offset):
        """
        Where k! + offset lands for large k: ("point", b) if the relevant
        piece is constant, otherwise ("shift", b) meaning the image is
        (something divisible by every p eventually) + b.
        """
        r = offset % self.modulus
        a, b = self.pieces[r]
        if a == 0:
            return "point", b
        return "shift", a * (offset // self.modulus) + b

    def to_text(self):
        if self.modulus == 1:
            a, b = self.pieces[0]
            return f"affine({a},{b})"
        return "residue({};{})".format(self.modulus, ";".join(f"{a},{b}" for a, b in self.pieces))


def _compose_residue(g, f):
    c, c2 = f.modulus, g.modulus
    pieces = []
    for r in range(c * c2):
        i, j0 = r % c, r // c
        a, b = f.pieces[i]
        y = a * j0 + b
        a2, b2 = g.pieces[y % c2]
        pieces.append((a2 * a, a2 * (y // c2) + b2))
    return ResidueMap(c * c2, tuple(pieces))


def compose(g, f):
    """g ∘ f."""
    if f.codomain != g.domain:
        raise CarrierMismatch(f"cannot compose: {f.codomain} != {g.domain}")
    if isinstance(f, TableMap):
        return TableMap(f.domain, g.codomain, tuple(g(v) for v in f.values))
    if isinstance(f, StepMap):
        return StepMap(f.domain, g.codomain, f.family.map_values(g))
    if isinstance(g, ResidueMap):
        return _compose_residue(g, f)
    if isinstance(g, StepMap):
        return StepMap(f.domain, g.codomain, UPFamily.build(
            f.domain, [(v, f.preimage(level)) for v, level in g.family.items()]
        ))
    raise CarrierMismatch(f"cannot compose {type(g).__name__} after {type(f).__name__}")


def identity_map(index):
    return TableMap.identity(index.size) if index.is_finite else ResidueMap.identity()


def constant_map(domain, codomain, value):
    if domain.is_finite:
        return TableMap.constant(domain.size, codomain, value)
    return StepMap(domain, codomain, UPFamily.constant(domain, value))


def reindex_family(family, f):
    """The family family ∘ f, indexed by f's domain."""
    if f.codomain != family.index:
        raise CarrierMismatch(f"cannot reindex a family over {family.index} along a map into {f.codomain}")
    return UPFamily.build(f.domain, [(v, f.preimage(level)) for v, level in family.items()])
