from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from . import constants
from .enums import IsoVerdict, SumKind
from .exceptions import CarrierMismatch, NotAnUltrafilterMap, UnsupportedEncoding, UnsupportedUltrafilter
from .maps import (
    IndexSet, ResidueMap, StepMap, TableMap, UPFamily, UPMap, compose, reindex_family
)
from .upset import UPSet, lcm, probe_sets


@dataclass(frozen=True)
class NormalForm:
    """
    Exact description of an ultrafilter value in the decidable fragment:
    principal at ``point`` or, on ℕ, the factorial ultrafilter shifted by
    ``shift`` (Q is large iff k! + shift ∈ Q for all large k).
    """
    carrier: IndexSet
    point: int = None
    shift: int = None

    @property
    def is_principal(self):
        return self.point is not None

    def large(self, q):
        q = self.carrier.as_query(q)
        if self.is_principal:
            return self.point in q
        return q.contains_eventually(self.shift)


def _push_normal(nf, f):
    if nf.is_principal:
        return NormalForm(f.codomain, point=f(nf.point))
    if isinstance(f, StepMap):
        for value, level in f.family.items():
            if level.contains_eventually(nf.shift):
                return NormalForm(f.codomain, point=value)
    if isinstance(f, ResidueMap):
        kind, value = f.limit_offset(nf.shift)
        if kind == "point":
            return NormalForm(f.codomain, point=value)
        return NormalForm(f.codomain, shift=value)
    raise UnsupportedUltrafilter(f"no normal form for a pushforward along {type(f).__name__}")


class UltrafilterValue:
    """Base of the ultrafilter expression tree. Every node answers largeness queries."""

    @property
    def carrier(self):
        raise NotImplementedError

    def large(self, q):
        raise NotImplementedError

    def normal_form(self):
        raise NotImplementedError

    def is_principal(self):
        try:
            return self.normal_form().is_principal
        except UnsupportedUltrafilter:
            return False

    def principal_point(self):
        nf = self.normal_form()
        return nf.point if nf.is_principal else None

    def to_text(self):
        raise NotImplementedError

    def __str__(self):
        return self.to_text()


@dataclass(frozen=True)
class Principal(UltrafilterValue):
    index: IndexSet
    point: int

    def __post_init__(self):
        if self.point not in self.index:
            raise CarrierMismatch(f"{self.point} is not a point of {self.index}")

    @property
    def carrier(self):
        return self.index

    def large(self, q):
        return self.point in self.index.as_query(q)

    def normal_form(self):
        return NormalForm(self.index, point=self.point)

    def to_text(self):
        return f"principal({self.index.to_text()},{self.point})"


@dataclass(frozen=True)
class FactorialUF(UltrafilterValue):
    """Q is large iff k! ∈ Q for all sufficiently large k."""

    @property
    def carrier(self):
        return IndexSet.nat()

    def large(self, q):
        # k! is divisible by the period once k reaches it.
        return IndexSet.nat().as_query(q).contains_eventually(0)

    def normal_form(self):
        return NormalForm(IndexSet.nat(), shift=0)

    def to_text(self):
        return "factorial"


@dataclass(frozen=True)
class Pushforward(UltrafilterValue):
    base: UltrafilterValue
    map: UPMap

    def __post_init__(self):
        if self.map.domain != self.base.carrier:
            raise CarrierMismatch(f"map out of {self.map.domain} applied to an ultrafilter on {self.base.carrier}")

    @property
    def carrier(self):
        return self.map.codomain

    def large(self, q):
        return self.base.large(self.map.preimage(q))

    def normal_form(self):
        return _push_normal(self.base.normal_form(), self.map)

    def to_text(self):
        return f"push({self.base.to_text()},{self.map.to_text()})"


@dataclass(frozen=True)
class SumEncoding:
    """
    How the tagged sum Σ_{s:S} T_s is laid out as an index set.

    FIN_FIN   base Fin(n), fibers Fin(m_s); (s, t) -> m_0 + ... + m_{s-1} + t
    NAT_FIN   base ℕ, fibers Fin(m);       (s, t) -> s·m + t
    FIN_NAT   base Fin(n), fibers ℕ;       (s, t) -> t·n + s
    GRAPH     base ℕ, fibers ℕ, only the graph of a section s -> σ(s) is
              inhabited; (s, σ(s)) -> s
    """
    kind: SumKind
    base: IndexSet
    sizes: tuple = ()
    section: UPMap = None

    @classmethod
    def choose(cls, base, fiber_carriers):
        """Pick the encoding for a base index set and the carriers of its fibers (one per base point on Fin)."""
        fiber_carriers = tuple(fiber_carriers)
        if base.is_finite:
            if all(c.is_finite for c in fiber_carriers):
                return cls(SumKind.FIN_FIN, base, tuple(c.size for c in fiber_carriers))
            if all(not c.is_finite for c in fiber_carriers):
                return cls(SumKind.FIN_NAT, base)
            raise UnsupportedEncoding("a Fin-indexed sum must have all fibers finite or all fibers ℕ")
        kinds = set(fiber_carriers)
        if len(kinds) == 1 and fiber_carriers[0].is_finite and fiber_carriers[0].size > 0:
            return cls(SumKind.NAT_FIN, base, (fiber_carriers[0].size,))
        raise UnsupportedEncoding("an ℕ-indexed sum needs a common nonempty Fin fiber or a principal section")

    @classmethod
    def graph(cls, section):
        if section.domain != IndexSet.nat() or section.codomain != IndexSet.nat():
            raise UnsupportedEncoding("graph sums need a section ℕ -> ℕ")
        return cls(SumKind.GRAPH, IndexSet.nat(), (), section)

    @property
    def width(self):
        """Multiplier of the lexicographic layout (1 for offsets and graphs)."""
        if self.kind == SumKind.NAT_FIN:
            return self.sizes[0]
        if self.kind == SumKind.FIN_NAT:
            return self.base.size
        return 1

    @property
    def carrier(self):
        if self.kind == SumKind.FIN_FIN:
            return IndexSet.fin(sum(self.sizes))
        return IndexSet.nat()

    def fiber(self, s):
        if self.kind == SumKind.FIN_FIN:
            return IndexSet.fin(self.sizes[s])
        if self.kind == SumKind.NAT_FIN:
            return IndexSet.fin(self.sizes[0])
        return IndexSet.nat()

    def encode(self, s, t):
        if s not in self.base or t not in self.fiber(s):
            raise CarrierMismatch(f"({s}, {t}) is not in the sum")
        if self.kind == SumKind.FIN_FIN:
            return sum(self.sizes[:s]) + t
        if self.kind == SumKind.NAT_FIN:
            return s * self.sizes[0] + t
        if self.kind == SumKind.FIN_NAT:
            return t * self.base.size + s
        if t != self.section(s):
            raise CarrierMismatch(f"({s}, {t}) is off the graph")
        return s

    def decode(self, k):
        if k not in self.carrier:
            raise CarrierMismatch(f"{k} is not in {self.carrier}")
        if self.kind == SumKind.FIN_FIN:
            for s, size in enumerate(self.sizes):
                if k < size:
                    return s, k
                k -= size
        if self.kind == SumKind.NAT_FIN:
            return divmod(k, self.sizes[0])
        if self.kind == SumKind.FIN_NAT:
            t, s = divmod(k, self.base.size)
            return s, t
        return k, self.section(k)

    def section_of(self, q, s):
        """{t : (s, t) ∈ q} as a query on the fiber over s."""
        if self.kind == SumKind.FIN_FIN:
            offset = sum(self.sizes[:s])
            return UPSet.finite(t for t in range(self.sizes[s]) if offset + t in q)
        if self.kind == SumKind.NAT_FIN:
            m = self.sizes[0]
            return UPSet.finite(t for t in range(m) if s * m + t in q)
        if self.kind == SumKind.FIN_NAT:
            n = self.base.size
            return UPSet.from_predicate(lambda t: t * n + s in q, len(q.prefix) // n + 1, len(q.period))
        return UPSet.finite([self.section(s)]) if s in q else UPSet.empty()

    def base_projection(self):
        if self.kind == SumKind.FIN_FIN:
            return TableMap(self.carrier, self.base, tuple(s for s, size in enumerate(self.sizes) for _ in range(size)))
        if self.kind == SumKind.NAT_FIN:
            return ResidueMap.floor_div(self.sizes[0])
        if self.kind == SumKind.FIN_NAT:
            return StepMap.residue_classes(self.base.size)
        return ResidueMap.identity()

    def fiber_projection(self):
        """Second projection onto the common fiber."""
        if self.kind == SumKind.FIN_FIN:
            if len(set(self.sizes)) > 1:
                raise UnsupportedEncoding("fibers differ, there is no common second projection")
            m = self.sizes[0] if self.sizes else 0
            return TableMap(self.carrier, IndexSet.fin(m), tuple(t for _ in self.sizes for t in range(m)))
        if self.kind == SumKind.NAT_FIN:
            return StepMap.residue_classes(self.sizes[0])
        if self.kind == SumKind.FIN_NAT:
            return ResidueMap.floor_div(self.base.size)
        return self.section

    def inclusion(self, s):
        """T_s -> Σ, t |-> (s, t)."""
        if self.kind == SumKind.FIN_NAT:
            return ResidueMap.affine(self.base.size, s)
        if self.kind == SumKind.GRAPH:
            raise UnsupportedEncoding("a graph sum has no total fiber inclusion")
        fiber = self.fiber(s)
        return TableMap(fiber, self.carrier, tuple(self.encode(s, t) for t in fiber.points()))


@dataclass(frozen=True)
class Sum(UltrafilterValue):
    """Σ_{s:base} ν_s; ``family`` holds the ν_s, or ``encoding.section`` for graph sums."""
    base: UltrafilterValue
    family: UPFamily
    encoding: SumEncoding

    @property
    def carrier(self):
        return self.encoding.carrier

    def fiber_value(self, s):
        if self.encoding.kind == SumKind.GRAPH:
            return Principal(IndexSet.nat(), self.encoding.section(s))
        return self.family(s)

    def good_bases(self, q):
        """{s : q_s is ν_s-large}."""
        q = self.carrier.as_query(q)
        enc = self.encoding
        base = self.base.carrier
        if enc.kind == SumKind.GRAPH:
            return q
        if base.is_finite:
            return UPSet.finite(s for s in base.points() if self.fiber_value(s).large(enc.section_of(q, s)))
        length, period = self.family.shape()
        length = max(length, len(q.prefix) // enc.width + 1)
        period = lcm(period, len(q.period))
        return UPSet.from_predicate(lambda s: self.fiber_value(s).large(enc.section_of(q, s)), length, period)

    def large(self, q):
        return self.base.large(self.good_bases(q))

    def normal_form(self):
        enc = self.encoding
        base = self.base.normal_form()
        if base.is_principal:
            if enc.kind == SumKind.GRAPH:
                return NormalForm(enc.carrier, point=base.point)
            inner = self.fiber_value(base.point).normal_form()
            return _push_normal(inner, enc.inclusion(base.point))
        if enc.kind == SumKind.GRAPH:
            return NormalForm(enc.carrier, shift=base.shift)
        # ℕ over Fin(m): the fiber points stabilise along k! + shift.
        points = self.family.map_values(lambda nu: nu.normal_form().point)
        for t, level in points.items():
            if level.contains_eventually(base.shift):
                return NormalForm(enc.carrier, shift=base.shift * enc.width + t)
        raise UnsupportedUltrafilter("no limiting fiber point")

    def to_text(self):
        if self.encoding.kind == SumKind.GRAPH:
            return f"sum({self.base.to_text()},section({self.encoding.section.to_text()}))"
        if self.base.carrier.is_finite:
            return "sum({},[{}])".format(
                self.base.to_text(),
                ",".join(self.family(s).to_text() for s in self.base.carrier.points()),
            )
        return f"sum({self.base.to_text()},{self.family.to_text(lambda nu: nu.to_text())})"


def star():
    """The unique ultrafilter on the one-point set."""
    return Principal(IndexSet.fin(1), 0)


def principal(index, point):
    return Principal(index, point)


def factorial():
    return FactorialUF()


def from_normal_form(nf):
    if nf.is_principal:
        return Principal(nf.carrier, nf.point)
    if nf.shift == 0:
        return FactorialUF()
    return Pushforward(FactorialUF(), ResidueMap.affine(1, nf.shift))


# Operations


def uf_large(mu, q):
    return mu.large(q)


def uf_forall(mu, phi):
    """Whether phi holds for mu-all points."""
    return mu.large(phi)


def uf_pushforward(mu, f):
    if f.domain != mu.carrier:
        raise CarrierMismatch(f"map out of {f.domain} applied to an ultrafilter on {mu.carrier}")
    if f.is_identity():
        return mu
    pushed = Pushforward(mu, f)
    try:
        nf = pushed.normal_form()
    except UnsupportedUltrafilter:
        return pushed
    return Principal(nf.carrier, nf.point) if nf.is_principal else pushed


def as_family(mu, nus):
    if isinstance(nus, UPFamily):
        if nus.index != mu.carrier:
            raise CarrierMismatch(f"family over {nus.index} for an ultrafilter on {mu.carrier}")
        return nus
    if isinstance(nus, UPMap):
        if nus.domain != mu.carrier:
            raise CarrierMismatch(f"section out of {nus.domain} for an ultrafilter on {mu.carrier}")
        if isinstance(nus, TableMap):
            return UPFamily.from_list([Principal(nus.codomain, v) for v in nus.values])
        if isinstance(nus, StepMap):
            return nus.family.map_values(lambda v: Principal(nus.codomain, v))
    raise CarrierMismatch(f"cannot read {nus!r} as a family of ultrafilters")


def encoding_for(mu, nus):
    """The sum encoding uf_sum uses for mu and nus."""
    if isinstance(nus, ResidueMap):
        if mu.carrier != IndexSet.nat():
            raise CarrierMismatch("graph sums need an ultrafilter on ℕ")
        return SumEncoding.graph(nus)
    family = as_family(mu, nus)
    if mu.carrier.is_finite:
        return SumEncoding.choose(mu.carrier, [family(s).carrier for s in mu.carrier.points()])
    carriers = [nu.carrier for nu in family.values]
    if len(set(carriers)) == 1 and not carriers[0].is_finite:
        points = {nu.principal_point() for nu in family.values}
        if len(points) == 1 and None not in points:
            return SumEncoding.graph(ResidueMap.affine(0, points.pop()))
    return SumEncoding.choose(mu.carrier, carriers)


def uf_sum(mu, nus):
    """
    Σ_{s:mu} ν_s. ``nus`` is a UPFamily of ultrafilter values indexed by
    mu's carrier, or a map s |-> point read as the family of principal
    ultrafilters at its values (a residue map ℕ -> ℕ gives a graph sum).
    """
    encoding = encoding_for(mu, nus)
    family = None if encoding.kind == SumKind.GRAPH else as_family(mu, nus)
    value = Sum(mu, family, encoding)
    try:
        nf = value.normal_form()
    except UnsupportedUltrafilter:
        return value
    return Principal(nf.carrier, nf.point) if nf.is_principal else value


def constant_family(mu, nu):
    if mu.carrier.is_finite:
        return UPFamily.from_list([nu] * mu.carrier.size)
    return UPFamily.constant(mu.carrier, nu)


def tensor(mu, nu):
    """mu ⊗ nu, the sum of the constant family nu."""
    return uf_sum(mu, constant_family(mu, nu))


def uf_limit(mu, nus):
    """∫_{s:mu} ν_s, the pushforward of the sum along the second projection."""
    if isinstance(nus, UPFamily):
        family = as_family(mu, nus)
        if len({nu.carrier for nu in family.values}) > 1:
            raise CarrierMismatch("an ultralimit needs all ν_s on one carrier")
        if len(family.values) == 1:
            return family.values[0]
    encoding = encoding_for(mu, nus)
    return uf_pushforward(uf_sum(mu, nus), encoding.fiber_projection())


def uf_equal(mu, nu):
    """Exact equality of largeness oracles via normal forms."""
    return mu.carrier == nu.carrier and mu.normal_form() == nu.normal_form()


def uf_arrow_check(f, mu, nu):
    """Whether f is an arrow mu -> nu of ultrafilters, i.e. f_*(mu) = nu."""
    if f.domain != mu.carrier or f.codomain != nu.carrier:
        raise CarrierMismatch(f"map {f.domain} -> {f.codomain} between ultrafilters on {mu.carrier} and {nu.carrier}")
    try:
        return uf_equal(Pushforward(mu, f), nu)
    except UnsupportedUltrafilter:
        return agree_on_probes(Pushforward(mu, f), nu)


def require_arrow(f, mu, nu):
    if not uf_arrow_check(f, mu, nu):
        raise NotAnUltrafilterMap(f"{f.to_text()} does not carry {mu} to {nu}")


def default_probes(carrier, max_prefix=constants.PROBE_PREFIX, max_period=constants.PROBE_PERIOD):
    """The fixed probe family of queries on a carrier."""
    if carrier.is_finite:
        return [UPSet.finite(p for p, bit in zip(carrier.points(), bits) if bit)
                for bits in product((0, 1), repeat=carrier.size)]
    return probe_sets(max_prefix, max_period)


def agree_on_probes(mu, nu, probes=None):
    if mu.carrier != nu.carrier:
        return False
    probes = default_probes(mu.carrier) if probes is None else probes
    return all(mu.large(q) == nu.large(q) for q in probes)


@dataclass(frozen=True)
class Bijection:
    """A bijection between large sets; ``offset`` shifts, ``table`` lists pairs."""
    source: UPSet
    target: UPSet
    offset: int = None
    table: tuple = ()

    def __call__(self, point):
        if point not in self.source:
            raise CarrierMismatch(f"{point} is outside the domain of the bijection")
        if self.offset is not None:
            return point + self.offset
        return dict(self.table)[point]

    def image(self, q):
        q = q & self.source
        if self.offset is not None:
            return q.shifted(self.offset)
        return UPSet.finite(b for a, b in self.table if a in q)

    def to_text(self):
        if self.offset is not None:
            return f"k -> k{self.offset:+d} on {self.source.to_text()}"
        return ", ".join(f"{a}<->{b}" for a, b in self.table)


@dataclass(frozen=True)
class IsoResult:
    verdict: IsoVerdict
    witness: Bijection = None
    reason: str = ""

    def __bool__(self):
        return self.verdict is IsoVerdict.ISOMORPHIC


def uf_iso(mu, nu):
    """Three-valued isomorphism test between two ultrafilter values."""
    try:
        left, right = mu.normal_form(), nu.normal_form()
    except UnsupportedUltrafilter as exc:
        return IsoResult(IsoVerdict.UNKNOWN, reason=str(exc))
    if left.is_principal and right.is_principal:
        return IsoResult(IsoVerdict.ISOMORPHIC, Bijection(
            UPSet.finite([left.point]), UPSet.finite([right.point]), table=((left.point, right.point),)
        ))
    if left.is_principal != right.is_principal:
        return IsoResult(IsoVerdict.NOT_ISOMORPHIC, reason="principality")
    return IsoResult(IsoVerdict.ISOMORPHIC, Bijection(
        UPSet.at_least(left.shift), UPSet.at_least(right.shift), offset=right.shift - left.shift
    ))


def iso_witness_holds(result, mu, nu, sets):
    """Check that the witness identifies the restrictions on the given queries."""
    if not result:
        return False
    bijection = result.witness
    if not (mu.large(bijection.source) and nu.large(bijection.target)):
        return False
    return all(mu.large(q & bijection.source) == nu.large(bijection.image(q)) for q in sets)


# Laws


def lattice_law_violation(mu, a, b):
    """The first failing lattice-homomorphism law on (a, b), or None."""
    large = mu.large
    full = mu.carrier.full()
    a, b = mu.carrier.as_query(a), mu.carrier.as_query(b)
    if large(UPSet.empty()):
        return "empty set is large"
    if not large(full):
        return "full set is not large"
    if large(a) and (a.is_subset(b) and not large(b) or not large(a | b)):
        return "not upward closed"
    if large(a) and large(b) and not large(a & b):
        return "not closed under intersection"
    if large(a | b) and not (large(a) or large(b)):
        return "large union with no large part"
    if large(a) == large(full - a):
        return "not autodual"
    return None


def product_set(encoding, a, b):
    """{(s, t) : s ∈ a, t ∈ b} in the carrier of a sum."""
    carrier = encoding.carrier
    if encoding.kind is SumKind.GRAPH:
        return a & encoding.section.preimage(b)

    def member(k):
        s, t = encoding.decode(k)
        return s in a and t in b

    if carrier.is_finite:
        return UPSet.finite(k for k in carrier.points() if member(k))
    width = encoding.width
    length = (len(a.prefix) + len(b.prefix) + 1) * width + 1
    return UPSet.from_predicate(member, length, lcm(len(a.period), len(b.period)) * width)


def product_filter_check(mu, nu, pairs):
    """
    mu ⊗ nu and nu ⊗ mu both make every product of large sets large.
    Returns the first failing pair or None.
    """
    for a, b in pairs:
        a, b = mu.carrier.as_query(a), nu.carrier.as_query(b)
        if not (mu.large(a) and nu.large(b)):
            continue
        for first, second, x, y in ((mu, nu, a, b), (nu, mu, b, a)):
            family = constant_family(first, second)
            if not tensor(first, second).large(product_set(encoding_for(first, family), x, y)):
                return a, b
    return None


def tensor_swap_search(values):
    """
    Look for mu, nu with mu ⊗ nu and nu ⊗ mu not isomorphic. Returns the
    first such pair or None; pairs whose sums are not encodable are skipped.
    """
    for mu in values:
        for nu in values:
            try:
                verdict = uf_iso(tensor(mu, nu), tensor(nu, mu)).verdict
            except UnsupportedEncoding:
                continue
            if verdict is IsoVerdict.NOT_ISOMORPHIC:
                return mu, nu
    return None


# Neutrality and associativity


def unitor_check(mu):
    """mu ⊗ ⋆ ≅ mu ≅ ⋆ ⊗ mu through the identity carrier bijection."""
    return uf_equal(tensor(mu, star()), mu) and uf_equal(tensor(star(), mu), mu)


def carrier_bijection(function, domain, codomain, modulus):
    """A UPMap for a carrier bijection given pointwise."""
    if domain.is_finite:
        return TableMap(domain, codomain, tuple(function(k) for k in domain.points()))
    return ResidueMap.fit(function, modulus)


@dataclass(frozen=True)
class AssociatorData:
    nested: UltrafilterValue
    flat: UltrafilterValue
    bijection: UPMap
    outer_encoding: SumEncoding
    middle_encoding: SumEncoding
    flat_encoding: SumEncoding


def sum_associator(lam, mus, nus):
    """
    Both sides of Σ_{r:λ} Σ_{s:μ_r} ν_s ≅ Σ_{s:Σμ_r} ν_s together with the
    canonical carrier bijection nested -> flat. ``nus`` is indexed by the
    carrier of Σ_{r:λ} μ_r.
    """
    middle_encoding = encoding_for(lam, mus)
    middle = uf_sum(lam, mus)
    if nus.index != middle_encoding.carrier:
        raise CarrierMismatch("ν must be indexed by the carrier of Σ μ_r")
    flat_encoding = encoding_for(middle, nus)
    flat = uf_sum(middle, nus)
    mus_family = as_family(lam, mus)

    def inner_family(r):
        return reindex_family(nus, middle_encoding.inclusion(r))

    def inner_encoding(r):
        return encoding_for(mus_family(r), inner_family(r))

    def inner_sum(r):
        return uf_sum(mus_family(r), inner_family(r))

    if lam.carrier.is_finite:
        outer_family = UPFamily.from_list([inner_sum(r) for r in lam.carrier.points()])
        inner_width = 1
        for r in lam.carrier.points():
            inner_width *= inner_encoding(r).width
    else:
        length, period = mus_family.shape()
        nus_length, nus_period = nus.shape()
        outer_family = UPFamily.from_function(
            lam.carrier, inner_sum,
            max(length, nus_length // middle_encoding.width + 1), lcm(period, nus_period),
        )
        inner_width = 1
    outer_encoding = encoding_for(lam, outer_family)
    nested = uf_sum(lam, outer_family)

    def forward(k):
        r, rest = outer_encoding.decode(k)
        s, t = inner_encoding(r).decode(rest)
        return flat_encoding.encode(middle_encoding.encode(r, s), t)

    modulus = outer_encoding.width * middle_encoding.width * flat_encoding.width * inner_width
    bijection = carrier_bijection(forward, outer_encoding.carrier, flat_encoding.carrier, modulus)
    return AssociatorData(nested, flat, bijection, outer_encoding, middle_encoding, flat_encoding)


def associativity_check(lam, mus, nus):
    data = sum_associator(lam, mus, nus)
    return uf_arrow_check(data.bijection, data.nested, data.flat)


def pushforward_functoriality_check(mu, f, g):
    """(g ∘ f)_* mu = g_* f_* mu."""
    return uf_equal(uf_pushforward(mu, compose(g, f)), uf_pushforward(uf_pushforward(mu, f), g))


def family_limit(mu, family):
    """The value a finitely-valued family takes on a mu-large set."""
    if family.index != mu.carrier:
        raise CarrierMismatch(f"family over {family.index} with an ultrafilter on {mu.carrier}")
    for value, level in family.items():
        if mu.large(level):
            return value
    raise CarrierMismatch("family has no value on a large set")
