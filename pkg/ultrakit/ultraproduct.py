from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from . import constants
from .exceptions import CarrierMismatch, EmptyLargeFiber, UnsupportedEncoding
from .maps import IndexSet, ResidueMap, TableMap, UPFamily, reindex_family
from .enums import SumKind
from .ultrafilter import as_family, encoding_for, family_limit, require_arrow, star, uf_sum
from .upset import UPSet, lcm, upset_intersection, upset_union


@dataclass(frozen=True)
class BoundedFamily:
    """
    A family of subsets A_s ⊆ Fin(bound) indexed by an index set, stored
    as ``fiber_sets[j] = {s : j ∈ A_s}``.
    """
    index: IndexSet
    bound: int
    fiber_sets: tuple

    def __post_init__(self):
        if len(self.fiber_sets) != self.bound:
            raise ValueError("one fiber set per value below the bound")
        object.__setattr__(self, "fiber_sets", tuple(self.index.as_query(q) for q in self.fiber_sets))

    @classmethod
    def constant(cls, index, bound, elements):
        elements = set(elements)
        return cls(index, bound, tuple(index.full() if j in elements else UPSet.empty() for j in range(bound)))

    @classmethod
    def from_fibers(cls, index, bound, fiber, prefix_length=0, period=1):
        """Build from a function s |-> A_s, periodic past ``prefix_length`` on ℕ."""
        if index.is_finite:
            fibers = [set(fiber(s)) for s in index.points()]
            return cls(index, bound, tuple(
                UPSet.finite(s for s, a in enumerate(fibers) if j in a) for j in range(bound)
            ))
        return cls(index, bound, tuple(
            UPSet.from_predicate(lambda s, j=j: j in fiber(s), prefix_length, period) for j in range(bound)
        ))

    def fiber(self, s):
        return frozenset(j for j, q in enumerate(self.fiber_sets) if s in q)

    def empty_set(self):
        """{s : A_s = ∅}."""
        return self.index.full() - upset_union(self.fiber_sets)

    def member_set(self, element):
        """{s : x(s) ∈ A_s}."""
        family = element.family
        if family.index != self.index:
            raise CarrierMismatch("element and family live on different index sets")
        return upset_union(
            level & self.fiber_sets[j] for j, level in family.items() if 0 <= j < self.bound
        )

    def shape(self):
        length = max((len(q.prefix) for q in self.fiber_sets), default=0)
        period = 1
        for q in self.fiber_sets:
            period = lcm(period, len(q.period))
        return length, period

    def reindex(self, f):
        """The family (A_{f(l)})_l."""
        if f.codomain != self.index:
            raise CarrierMismatch(f"cannot reindex a family over {self.index} along a map into {f.codomain}")
        return BoundedFamily(f.domain, self.bound, tuple(f.preimage(q) for q in self.fiber_sets))

    def to_text(self):
        lines = [f"bound:{self.bound}"]
        lines += [f"fiber{j}:{q.to_text()}" for j, q in enumerate(self.fiber_sets)]
        return "\n".join(lines)


@dataclass(frozen=True)
class UPElement:
    """A choice function s |-> x(s) ∈ Fin(bound), compared up to agreement on a large set."""
    family: UPFamily
    bound: int

    def __post_init__(self):
        if any(not isinstance(v, int) or not 0 <= v < self.bound for v in self.family.values):
            raise CarrierMismatch(f"element values must lie in Fin({self.bound})")

    @classmethod
    def constant(cls, index, bound, value):
        return cls(UPFamily.constant(index, value), bound)

    @classmethod
    def from_list(cls, values, bound):
        return cls(UPFamily.from_list(list(values)), bound)

    @property
    def index(self):
        return self.family.index

    def __call__(self, s):
        return self.family(s)

    def limit(self, mu):
        """The value taken on a mu-large set."""
        for value, level in self.family.items():
            if mu.large(level):
                return value
        raise CarrierMismatch("no value is taken on a large set")

    def to_text(self):
        return self.family.to_text()


def ufam_eq(x, y, mu):
    """Whether x and y agree on a mu-large set."""
    if x.index != y.index or x.bound != y.bound:
        raise CarrierMismatch("elements live on different index sets or bounds")
    if x.index != mu.carrier:
        raise CarrierMismatch(f"elements over {x.index} compared under an ultrafilter on {mu.carrier}")
    return mu.large(x.family.agreement(y.family))


@dataclass(frozen=True)
class UltraProductSet:
    """∫_{s:mu} A_s, one constant representative per class."""
    family: BoundedFamily
    mu: object
    representatives: tuple

    def __len__(self):
        return len(self.representatives)

    def __iter__(self):
        return iter(self.representatives)

    def values(self):
        return [x.limit(self.mu) for x in self.representatives]

    def contains(self, x):
        return self.mu.large(self.family.member_set(x))

    def class_of(self, x):
        """Position of the representative x is equal to."""
        if not self.contains(x):
            raise CarrierMismatch("not an element of the ultraproduct")
        value = x.limit(self.mu)
        for i, rep in enumerate(self.representatives):
            if rep.limit(self.mu) == value:
                return i
        raise CarrierMismatch("no representative for this element")


def uprod_enumerate(mu, fam):
    """
    The classes of ∫_{s:mu} A_s. Every element is equal to the constant
    family at its limit value, so the classes are the j whose fiber set
    is large.
    """
    if fam.index != mu.carrier:
        raise CarrierMismatch(f"family over {fam.index} with an ultrafilter on {mu.carrier}")
    if mu.large(fam.empty_set()):
        raise EmptyLargeFiber("the fibers are empty on a large set")
    reps = tuple(
        UPElement.constant(fam.index, fam.bound, j)
        for j, q in enumerate(fam.fiber_sets) if mu.large(q)
    )
    return UltraProductSet(fam, mu, reps)


def choice_functions(fam, prefix_length, period):
    """Every UP-representable function of shape (prefix_length, period) into Fin(bound)."""
    if fam.index.is_finite:
        for values in product(range(fam.bound), repeat=fam.index.size):
            yield UPElement.from_list(values, fam.bound)
        return
    for values in product(range(fam.bound), repeat=prefix_length + period):
        yield UPElement(UPFamily.from_function(
            fam.index,
            lambda n, values=values: values[n] if n < prefix_length else values[prefix_length + (n - prefix_length) % period],
            prefix_length, period,
        ), fam.bound)


@dataclass(frozen=True)
class SaturationReport:
    classes: int
    checked: int
    witness: UPElement = None

    @property
    def ok(self):
        return self.witness is None


def saturation_check(mu, fam, prefix_length=1, period=constants.PROBE_PERIOD):
    """
    Brute-force cross-check of uprod_enumerate: every member choice function
    of the given shape equals exactly one representative.
    """
    space = uprod_enumerate(mu, fam)
    checked = 0
    for x in choice_functions(fam, prefix_length, period):
        if not space.contains(x):
            continue
        checked += 1
        matches = [rep for rep in space if ufam_eq(x, rep, mu)]
        if len(matches) != 1:
            return SaturationReport(len(space), checked, x)
    return SaturationReport(len(space), checked)


# Quantifier exchange


def quantifier_exchange(mu, fam, psi, prefix_length=None, period=None):
    """
    Both sides of  ∀x:mu ∀a∈A_x ψ(x, a)  ⇔  ∀(a_x)∈∫A_x ∀x:mu ψ(x, a_x),
    with ψ given as the UPSets psi[j] = {x : ψ(x, j)}. The right side ranges
    over choice functions whose shape covers the shapes of A and ψ.
    """
    if len(psi) != fam.bound:
        raise ValueError("one ψ set per value below the bound")
    psi = [fam.index.as_query(q) for q in psi]
    length, step = fam.shape()
    for q in psi:
        length = max(length, len(q.prefix))
        step = lcm(step, len(q.period))
    prefix_length = length if prefix_length is None else prefix_length
    period = step if period is None else period
    full = fam.index.full()
    left = mu.large(upset_intersection(
        (full - fam.fiber_sets[j]) | psi[j] for j in range(fam.bound)
    ))
    right = True
    for x in choice_functions(fam, prefix_length, period):
        if not mu.large(fam.member_set(x)):
            continue
        holds = upset_union(level & psi[j] for j, level in x.family.items())
        if not mu.large(holds):
            right = False
            break
    return left, right


# Reindexing


def reindex(f, lam, kappa, fam, a):
    """f^#: ∫_{k:kappa} A_k -> ∫_{l:lam} A_{f(l)}, a |-> a ∘ f."""
    require_arrow(f, lam, kappa)
    if a.index != kappa.carrier or fam.index != kappa.carrier:
        raise CarrierMismatch("element and family must live on kappa's carrier")
    return UPElement(reindex_family(a.family, f), a.bound)


def diagonal(mu, value, bound):
    """A -> A^mu, the reindexing along mu -> ⋆."""
    return UPElement.constant(mu.carrier, bound, value)


# Associator and curryfication


def associator_apply(mu, nus, x):
    """
    ∫_{Σ_{s:mu} ν_s} A -> ∫_{s:mu} ∫_{t:ν_s} A. The result is the mu-family
    whose value at s is the class (limit value) of t |-> x(s, t).
    """
    encoding = encoding_for(mu, nus)
    if x.index != encoding.carrier:
        raise CarrierMismatch("element must live on the sum carrier")
    graph = encoding.kind is SumKind.GRAPH
    family = None if graph else as_family(mu, nus)

    def at(s):
        if graph:
            return x(s)
        return family_limit(family(s), reindex_family(x.family, encoding.inclusion(s)))

    if mu.carrier.is_finite:
        return UPElement(UPFamily.from_list([at(s) for s in mu.carrier.points()]), x.bound)
    length, period = x.family.shape()
    if family is not None:
        family_length, family_period = family.shape()
        length = max(family_length, length // encoding.width + 1)
        period = lcm(family_period, period)
    return UPElement(UPFamily.from_function(mu.carrier, at, length, period), x.bound)


def associator_inverse(mu, nus, y):
    """∫_{s:mu} ∫_{t:ν_s} A -> ∫_{Σ ν_s} A, constant in t."""
    encoding = encoding_for(mu, nus)
    if y.index != mu.carrier:
        raise CarrierMismatch("nested element must live on mu's carrier")
    return UPElement(reindex_family(y.family, encoding.base_projection()), y.bound)


def associator_round_trip(mu, nus, x):
    """inverse ∘ apply agrees with x on a large set of the sum."""
    total = uf_sum(mu, nus)
    back = associator_inverse(mu, nus, associator_apply(mu, nus, x))
    return total.large(back.family.agreement(x.family))


def curry(mu, nus, fam):
    """
    A family over the carrier of Σ_{s:mu} ν_s as the mu-family of families
    s |-> (t |-> A_{(s, t)}).
    """
    encoding = encoding_for(mu, nus)
    if fam.index != encoding.carrier:
        raise CarrierMismatch("family must live on the sum carrier")
    if encoding.kind is SumKind.GRAPH:
        raise UnsupportedEncoding("graph sums have no total fiber inclusion to curry along")

    def at(s):
        return fam.reindex(encoding.inclusion(s))

    if mu.carrier.is_finite:
        return UPFamily.from_list([at(s) for s in mu.carrier.points()])
    length, period = fam.shape()
    return UPFamily.from_function(mu.carrier, at, length // encoding.width + 1, period)


def uncurry(mu, nus, curried):
    encoding = encoding_for(mu, nus)
    bounds = {inner.bound for inner in curried.values}
    if len(bounds) != 1:
        raise CarrierMismatch("curried families must share a bound")
    bound = bounds.pop()
    carrier = encoding.carrier

    def member(j, k):
        s, t = encoding.decode(k)
        return t in curried(s).fiber_sets[j]

    if carrier.is_finite:
        return BoundedFamily(carrier, bound, tuple(
            UPSet.finite(k for k in carrier.points() if member(j, k)) for j in range(bound)
        ))
    length, period = curried.shape()
    inner_length = max((inner.shape()[0] for inner in curried.values), default=0)
    inner_period = 1
    for inner in curried.values:
        inner_period = lcm(inner_period, inner.shape()[1])
    width = encoding.width
    return BoundedFamily(carrier, bound, tuple(
        UPSet.from_predicate(lambda k, j=j: member(j, k),
                             (length + inner_length + 1) * width, lcm(period, inner_period) * width)
        for j in range(bound)
    ))


def curry_matches_associator(mu, nus, fam, x):
    """associator_apply(x)(s) is a class of the curried fiber ∫_{t:ν_s} A_{(s,t)} for mu-all s."""
    nested = associator_apply(mu, nus, x)
    curried = curry(mu, nus, fam)
    family = as_family(mu, nus)

    def holds(s):
        return family(s).large(curried(s).fiber_sets[nested(s)])

    if mu.carrier.is_finite:
        good = UPSet.finite(s for s in mu.carrier.points() if holds(s))
    else:
        length, period = 0, 1
        for shaped in (nested.family, curried, family):
            shape = shaped.shape()
            length, period = max(length, shape[0]), lcm(period, shape[1])
        good = UPSet.from_predicate(holds, length, period)
    return mu.large(good)


def _nested_shape(*shapes):
    """Joint (prefix length, period) in s of families read at s·w + r, given as ((length, period), w) pairs."""
    length, period = 0, 1
    for (prefix, step), width in shapes:
        length = max(length, prefix // width + 1)
        period = lcm(period, step)
    return length, period


def associator_coherence(mu, nus, lams, x):
    """
    The associativity square for a triple (mu, ν_s, λ_{s,t}): associating
    the outer sum first and the inner sum first give the same triply nested
    element for mu-all s. ``lams`` is indexed by the carrier of
    Σ_{s:mu} ν_s and ``x`` lives on the carrier of Σ_{s:mu} Σ_{t:ν_s} λ_{s,t}.
    Infinite carriers must be laid out as NAT_FIN sums.
    """
    middle = encoding_for(mu, nus)
    nus_family = as_family(mu, nus)
    flat_base = uf_sum(mu, nus)
    flat_encoding = encoding_for(flat_base, lams)
    if not flat_encoding.carrier.is_finite and (middle.kind, flat_encoding.kind) != (SumKind.NAT_FIN,) * 2:
        raise UnsupportedEncoding("the coherence square over ℕ needs finite fibers")

    def lam(s):
        return reindex_family(lams, middle.inclusion(s))

    def inner_encoding(s):
        return encoding_for(nus_family(s), lam(s))

    length, period = _nested_shape((nus_family.shape(), 1), (lams.shape(), middle.width))
    outer = UPFamily.from_function(mu.carrier, lambda s: uf_sum(nus_family(s), lam(s)), length, period)
    outer_encoding = encoding_for(mu, outer)
    if x.index != outer_encoding.carrier:
        raise CarrierMismatch("element must live on the carrier of the nested sum")

    # Outer associator first, then the inner one at each s.
    def first(s):
        inner_x = UPElement(reindex_family(x.family, outer_encoding.inclusion(s)), x.bound)
        return associator_apply(nus_family(s), lam(s), inner_x)

    # Reassociate the carrier, then the associators for Σν and for (mu, ν).
    def reassociated(k):
        j, u = flat_encoding.decode(k)
        s, t = middle.decode(j)
        return x(outer_encoding.encode(s, inner_encoding(s).encode(t, u)))

    width = middle.width * flat_encoding.width
    x_length, x_period = _nested_shape((x.family.shape(), width))
    moved = UPElement(UPFamily.from_function(
        flat_encoding.carrier, reassociated, (max(length, x_length) + 1) * width, lcm(period, x_period) * width,
    ), x.bound)
    by_pair = associator_apply(flat_base, lams, moved)

    def agrees(s):
        second = UPElement(reindex_family(by_pair.family, middle.inclusion(s)), x.bound)
        nested = first(s)
        return all(nested(t) == second(t) for t in middle.fiber(s).points())

    if mu.carrier.is_finite:
        return all(agrees(s) for s in mu.carrier.points())
    check_length, check_period = _nested_shape(
        ((max(length, x_length), lcm(period, x_period)), 1), (by_pair.family.shape(), middle.width),
    )
    return mu.large(UPSet.from_predicate(agrees, check_length, check_period))


def unitor_triangles(mu, fam, x):
    """
    Right unitor: ∫_{mu⊗⋆} A -> ∫_mu ∫_⋆ A is the identity on x. Left
    unitor: ∫_{⋆⊗mu} A -> ∫_⋆ ∫_mu A sends x to its class.
    """
    one = IndexSet.fin(1)
    if mu.carrier.is_finite:
        right_family = UPFamily.from_list([star()] * mu.carrier.size)
    else:
        right_family = UPFamily.constant(mu.carrier, star())
    right = associator_apply(mu, right_family, x)
    left_family = UPFamily.from_list([mu])
    left = associator_apply(star(), left_family, x)
    collapsed = UPElement.constant(mu.carrier, x.bound, left(0))
    return ufam_eq(right, x, mu) and left.index == one and ufam_eq(collapsed, x, mu)


def dependent_product_check(mu, fam, dependent):
    """
    ∫ (a:A_s) × B_s(a)  ≅  (a : ∫A_s) × ∫ B_s(a). ``dependent[a][b]`` is
    {s : b ∈ B_s(a)}; pairs are coded a·kb + b. Returns the two class sets.
    """
    kb = len(dependent[0]) if dependent else 0
    pairs = BoundedFamily(fam.index, fam.bound * kb, tuple(
        fam.fiber_sets[a] & fam.index.as_query(dependent[a][b])
        for a in range(fam.bound) for b in range(kb)
    ))
    left = set()
    if not mu.large(pairs.empty_set()):
        left = {divmod(x.limit(mu), kb) for x in uprod_enumerate(mu, pairs)}
    right = set()
    for a in uprod_enumerate(mu, fam).values():
        inner = BoundedFamily(fam.index, kb, tuple(fam.index.as_query(q) for q in dependent[a]))
        if mu.large(inner.empty_set()):
            continue
        right |= {(a, b) for b in uprod_enumerate(mu, inner).values()}
    return left, right


def _induced_map(f, source_encoding, target_encoding):
    """F: Σ_{r:lam} ν_{f(r)} -> Σ_{s:mu} ν_s, (r, t) |-> (f(r), t)."""
    if source_encoding.carrier.is_finite:
        return TableMap(source_encoding.carrier, target_encoding.carrier, tuple(
            target_encoding.encode(f(r), t)
            for r, t in map(source_encoding.decode, source_encoding.carrier.points())
        ))
    if not isinstance(f, ResidueMap) or {source_encoding.kind, target_encoding.kind} != {SumKind.NAT_FIN}:
        raise UnsupportedEncoding("the reindexing square over ℕ needs a residue map and finite fibers")
    m = source_encoding.width
    return ResidueMap(m * f.modulus, tuple(
        (a * m, b * m + t) for a, b in f.pieces for t in range(m)
    ))


def reindex_associator_check(f, lam, mu, nus, x):
    """
    Reindexing commutes with the associator: for f: lam -> mu,
    α(F^# x) = f^#(α x) where F is the induced map of sums. Over ℕ the
    map must be a residue map and the sums NAT_FIN.
    """
    require_arrow(f, lam, mu)
    source_family = reindex_family(as_family(mu, nus), f)
    source_encoding = encoding_for(lam, source_family)
    target_encoding = encoding_for(mu, nus)
    induced = _induced_map(f, source_encoding, target_encoding)
    pulled = UPElement(reindex_family(x.family, induced), x.bound)
    left = associator_apply(lam, source_family, pulled)
    right = UPElement(reindex_family(associator_apply(mu, nus, x).family, f), x.bound)
    return ufam_eq(left, right, lam)
