from __future__ import annotations

from dataclasses import dataclass
from math import gcd

from .enums import Classification
from .exceptions import ParseError


def lcm(a, b):
    return a * b // gcd(a, b)


def _canonical(prefix, period):
    size = len(period)
    for d in range(1, size + 1):
        if size % d == 0 and all(period[i] == period[i % d] for i in range(size)):
            period = period[:d]
            break
    prefix = list(prefix)
    period = list(period)
    # Move the start of the periodic part back while the prefix agrees with it.
    while prefix and prefix[-1] == period[-1]:
        bit = prefix.pop()
        period = [bit] + period[:-1]
    return tuple(prefix), tuple(period)


@dataclass(frozen=True)
class UPSet:
    """
    An ultimately periodic subset of ℕ.

    ``prefix[n]`` is the membership of n for n < len(prefix); past the
    prefix membership repeats ``period``. Instances are always kept in
    canonical form (minimal period, then minimal prefix), so ``==`` is
    set equality.
    """
    prefix: tuple
    period: tuple

    def __post_init__(self):
        if not self.period:
            raise ValueError("period must be nonempty")
        prefix = tuple(int(bool(bit)) for bit in self.prefix)
        period = tuple(int(bool(bit)) for bit in self.period)
        prefix, period = _canonical(prefix, period)
        object.__setattr__(self, "prefix", prefix)
        object.__setattr__(self, "period", period)

    # Constructors

    @classmethod
    def from_predicate(cls, predicate, prefix_length, period):
        """Sample a predicate known to be periodic with ``period`` from ``prefix_length`` on."""
        prefix = [predicate(n) for n in range(prefix_length)]
        tail = [predicate(n) for n in range(prefix_length, prefix_length + period)]
        return cls(tuple(prefix), tuple(tail))

    @classmethod
    def empty(cls):
        return cls((), (0,))

    @classmethod
    def full(cls):
        return cls((), (1,))

    @classmethod
    def finite(cls, elements):
        elements = set(elements)
        if any(n < 0 for n in elements):
            raise ValueError("elements must be natural numbers")
        length = max(elements) + 1 if elements else 0
        return cls(tuple(n in elements for n in range(length)), (0,))

    @classmethod
    def below(cls, n):
        return cls.finite(range(n))

    @classmethod
    def at_least(cls, n):
        return cls((0,) * n, (1,))

    @classmethod
    def residue(cls, modulus, remainder):
        return cls((), tuple(i == remainder % modulus for i in range(modulus)))

    @classmethod
    def evens(cls):
        return cls.residue(2, 0)

    @classmethod
    def odds(cls):
        return cls.residue(2, 1)

    @classmethod
    def random(cls, rng, max_prefix=4, max_period=4):
        prefix = tuple(rng.randrange(2) for _ in range(rng.randrange(max_prefix + 1)))
        period = tuple(rng.randrange(2) for _ in range(rng.randint(1, max_period)))
        return cls(prefix, period)

    # Queries

    @property
    def prefix_length(self):
        return len(self.prefix)

    @property
    def period_length(self):
        return len(self.period)

    def __contains__(self, n):
        if n < 0:
            return False
        if n < len(self.prefix):
            return self.prefix[n] == 1
        return self.period[(n - len(self.prefix)) % len(self.period)] == 1

    def contains_eventually(self, offset):
        """Whether offset + m·p lies in the set for every large m (p the period)."""
        return self.period[(offset - len(self.prefix)) % len(self.period)] == 1

    def classify(self):
        if self.period == (0,):
            return Classification.FINITE if self.prefix else Classification.EMPTY
        if self.period == (1,):
            return Classification.COFINITE if self.prefix else Classification.FULL
        return Classification.NEITHER

    def is_empty(self):
        return self.classify() is Classification.EMPTY

    def is_full(self):
        return self.classify() is Classification.FULL

    def is_finite(self):
        return self.period == (0,)

    def is_cofinite(self):
        return self.period == (1,)

    def elements(self):
        if not self.is_finite():
            raise ValueError("infinite set has no element list")
        return [n for n, bit in enumerate(self.prefix) if bit]

    def members_below(self, bound):
        return [n for n in range(bound) if n in self]

    def first_member(self):
        for n in range(len(self.prefix) + len(self.period)):
            if n in self:
                return n
        return None

    def is_subset(self, other):
        return (self - other).is_empty()

    # Boolean algebra

    def _combine(self, other, op):
        length = max(len(self.prefix), len(other.prefix))
        period = lcm(len(self.period), len(other.period))
        return UPSet.from_predicate(lambda n: op(n in self, n in other), length, period)

    def __and__(self, other):
        return self._combine(other, lambda a, b: a and b)

    def __or__(self, other):
        return self._combine(other, lambda a, b: a or b)

    def __sub__(self, other):
        return self._combine(other, lambda a, b: a and not b)

    def __xor__(self, other):
        return self._combine(other, lambda a, b: a != b)

    def __invert__(self):
        return UPSet(tuple(1 - bit for bit in self.prefix), tuple(1 - bit for bit in self.period))

    def complement(self):
        return ~self

    def shifted(self, offset):
        """{n + offset : n in self}; members pushed below 0 are dropped."""
        length = max(len(self.prefix) + offset, 0)
        return UPSet.from_predicate(lambda n: n - offset in self, length, len(self.period))

    # Text form

    def to_text(self):
        return "prefix:{};period:{}".format(
            "".join(map(str, self.prefix)), "".join(map(str, self.period))
        )

    @classmethod
    def from_text(cls, text):
        try:
            prefix_part, period_part = text.strip().split(";")
            prefix_key, prefix_bits = prefix_part.split(":")
            period_key, period_bits = period_part.split(":")
        except ValueError:
            raise ParseError(f"malformed UPSet {text!r}")
        if prefix_key.strip() != "prefix" or period_key.strip() != "period":
            raise ParseError(f"malformed UPSet {text!r}")
        bits = prefix_bits.strip() + period_bits.strip()
        if not period_bits.strip() or any(bit not in "01" for bit in bits):
            raise ParseError(f"malformed UPSet bits in {text!r}")
        return cls(tuple(map(int, prefix_bits.strip())), tuple(map(int, period_bits.strip())))

    def __str__(self):
        return self.to_text()


def upset_union(sets):
    result = UPSet.empty()
    for s in sets:
        result = result | s
    return result


def upset_intersection(sets):
    result = UPSet.full()
    for s in sets:
        result = result & s
    return result


def up_algebra(a, b, op):
    """Binary Boolean operation by name: ``and``, ``or`` or ``diff``."""
    if op == "and":
        return a & b
    if op == "or":
        return a | b
    if op == "diff":
        return a - b
    raise ValueError(f"unknown operation {op!r}")


def up_complement(a):
    return ~a


def probe_sets(max_prefix=3, max_period=4):
    """Every canonical UPSet with prefix length <= max_prefix and period <= max_period."""
    seen = set()
    result = []
    for length in range(max_prefix + 1):
        for p in range(1, max_period + 1):
            for code in range(2 ** (length + p)):
                bits = [(code >> i) & 1 for i in range(length + p)]
                s = UPSet(tuple(bits[:length]), tuple(bits[length:]))
                if s not in seen:
                    seen.add(s)
                    result.append(s)
    return result
