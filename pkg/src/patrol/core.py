"""Exact domain types: rationals, intervals, priority sets and instances."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence, Union

Rat = Fraction
RatLike = Union[Fraction, int, str]

#: Stand-in for an unattainable lid length (e.g. zero lids over a nonempty set).
INFINITY = math.inf


class InstanceError(ValueError):
    """Raised for malformed priority sets or instances."""


def rat(value: RatLike | float) -> Fraction:
    """Coerce ``value`` to a Fraction.

    Strings may be decimals (``"0.25"``) or ratios (``"1/4"``). Floats are
    accepted but go through their decimal repr so ``0.1`` becomes ``1/10``.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise InstanceError(f"not a number: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        if not math.isfinite(value):
            raise InstanceError(f"not a finite number: {value!r}")
        return Fraction(repr(value))
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise InstanceError(f"malformed number {value!r}") from exc
    raise InstanceError(f"not a number: {value!r}")


@dataclass(frozen=True, order=True)
class Interval:
    left: Fraction
    right: Fraction

    def __post_init__(self):
        object.__setattr__(self, "left", rat(self.left))
        object.__setattr__(self, "right", rat(self.right))
        if self.left > self.right:
            raise InstanceError(f"interval left {self.left} exceeds right {self.right}")

    @property
    def length(self) -> Fraction:
        return self.right - self.left

    def __contains__(self, x) -> bool:
        return self.left <= x <= self.right

    def __str__(self):
        return f"[{self.left}, {self.right}]"


@dataclass(frozen=True)
class PrioritySet:
    """Sorted, pairwise disjoint closed subintervals of [0, 1].

    Build through :meth:`from_pairs`, which validates and merges. The direct
    constructor expects already-normalized segments.
    """

    segments: tuple[Interval, ...] = ()

    def __post_init__(self):
        segs = tuple(self.segments)
        object.__setattr__(self, "segments", segs)
        for s in segs:
            if s.left < 0 or s.right > 1:
                raise InstanceError(f"segment {s} lies outside [0, 1]")
        for a, b in zip(segs, segs[1:]):
            if not a.right < b.left:
                raise InstanceError(f"segments {a} and {b} are not sorted and disjoint")

    @classmethod
    def from_pairs(cls, pairs: Iterable[Sequence[RatLike]], strict: bool = False) -> "PrioritySet":
        """Normalize raw ``(left, right)`` pairs.

        Overlapping or touching segments are merged unless ``strict`` is set,
        in which case they raise :class:`InstanceError`.
        """
        ivs = []
        for pair in pairs:
            if len(pair) != 2:
                raise InstanceError(f"segment must have two endpoints, got {pair!r}")
            ivs.append(Interval(rat(pair[0]), rat(pair[1])))
        for iv in ivs:
            if iv.left < 0 or iv.right > 1:
                raise InstanceError(f"segment {iv} lies outside [0, 1]")
        ivs.sort()
        merged: list[Interval] = []
        for iv in ivs:
            if merged and iv.left <= merged[-1].right:
                if strict:
                    raise InstanceError(f"segments {merged[-1]} and {iv} overlap or touch")
                last = merged[-1]
                merged[-1] = Interval(last.left, max(last.right, iv.right))
            else:
                merged.append(iv)
        return cls(tuple(merged))

    def __len__(self):
        return len(self.segments)

    def __iter__(self):
        return iter(self.segments)

    def __getitem__(self, i) -> Interval:
        return self.segments[i]

    def __bool__(self):
        return bool(self.segments)

    def contains(self, x) -> bool:
        """Membership test (binary search)."""
        i = _bisect_right(self.lefts, x) - 1
        return i >= 0 and x <= self.rights[i]

    @cached_property
    def lefts(self) -> tuple[Fraction, ...]:
        return tuple(s.left for s in self.segments)

    @cached_property
    def rights(self) -> tuple[Fraction, ...]:
        return tuple(s.right for s in self.segments)

    @cached_property
    def endpoints(self) -> tuple[Fraction, ...]:
        """Sorted distinct segment endpoints."""
        # segments are sorted and disjoint, so interleaving keeps the order
        out = []
        for s in self.segments:
            out.append(s.left)
            if s.right != s.left:
                out.append(s.right)
        return tuple(out)

    @cached_property
    def denominator(self) -> int:
        """Least common denominator of all endpoints (and of 0, 1)."""
        d = 1
        for q in {x.denominator for x in self.lefts + self.rights}:
            d = d * q // math.gcd(d, q)
        return d

    @cached_property
    def scaled(self) -> tuple[list[int], list[int]]:
        """Endpoints multiplied by :attr:`denominator`, as plain ints."""
        d = self.denominator
        return (
            [x.numerator * (d // x.denominator) for x in self.lefts],
            [x.numerator * (d // x.denominator) for x in self.rights],
        )

    def reflect(self) -> "PrioritySet":
        """Mirror image under x -> 1 - x."""
        return PrioritySet(tuple(Interval(1 - s.right, 1 - s.left) for s in reversed(self.segments)))

    def to_pairs(self) -> list[tuple[Fraction, Fraction]]:
        return [(s.left, s.right) for s in self.segments]

    def __str__(self):
        return "{" + ", ".join(str(s) for s in self.segments) + "}"


def _bisect_right(seq, x) -> int:
    lo, hi = 0, len(seq)
    while lo < hi:
        mid = (lo + hi) // 2
        if x < seq[mid]:
            hi = mid
        else:
            lo = mid + 1
    return lo


@dataclass(frozen=True)
class Instance:
    priorities: PrioritySet
    robots: int

    def __post_init__(self):
        if not isinstance(self.robots, int) or isinstance(self.robots, bool) or self.robots < 1:
            raise InstanceError(f"robots must be a positive integer, got {self.robots!r}")

    @classmethod
    def build(cls, pairs: Iterable[Sequence[RatLike]], robots: int) -> "Instance":
        return cls(PrioritySet.from_pairs(pairs), robots)


@dataclass(frozen=True)
class Lid:
    """A closed interval of fixed length; may stick out of [0, 1].

    ``h`` is the index (1-based, 0 = sentinel) of the rightmost priority
    segment whose left endpoint is at or before ``right``.
    """

    left: Fraction
    right: Fraction
    h: int = field(default=0, compare=False)

    @property
    def length(self) -> Fraction:
        return self.right - self.left

    def __contains__(self, x) -> bool:
        return self.left <= x <= self.right


def h_star(p: PrioritySet) -> PrioritySet:
    """Add the segment endpoints 0 and 1 as degenerate priority segments."""
    pairs = p.to_pairs() + [(0, 0), (1, 1)]
    return PrioritySet.from_pairs(pairs)


def total_measure(p: PrioritySet) -> Fraction:
    return sum((s.length for s in p.segments), Fraction(0))


def fmt(x) -> str:
    """Exact-and-decimal rendering used by reports."""
    if x == INFINITY:
        return "inf"
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x} (~{float(x):.12g})"
