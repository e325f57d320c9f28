"""Finite integer domains stored as ordered disjoint intervals.

A domain is a tuple of (lo, hi) pairs, sorted, non-overlapping and
non-adjacent, so {1,2,3,7,8} is ((1,3),(7,8)). Domains are immutable;
every narrowing operation returns a new domain.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator


def _normalize(pairs: Iterable[tuple[int, int]]) -> tuple[tuple[int, int], ...]:
    spans = sorted((lo, hi) for lo, hi in pairs if lo <= hi)
    merged: list[tuple[int, int]] = []
    for lo, hi in spans:
        if merged and lo <= merged[-1][1] + 1:
            merged[-1] = (merged[-1][0], max(merged[-1][1], hi))
        else:
            merged.append((lo, hi))
    return tuple(merged)


@dataclass(frozen=True)
class Domain:
    intervals: tuple[tuple[int, int], ...] = ()

    @staticmethod
    def interval(lo: int, hi: int) -> "Domain":
        return Domain(((lo, hi),) if lo <= hi else ())

    @staticmethod
    def singleton(value: int) -> "Domain":
        return Domain(((value, value),))

    @staticmethod
    def from_values(values: Iterable[int]) -> "Domain":
        return Domain(_normalize((v, v) for v in values))

    @property
    def empty(self) -> bool:
        return not self.intervals

    @property
    def min(self) -> int:
        return self.intervals[0][0]

    @property
    def max(self) -> int:
        return self.intervals[-1][1]

    @property
    def size(self) -> int:
        return sum(hi - lo + 1 for lo, hi in self.intervals)

    @property
    def is_singleton(self) -> bool:
        return len(self.intervals) == 1 and self.intervals[0][0] == self.intervals[0][1]

    @property
    def value(self) -> int:
        """The single member of a singleton domain."""
        (lo, hi), = self.intervals
        if lo != hi:
            raise ValueError("domain is not a singleton")
        return lo

    def __contains__(self, v: int) -> bool:
        return any(lo <= v <= hi for lo, hi in self.intervals)

    def __iter__(self) -> Iterator[int]:
        for lo, hi in self.intervals:
            yield from range(lo, hi + 1)

    def clamp(self, lo: int | None, hi: int | None) -> "Domain":
        """Intersect with [lo, hi]; either bound may be absent."""
        out = []
        for a, b in self.intervals:
            if lo is not None:
                a = max(a, lo)
            if hi is not None:
                b = min(b, hi)
            if a <= b:
                out.append((a, b))
        return Domain(tuple(out))

    def intersect(self, other: "Domain") -> "Domain":
        out = []
        i = j = 0
        a, b = self.intervals, other.intervals
        while i < len(a) and j < len(b):
            lo = max(a[i][0], b[j][0])
            hi = min(a[i][1], b[j][1])
            if lo <= hi:
                out.append((lo, hi))
            if a[i][1] < b[j][1]:
                i += 1
            else:
                j += 1
        return Domain(tuple(out))

    def union(self, other: "Domain") -> "Domain":
        return Domain(_normalize(self.intervals + other.intervals))

    def remove_value(self, v: int) -> "Domain":
        out = []
        for lo, hi in self.intervals:
            if lo <= v <= hi:
                if lo <= v - 1:
                    out.append((lo, v - 1))
                if v + 1 <= hi:
                    out.append((v + 1, hi))
            else:
                out.append((lo, hi))
        return Domain(tuple(out))
