"""Brute-force enumeration of overpartitions and their least gaps.

Nothing here touches power series; the functions are meant as ground
truth for the generating-function routes at small n.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterator, Tuple

DEFAULT_CAP = 50

__all__ = [
    "CapExceeded",
    "Overpartition",
    "OracleSum",
    "DEFAULT_CAP",
    "enumerate_overpartitions",
    "mex_over",
    "least_r_gap",
    "sigma_r_mex_bruteforce",
    "staircase_insert",
    "enumerate_3colored_distinct",
    "count_3colored_distinct",
]


class CapExceeded(ValueError):
    """Raised when a brute-force enumeration is asked for n above its cap."""


Part = Tuple[int, int, bool]  # (value, multiplicity, first occurrence overlined)


@dataclass(frozen=True)
class Overpartition:
    """An overpartition stored as (value, multiplicity, overlined_first) triples.

    Values strictly decrease.  ``multiplicity`` counts every occurrence of
    the value, including the overlined one, so the non-overlined count is
    ``multiplicity - overlined_first``.
    """

    parts: Tuple[Part, ...] = ()

    def __post_init__(self):
        prev = None
        for value, mult, _ in self.parts:
            if value < 1 or mult < 1:
                raise ValueError(f"bad part ({value}, {mult})")
            if prev is not None and value >= prev:
                raise ValueError("part values must be strictly decreasing")
            prev = value

    @property
    def weight(self) -> int:
        return sum(v * m for v, m, _ in self.parts)

    def plain_counts(self) -> Counter:
        """Multiplicity of each value among the non-overlined parts."""
        return Counter({v: m - ov for v, m, ov in self.parts if m - ov > 0})

    def __str__(self):
        terms = []
        for v, m, ov in self.parts:
            if ov:
                terms.append(f"{v}̅")
            terms.extend([str(v)] * (m - ov))
        return " + ".join(terms) if terms else "()"


@dataclass(frozen=True)
class OracleSum:
    n: int
    r: int
    total: int
    count: int


def _check_cap(n: int, cap: int):
    if n < 0:
        raise ValueError(f"n must be nonnegative, got {n}")
    if n > cap:
        raise CapExceeded(f"n={n} exceeds the enumeration cap {cap}")


def _overpartitions(n: int, max_value: int) -> Iterator[Tuple[Part, ...]]:
    if n == 0:
        yield ()
        return
    for v in range(min(n, max_value), 0, -1):
        for mult in range(n // v, 0, -1):
            for ov in (True, False):
                for rest in _overpartitions(n - v * mult, v - 1):
                    yield ((v, mult, ov),) + rest


def enumerate_overpartitions(n: int, cap: int = DEFAULT_CAP) -> Iterator[Overpartition]:
    """Yield every overpartition of n exactly once.

    Order is lexicographically descending in the expanded part list, with
    the overlined variant of a value before the plain one.
    """
    _check_cap(n, cap)
    for parts in _overpartitions(n, n):
        yield Overpartition(parts)


def least_r_gap(pi: Overpartition, r: int) -> int:
    """Smallest m >= 1 occurring fewer than r times among non-overlined parts."""
    if r < 1:
        raise ValueError(f"r must be positive, got {r}")
    counts = pi.plain_counts()
    m = 1
    while counts.get(m, 0) >= r:
        m += 1
    return m


def mex_over(pi: Overpartition) -> int:
    """Smallest positive integer missing from the non-overlined parts."""
    plain = {v for v, mult, ov in pi.parts if mult - ov > 0}
    m = 1
    while m in plain:
        m += 1
    return m


def sigma_r_mex_bruteforce(n: int, r: int, cap: int = DEFAULT_CAP) -> OracleSum:
    total = count = 0
    for pi in enumerate_overpartitions(n, cap):
        total += least_r_gap(pi, r)
        count += 1
    return OracleSum(n=n, r=r, total=total, count=count)


def staircase_insert(pi: Overpartition, r: int, k: int) -> Overpartition:
    """Add r plain copies of each of 1..k; overline flags are untouched."""
    if r < 1 or k < 0:
        raise ValueError(f"need r >= 1 and k >= 0, got r={r}, k={k}")
    parts = {v: [m, ov] for v, m, ov in pi.parts}
    for v in range(1, k + 1):
        entry = parts.setdefault(v, [0, False])
        entry[0] += r
    return Overpartition(
        tuple((v, m, ov) for v, (m, ov) in sorted(parts.items(), reverse=True))
    )


_COLOR_SUBSETS = [
    frozenset(c for c in (1, 2, 3) if mask >> (c - 1) & 1) for mask in range(1, 8)
]


def enumerate_3colored_distinct(n: int, cap: int = DEFAULT_CAP):
    """Partitions of n into distinct parts drawn from three colors.

    Each partition is a tuple of (value, colors) with values decreasing;
    ``colors`` is the nonempty set of colors in which that value appears.
    """
    _check_cap(n, cap)

    def gen(rest, max_value):
        if rest == 0:
            yield ()
            return
        for v in range(min(rest, max_value), 0, -1):
            for colors in _COLOR_SUBSETS:
                used = v * len(colors)
                if used <= rest:
                    for tail in gen(rest - used, v - 1):
                        yield ((v, colors),) + tail

    yield from gen(n, n)


def count_3colored_distinct(n: int, cap: int = DEFAULT_CAP) -> int:
    return sum(1 for _ in enumerate_3colored_distinct(n, cap))
