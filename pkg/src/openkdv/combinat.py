"""Exact combinatorics shared across the package.

Multisets of descendent indices are represented as sorted tuples of
non-negative integers throughout.  Splitting a multiset counts the ways of
splitting the underlying *labelled* insertions, which is what coefficient
extraction from a generating function produces: a sub-multiset S of A is
weighted by prod_v C(mult_A(v), mult_S(v)).
"""

from __future__ import annotations

from math import comb
from typing import Iterable, Iterator, Sequence, Tuple

Multiset = Tuple[int, ...]


def canon(a: Iterable[int]) -> Multiset:
    """Canonical (sorted ascending) form of a multiset of indices."""
    return tuple(sorted(a))


def double_factorial(n: int) -> int:
    """Product n(n-2)(n-4)...; empty product (n <= 0, incl. (-1)!!) is 1."""
    out = 1
    while n > 0:
        out *= n
        n -= 2
    return out


def odd_product(start: int, terms: int) -> int:
    """Product of `terms` consecutive odd integers start, start+2, ..."""
    out = 1
    for m in range(terms):
        out *= start + 2 * m
    return out


def multinomial(parts: Sequence[int]) -> int:
    """Number of ways to split sum(parts) labelled slots into parts."""
    total, out = 0, 1
    for p in parts:
        total += p
        out *= comb(total, p)
    return out


def falling(e: int, r: int) -> int:
    """Falling factorial e(e-1)...(e-r+1); zero when r > e."""
    out = 1
    for m in range(r):
        out *= e - m
    return out


def multiset_splits(a: Multiset) -> Iterator[Tuple[Multiset, Multiset, int]]:
    """All ordered two-part splits (S, T) of a with labelled multiplicity.

    Yields (S, T, ways) where ways = prod_v C(mult_a(v), mult_S(v)); summing
    ways over all splits gives 2**len(a).
    """
    values: list[Tuple[int, int]] = []
    for v in sorted(set(a)):
        values.append((v, a.count(v)))

    def rec(pos: int, s_acc: list[int], t_acc: list[int], ways: int):
        if pos == len(values):
            yield tuple(s_acc), tuple(t_acc), ways
            return
        v, m = values[pos]
        for take in range(m + 1):
            yield from rec(
                pos + 1,
                s_acc + [v] * take,
                t_acc + [v] * (m - take),
                ways * comb(m, take),
            )

    yield from rec(0, [], [], 1)


_SPLITS_CACHE: dict = {}


def splits_cached(a: Multiset) -> Tuple[Tuple[Multiset, Multiset, int], ...]:
    """Memoized tuple of multiset_splits(a); hot path for the solvers."""
    got = _SPLITS_CACHE.get(a)
    if got is None:
        got = tuple(multiset_splits(a))
        _SPLITS_CACHE[a] = got
    return got


def multiset_ordered_splits(a: Multiset, p: int) -> Iterator[Tuple[Tuple[Multiset, ...], int]]:
    """All splits of a into p ordered (possibly empty) parts, with multiplicity."""
    if p == 1:
        yield (a,), 1
        return
    for s, rest, ways in multiset_splits(a):
        for tail, tail_ways in multiset_ordered_splits(rest, p - 1):
            yield (s,) + tail, ways * tail_ways


def compositions(total: int, parts: int, min_part: int = 0) -> Iterator[Tuple[int, ...]]:
    """Ordered tuples of `parts` integers >= min_part summing to total."""
    if parts == 0:
        if total == 0:
            yield ()
        return
    if parts == 1:
        if total >= min_part:
            yield (total,)
        return
    for first in range(min_part, total - min_part * (parts - 1) + 1):
        for rest in compositions(total - first, parts - 1, min_part):
            yield (first,) + rest


def bounded_multisets(total: int, length: int, max_part: int) -> Iterator[Multiset]:
    """Sorted tuples of `length` values in 0..max_part summing to total."""
    if length == 0:
        if total == 0:
            yield ()
        return

    def rec(remaining: int, slots: int, lo: int):
        if slots == 0:
            if remaining == 0:
                yield ()
            return
        # remaining must fit in `slots` parts each between lo and max_part
        for v in range(lo, min(max_part, remaining) + 1):
            if remaining - v > max_part * (slots - 1):
                continue
            for rest in rec(remaining - v, slots - 1, v):
                yield (v,) + rest

    yield from rec(total, length, 0)


def multisets_up_to(max_degree: int, max_part: int) -> Iterator[Multiset]:
    """All sorted index multisets with len(a) <= max_degree, parts <= max_part.

    Degree here is the number of insertions, not their sum; the empty multiset
    is included.
    """
    def rec(slots: int, lo: int):
        yield ()
        if slots == 0:
            return
        for v in range(lo, max_part + 1):
            for rest in rec(slots - 1, v):
                yield (v,) + rest

    yield from rec(max_degree, 0)


__all__ = [
    "Multiset",
    "canon",
    "double_factorial",
    "odd_product",
    "multinomial",
    "falling",
    "multiset_splits",
    "multiset_ordered_splits",
    "splits_cached",
    "compositions",
    "bounded_multisets",
    "multisets_up_to",
]
