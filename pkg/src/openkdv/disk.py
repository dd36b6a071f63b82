"""Open-sector (marked disk) descendent integrals.

Genus 0 closed form
-------------------
With every a_i >= 1 and k = 2*sum(a) + 3 - 2l boundary markings,

    <tau_{a_1} ... tau_{a_l} sigma^k>_0 = (sum 2a_i - l + 1)! / prod (2a_i - 1)!!

tau_0 insertions are removed beforehand by the open string equation, whose
base values are <sigma^3>_0 = 1 and <tau_0 sigma>_0 = 1.

All-genus solvers
-----------------
Two independent engines determine every open bracket from the single t-free
seed <sigma^3>_0 = 1, the string equation, and the closed-sector theory:

* the open Virasoro route: the coefficient-level consequences of the
  extended operators annihilating exp(F^c + F^o), applied for n = b - 1
  where b is the largest descendent index of the target;
* the open KdV route: the open analogue of the KdV hierarchy, reducing the
  top index by one per step.

Each engine computes genus 0 as well, so the two routes and the closed form
cross-check each other.  Higher-genus open values rest on the conjectural
open Virasoro / open KdV determination; `bracket_status` reports which
values carry proved status.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb, factorial
from typing import Dict, Iterable, Iterator, Optional, Tuple

from .brackets import closed_genus, open_genus, open_stable
from .closed import closed_bracket
from .combinat import (
    Multiset,
    bounded_multisets,
    canon,
    double_factorial,
    odd_product,
    splits_cached,
)
from .series import FormalSeries, Rational, TSMonomial, monomial

genus_of_open = open_genus


def open_genus0_closed_form(a: Iterable[int]) -> Fraction:
    """Evaluation theorem value for a genus-0 bracket with all a_i >= 1."""
    a = canon(a)
    if any(x < 1 for x in a):
        raise ValueError("closed form requires every index >= 1; "
                         "reduce tau_0 insertions by the string equation first")
    two_a = 2 * sum(a)
    denom = 1
    for x in a:
        denom *= double_factorial(2 * x - 1)
    return Fraction(factorial(two_a - len(a) + 1), denom)


def open_genus0_bracket(a: Iterable[int], k: int) -> Fraction:
    """Genus-0 open bracket; string reduction plus the closed form."""
    a = canon(a)
    if open_genus(a, k) != 0 or not open_stable(0, k, len(a)):
        return Fraction(0)
    if not a:
        return Fraction(1) if k == 3 else Fraction(0)
    if a[0] == 0:
        if a == (0,) and k == 1:
            return Fraction(1)
        rest = a[1:]
        total = Fraction(0)
        for v in sorted(set(rest)):
            if v == 0:
                continue
            mult = rest.count(v)
            reduced = canon([x for x in rest if x != v] + [v] * (mult - 1) + [v - 1])
            total += mult * open_genus0_bracket(reduced, k)
        return total
    return open_genus0_closed_form(a)


def bracket_status(g: int, a: Iterable[int], k: int) -> str:
    """Provenance: genus 0 and <tau_1>_1 are proved, higher genus conjectural."""
    a = canon(a)
    if g == 0 or (g, a, k) == (1, (1,), 0):
        return "proved"
    return "conjectural (open Virasoro/KdV determination)"


def open_bracket(g: int, a: Iterable[int], k: int) -> Fraction:
    """The open bracket <tau_a sigma^k>_g; zero off-dimension or unstable.

    Genus 0 is served by the string-reduced closed form; higher genus by the
    open Virasoro constraint propagation.
    """
    a = canon(a)
    if g < 0 or open_genus(a, k) != g or not open_stable(g, k, len(a)):
        return Fraction(0)
    if g == 0:
        return open_genus0_bracket(a, k)
    return virasoro_open_bracket(a, k)


# ---------------------------------------------------------------------------
# Route 1: open Virasoro constraint propagation
# ---------------------------------------------------------------------------

_vir_memo: Dict[Tuple[Multiset, int], Fraction] = {}


def virasoro_open_bracket(a: Iterable[int], k: int) -> Fraction:
    """All-genus open bracket from the extended Virasoro constraints.

    The genus is forced by the dimension constraint; keys with no valid
    genus, or failing stability, give zero.
    """
    a = canon(a)
    g = open_genus(a, k)
    if g is None or not open_stable(g, k, len(a)):
        return Fraction(0)
    return _vir_value(a, k)


def _vir_at(a: Multiset, k: int, g_req: int) -> Fraction:
    if g_req < 0 or k < 0:
        return Fraction(0)
    g = open_genus(a, k)
    if g != g_req or not open_stable(g, k, len(a)):
        return Fraction(0)
    return _vir_value(a, k)


def _closed_at(a: Multiset, h_req: int) -> Fraction:
    if h_req < 0:
        return Fraction(0)
    if closed_genus(a) != h_req:
        return Fraction(0)
    return closed_bracket(h_req, a)


def _string_step(a: Multiset, k: int, value_fn) -> Fraction:
    """One application of the open string equation to a key containing tau_0."""
    rest = a[1:]
    total = Fraction(0)
    for v in sorted(set(rest)):
        if v == 0:
            continue
        mult = rest.count(v)
        reduced = canon([x for x in rest if x != v] + [v] * (mult - 1) + [v - 1])
        total += mult * value_fn(reduced, k)
    return total


def _vir_value(a: Multiset, k: int) -> Fraction:
    key = (a, k)
    cached = _vir_memo.get(key)
    if cached is not None:
        return cached
    g = open_genus(a, k)
    l = len(a)

    if l == 0:
        result = Fraction(1) if k == 3 else Fraction(0)
    elif a[0] == 0:
        if a == (0,) and k == 1:
            result = Fraction(1)
        else:
            result = _string_step(a, k, virasoro_open_bracket)
    else:
        result = _vir_recurse(a, k, g)
    _vir_memo[key] = result
    return result


def _vir_recurse(a: Multiset, k: int, g: int) -> Fraction:
    """Resolve the bracket via the L_{b-1} extension, b = max index."""
    b = a[-1]
    n = b - 1
    rest = list(a[:-1])
    rest_t = canon(rest)
    two_pow = 2 ** (n + 1)
    acc = Fraction(0)

    # t_i d/dt_{i+n} family
    for v in sorted(set(rest)):
        mult = rest.count(v)
        shifted = canon([x for x in rest if x != v] + [v] * (mult - 1) + [v + n])
        acc += Fraction(mult * odd_product(2 * v + 1, n + 1), two_pow) \
            * _vir_at(shifted, k, g)

    # (u^2/2) second-derivative family, i + j = n - 1
    splits = splits_cached(rest_t) if n else ()
    for i in range(n):
        j = n - 1 - i
        w = Fraction(double_factorial(2 * i + 1) * double_factorial(2 * j + 1),
                     2 * two_pow)
        # both derivatives on F^o: genus drops by two
        acc += w * _vir_at(canon(rest + [i, j]), k, g - 2)
        for part1, part2, ways in splits:
            if ways == 0:
                continue
            # closed x open cross terms (closed factor takes no sigma)
            for ci, oj in ((i, j), (j, i)):
                ckey = canon(part1 + (ci,))
                okey = canon(part2 + (oj,))
                h = closed_genus(ckey)
                g1 = open_genus(okey, k)
                if h is None or g1 is None or g1 + 2 * h != g:
                    continue
                cval = _closed_at(ckey, h)
                if cval:
                    acc += w * ways * cval * _vir_at(okey, k, g1)
            # open x open: boundary markings split with a binomial
            okey1 = canon(part1 + (i,))
            okey2 = canon(part2 + (j,))
            for k1 in range(k + 1):
                g1 = open_genus(okey1, k1)
                g2 = open_genus(okey2, k - k1)
                if g1 is None or g2 is None or g1 + g2 != g - 1:
                    continue
                left = _vir_at(okey1, k1, g1)
                if left:
                    acc += w * ways * comb(k, k1) * left \
                        * _vir_at(okey2, k - k1, g2)

    # s-derivative block sums share one table of admissible per-part values
    options: Dict[Multiset, Tuple[Tuple[int, int, Fraction], ...]] = {}

    def part_options(part: Multiset) -> Tuple[Tuple[int, int, Fraction], ...]:
        got = options.get(part)
        if got is None:
            found = []
            for c in range(1, k + n + 2):
                gb = open_genus(part, c)
                if gb is None:
                    continue
                val = _vir_at(part, c, gb)
                if val:
                    found.append((c, gb, val))
            got = tuple(found)
            options[part] = got
        return got

    # u^n s (d/ds)^{n+1}: blocks of s-derivatives of F^o
    if k >= 1:
        acc += Fraction(k) * _bell_blocks(rest_t, k - 1, n + 1, g - 1 - n,
                                          part_options)
    # (3n+3)/4 u^n (d/ds)^n
    if n == 0:
        if not rest and k == 0:
            acc += Fraction(3, 4)
    else:
        acc += Fraction(3 * n + 3, 4) * _bell_blocks(rest_t, k, n, g - 1 - n,
                                                     part_options)

    return acc / Fraction(double_factorial(2 * n + 3), two_pow)


def _bell_blocks(insertions: Multiset, extra_s: int, m_total: int,
                 genus_sum_base: int, part_options) -> Fraction:
    """Sum over products of s-derivative blocks of F^o.

    (d/ds)^{m_total} exp(F^o) / exp(F^o) expands over set partitions of the
    m_total labelled derivative slots; a block of size m_beta becomes an
    open bracket with m_beta + kappa_beta boundary markings after receiving
    kappa_beta of the `extra_s` further derivatives and a sub-multiset of
    the remaining interior insertions.  The u-power bookkeeping requires
    sum_beta (g_beta - 1) = genus_sum_base.

    The set-partition sum is evaluated by repeatedly peeling off the block
    that contains the lowest remaining derivative slot (every block holds at
    least one), which counts each partition exactly once; states are
    memoized on (remaining insertions, slots left, extras left, genus
    budget).
    """
    memo: Dict[Tuple[Multiset, int, int, int], Fraction] = {}

    def rec(rem: Multiset, m_left: int, s_left: int, budget: int) -> Fraction:
        if m_left == 0:
            if not rem and s_left == 0 and budget == 0:
                return Fraction(1)
            return Fraction(0)
        if budget < -m_left:  # each further block raises the budget by <= 1
            return Fraction(0)
        state = (rem, m_left, s_left, budget)
        got = memo.get(state)
        if got is not None:
            return got
        out = Fraction(0)
        for part, rest, ways in splits_cached(rem):
            for c, gb, val in part_options(part):
                step = budget - (gb - 1)
                m_hi = min(c, m_left)
                for m_b in range(max(1, c - s_left), m_hi + 1):
                    kappa = c - m_b
                    tail = rec(rest, m_left - m_b, s_left - kappa, step)
                    if tail:
                        out += (ways * comb(m_left - 1, m_b - 1)
                                * comb(s_left, kappa)) * val * tail
        memo[state] = out
        return out

    return rec(insertions, m_total, extra_s, genus_sum_base)


# ---------------------------------------------------------------------------
# Route 2: open KdV reduction
# ---------------------------------------------------------------------------

_kdv_memo: Dict[Tuple[Multiset, int], Fraction] = {}


def kdv_open_bracket(a: Iterable[int], k: int) -> Fraction:
    """All-genus open bracket from the open KdV system plus the string equation."""
    a = canon(a)
    g = open_genus(a, k)
    if g is None or not open_stable(g, k, len(a)):
        return Fraction(0)
    return _kdv_value(a, k)


def _kdv_at(a: Multiset, k: int, g_req: int) -> Fraction:
    if g_req < 0 or k < 0:
        return Fraction(0)
    g = open_genus(a, k)
    if g != g_req or not open_stable(g, k, len(a)):
        return Fraction(0)
    return _kdv_value(a, k)


def _kdv_value(a: Multiset, k: int) -> Fraction:
    key = (a, k)
    cached = _kdv_memo.get(key)
    if cached is not None:
        return cached
    g = open_genus(a, k)
    l = len(a)

    if l == 0:
        result = Fraction(1) if k == 3 else Fraction(0)
    elif a[0] == 0:
        if a == (0,) and k == 1:
            result = Fraction(1)
        else:
            result = _string_step(a, k, kdv_open_bracket)
    else:
        result = _kdv_recurse(a, k, g)
    _kdv_memo[key] = result
    return result


def _kdv_recurse(a: Multiset, k: int, g: int) -> Fraction:
    """Reduce the top index with the open KdV equation for n = max(a)."""
    n = a[-1]
    rest = canon(a[:-1])
    acc = Fraction(0)

    # 2 <<tau_{n-1} sigma>>: same insertions, one more boundary marking
    acc += 2 * _kdv_at(canon(rest + (n - 1,)), k + 1, g - 1)

    # 2 <<tau_{n-1}>> <<sigma>>: the second factor carries one built-in sigma
    for part1, part2, ways in splits_cached(rest):
        key1 = canon(part1 + (n - 1,))
        for k1 in range(k + 1):
            g1 = open_genus(key1, k1)
            g2 = open_genus(part2, k - k1 + 1)
            if g1 is None or g2 is None or g1 + g2 != g:
                continue
            left = _kdv_at(key1, k1, g1)
            if left:
                acc += 2 * ways * comb(k, k1) * left \
                    * _kdv_at(part2, k - k1 + 1, g2)

    # u <<tau_{n-1} tau_0>>^c <<tau_0>>^o
    for part1, part2, ways in splits_cached(rest):
        ckey = canon(part1 + (n - 1, 0))
        okey = canon(part2 + (0,))
        h = closed_genus(ckey)
        g1 = open_genus(okey, k)
        if h is None or g1 is None or g1 + 2 * h != g:
            continue
        cval = _closed_at(ckey, h)
        if cval:
            acc += ways * cval * _kdv_at(okey, k, g1)

    # -(u/2) <<tau_{n-1} tau_0^2>>^c: closed factor absorbs everything, no sigma
    if k == 0 and (g - 1) % 2 == 0:
        h = (g - 1) // 2
        acc -= Fraction(1, 2) * _closed_at(canon(rest + (n - 1, 0, 0)), h)

    return acc / (2 * n + 1)


# ---------------------------------------------------------------------------
# Potential builders
# ---------------------------------------------------------------------------

def iter_open_monomials(degree_cap: int, descendent_cap: int) -> Iterator[Tuple[Multiset, int, int]]:
    """Dimension-valid (indices, k, genus) triples within the caps."""
    for l in range(0, degree_cap + 1):
        for k in range(0, degree_cap - l + 1):
            if l == 0 and k == 0:
                continue
            g_max = (2 * l * descendent_cap + 3 - k - 2 * l) // 3
            for g in range(0, g_max + 1):
                num = 3 * g - 3 + k + 2 * l
                if num < 0 or num % 2:
                    continue
                for ms in bounded_multisets(num // 2, l, descendent_cap):
                    yield ms, k, g


def _build_potential(degree_cap: int, descendent_cap: int, value_fn) -> FormalSeries:
    coeffs: Dict[TSMonomial, Rational] = {}
    for ms, k, g in iter_open_monomials(degree_cap, descendent_cap):
        if not open_stable(g, k, len(ms)):
            continue
        value = value_fn(ms, k)
        if value == 0:
            continue
        sym = factorial(k)
        for v in set(ms):
            sym *= factorial(ms.count(v))
        t_exps: Dict[int, int] = {}
        for v in ms:
            t_exps[v] = t_exps.get(v, 0) + 1
        coeffs[monomial(t_exps, s=k, u=g - 1)] = value / sym
    return FormalSeries(degree_cap, descendent_cap, coeffs)


def build_Fo(degree_cap: int, descendent_cap: int) -> FormalSeries:
    """Truncation of F^o = sum_g u^{g-1} F^o_g via the Virasoro route."""
    return _build_potential(degree_cap, descendent_cap, virasoro_open_bracket)


def build_Fo_via_kdv(degree_cap: int, descendent_cap: int) -> FormalSeries:
    """Independent truncation of F^o via the open KdV route."""
    return _build_potential(degree_cap, descendent_cap, kdv_open_bracket)


__all__ = [
    "bracket_status",
    "build_Fo",
    "build_Fo_via_kdv",
    "genus_of_open",
    "iter_open_monomials",
    "kdv_open_bracket",
    "open_bracket",
    "open_genus0_bracket",
    "open_genus0_closed_form",
    "virasoro_open_bracket",
]
