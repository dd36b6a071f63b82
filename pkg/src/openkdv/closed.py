"""Closed-sector descendent integrals.

Genus 0 has the multinomial closed form

    <tau_{a_1} ... tau_{a_l}>_0 = (l-3)! / prod a_i!     when sum a_i = l-3.

All genus is solved by constraint propagation from the Virasoro equations
L_n exp(F^c) = 0: for a bracket whose largest index is b = n+1, the equation
for L_n isolates that bracket (through its leading -(2n+3)!!/2^{n+1}
d/dt_{n+1} term) in terms of brackets of strictly smaller stability weight
2g - 2 + l.  Values are memoized by the sorted index multiset; the genus of
a non-vanishing bracket is forced by the dimension constraint, so the
multiset alone is a complete key.
"""

from __future__ import annotations

from fractions import Fraction
from math import factorial
from typing import Dict, Iterable, Iterator, Optional, Tuple

from .brackets import closed_genus, closed_stable
from .combinat import (
    Multiset,
    bounded_multisets,
    canon,
    double_factorial,
    odd_product,
    splits_cached,
)
from .series import FormalSeries, Rational, TSMonomial, monomial

_memo: Dict[Multiset, Fraction] = {}


def closed_genus0(a: Iterable[int]) -> Fraction:
    """Genus-0 evaluation: the multinomial (l-3)! / prod(a_i!) or 0."""
    a = canon(a)
    l = len(a)
    if l < 3 or sum(a) != l - 3:
        return Fraction(0)
    denom = 1
    for x in a:
        denom *= factorial(x)
    return Fraction(factorial(l - 3), denom)


def closed_bracket(g: int, a: Iterable[int]) -> Fraction:
    """The closed bracket <tau_a>_g; zero off-dimension or unstable."""
    a = canon(a)
    if g < 0 or closed_genus(a) != g or not closed_stable(g, len(a)):
        return Fraction(0)
    return _value(a)


def _at(a: Multiset, g_req: int) -> Fraction:
    """Bracket value when the dimension-forced genus equals g_req, else 0."""
    if g_req < 0:
        return Fraction(0)
    g = closed_genus(a)
    if g != g_req or not closed_stable(g, len(a)):
        return Fraction(0)
    return _value(a)


def _value(a: Multiset) -> Fraction:
    """Virasoro propagation; a must be dimension-valid and stable."""
    cached = _memo.get(a)
    if cached is not None:
        return cached
    b = a[-1]
    if b == 0:
        # dimension forces l = 3 - 3g, so only <tau_0^3>_0 survives
        result = Fraction(1) if a == (0, 0, 0) else Fraction(0)
        _memo[a] = result
        return result

    g = closed_genus(a)
    n = b - 1
    rest = list(a[:-1])
    total = Fraction(0)

    # constant part of the dilaton operator (1/16, scaled by 2^{n+1})
    if n == 0 and not rest and g == 1:
        total += Fraction(1, 8)

    # t_i d/dt_{i+n} family: shift one remaining index up by n
    for v in sorted(set(rest)):
        mult = rest.count(v)
        shifted = canon([x for x in rest if x != v] + [v] * (mult - 1) + [v + n])
        coeff = Fraction(mult * odd_product(2 * v + 1, n + 1))
        if coeff:
            total += coeff * _at(shifted, g)

    # (u^2/2) d/dt_i d/dt_j family, i + j = n - 1
    rest_t = canon(rest)
    splits = splits_cached(rest_t) if n else ()
    for i in range(n):
        j = n - 1 - i
        w = Fraction(double_factorial(2 * i + 1) * double_factorial(2 * j + 1), 2)
        total += w * _at(canon(rest + [i, j]), g - 1)
        for part_i, part_j, ways in splits:
            key_i = canon(part_i + (i,))
            key_j = canon(part_j + (j,))
            g1 = closed_genus(key_i)
            g2 = closed_genus(key_j)
            if g1 is None or g2 is None or g1 + g2 != g:
                continue
            left = _at(key_i, g1)
            if left == 0:
                continue
            total += w * ways * left * _at(key_j, g2)

    result = total / double_factorial(2 * n + 3)
    _memo[a] = result
    return result


def iter_closed_monomials(degree_cap: int, descendent_cap: int) -> Iterator[Tuple[Multiset, int]]:
    """Dimension-valid index multisets within the caps, with their genus."""
    for l in range(1, degree_cap + 1):
        g = 0
        while True:
            target = 3 * g - 3 + l
            if target > l * descendent_cap:
                break
            if target >= 0:
                for ms in bounded_multisets(target, l, descendent_cap):
                    yield ms, g
            g += 1


def build_Fc(degree_cap: int, descendent_cap: int) -> FormalSeries:
    """Truncation of the closed potential F^c = sum_g u^{2g-2} F^c_g."""
    coeffs: Dict[TSMonomial, Rational] = {}
    for ms, g in iter_closed_monomials(degree_cap, descendent_cap):
        if not closed_stable(g, len(ms)):
            continue
        value = _value(ms)
        if value == 0:
            continue
        sym = 1
        for v in set(ms):
            sym *= factorial(ms.count(v))
        t_exps: Dict[int, int] = {}
        for v in ms:
            t_exps[v] = t_exps.get(v, 0) + 1
        coeffs[monomial(t_exps, u=2 * g - 2)] = value / sym
    return FormalSeries(degree_cap, descendent_cap, coeffs)


def check_closed_kdv(n: int, degree_cap: int, descendent_cap: int) -> bool:
    """Verify the n-th closed KdV equation on the solver output.

    The identity

      (2n+1) u^{-2} <<tau_n tau_0^2>> = <<tau_{n-1} tau_0>> <<tau_0^3>>
          + 2 <<tau_{n-1} tau_0^2>> <<tau_0^2>> + (1/4) <<tau_{n-1} tau_0^4>>

    is checked coefficient-exactly for every monomial with (t, s)-degree
    <= degree_cap and t-indices <= descendent_cap.  The potential is built
    internally with five extra degrees of slack (the deepest double bracket
    takes five derivatives), so every compared coefficient is exact.
    """
    if n < 1:
        raise ValueError("closed KdV equations are indexed by n >= 1")
    if n > descendent_cap:
        raise ValueError("descendent cap too small for d/dt_n")
    F = build_Fc(degree_cap + 5, descendent_cap)

    def db(*indices: int) -> FormalSeries:
        out = F
        for i in indices:
            out = out.deriv_t(i)
        return out

    lhs = db(n, 0, 0).mul_u(-2).scale(2 * n + 1)
    rhs = (db(n - 1, 0) * db(0, 0, 0)
           + (db(n - 1, 0, 0) * db(0, 0)).scale(2)
           + db(n - 1, 0, 0, 0, 0).scale(Fraction(1, 4)))
    diff = lhs - rhs
    return all(m.degree > degree_cap for m, _ in diff.items())


__all__ = [
    "build_Fc",
    "check_closed_kdv",
    "closed_bracket",
    "closed_genus0",
    "iter_closed_monomials",
]
