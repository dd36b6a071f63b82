"""Virasoro-type differential operators acting on truncated series.

An operator is a finite sum of normal-ordered terms

    coeff * u^p * (prod t_i) * s^j * (prod d/dt_i) * (d/ds)^r ,

i.e. all multiplications are applied after all derivatives.  The closed-
sector operators indexed by n >= -1 satisfy [L_n, L_m] = (n-m) L_{n+m} and
annihilate exp(F^c); the open extension adds two s-terms per operator and
satisfies the same bracket.

Instantiating an operator requires a descendent cap N: the infinite families
sum_i t_i d/dt_{i+n} are cut by the rule "drop any term whose derivative
index exceeds N".  Dropped terms annihilate every monomial whose t-indices
respect the cap, so the cut is exact on capped series.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Tuple

from .combinat import double_factorial, falling, odd_product
from .series import CapError, FormalSeries, Rational, TSMonomial


@dataclass(frozen=True)
class OpTerm:
    coeff: Rational
    u_power: int = 0
    t_mult: Tuple[int, ...] = ()     # multiset of t-indices multiplied in
    s_mult: int = 0                  # power of s multiplied in
    t_derivs: Tuple[int, ...] = ()   # multiset of differentiated t-indices
    s_derivs: int = 0                # order of d/ds

    def describe(self) -> str:
        bits = []
        if self.coeff != 1 or not (self.t_mult or self.s_mult or self.t_derivs or self.s_derivs or self.u_power):
            bits.append(str(self.coeff))
        if self.u_power:
            bits.append(f"u^{self.u_power}")
        for i in self.t_mult:
            bits.append(f"t{i}")
        if self.s_mult:
            bits.append(f"s^{self.s_mult}" if self.s_mult > 1 else "s")
        for i in self.t_derivs:
            bits.append(f"d/dt{i}")
        if self.s_derivs:
            bits.append(f"(d/ds)^{self.s_derivs}" if self.s_derivs > 1 else "d/ds")
        return " ".join(bits)


class DiffOperator:
    """Finite sum of OpTerms; linear action on FormalSeries."""

    __slots__ = ("terms",)

    def __init__(self, terms):
        self.terms = tuple(t for t in terms if t.coeff != 0)

    def __add__(self, other: "DiffOperator") -> "DiffOperator":
        return DiffOperator(self.terms + other.terms)

    def scale(self, c: Rational | int) -> "DiffOperator":
        c = Fraction(c)
        return DiffOperator(
            OpTerm(t.coeff * c, t.u_power, t.t_mult, t.s_mult, t.t_derivs, t.s_derivs)
            for t in self.terms)

    def describe(self) -> str:
        """Pretty-print, one term per line, for audit against the notation."""
        if not self.terms:
            return "0"
        return "\n".join(t.describe() for t in self.terms)

    def apply(self, f: FormalSeries) -> FormalSeries:
        """Exact term-by-term action, re-truncated to the caps of f."""
        cap_d, cap_n = f.degree_cap, f.descendent_cap
        for term in self.terms:
            for i in term.t_mult + term.t_derivs:
                if i > cap_n:
                    raise CapError(
                        f"operator touches t{i} beyond descendent cap {cap_n}")
        out: Dict[TSMonomial, Rational] = {}
        for term in self.terms:
            for m, c in f._coeffs.items():
                value = c * term.coeff
                exps = dict(m.t_exps)
                ok = True
                for i in term.t_derivs:
                    e = exps.get(i, 0)
                    if not e:
                        ok = False
                        break
                    value *= e
                    if e == 1:
                        del exps[i]
                    else:
                        exps[i] = e - 1
                if not ok:
                    continue
                s = m.s_exp
                if term.s_derivs:
                    if s < term.s_derivs:
                        continue
                    value *= falling(s, term.s_derivs)
                    s -= term.s_derivs
                for i in term.t_mult:
                    exps[i] = exps.get(i, 0) + 1
                s += term.s_mult
                new = TSMonomial(tuple(sorted(exps.items())), s, m.u_exp + term.u_power)
                if new.degree > cap_d:
                    continue
                prev = out.get(new)
                out[new] = value if prev is None else prev + value
        result = FormalSeries(cap_d, cap_n)
        result._coeffs.update((m, v) for m, v in out.items() if v != 0)
        return result


def closed_virasoro(n: int, descendent_cap: int) -> DiffOperator:
    """The closed-sector Virasoro operator L_n, cut at the descendent cap.

    L_{-1} (string) and L_0 (dilaton) carry their constant/quadratic parts;
    for n >= 1 the operator has the leading -(3*5*...*(2n+3)/2^{n+1}) d/dt_{n+1}
    term, the t_i d/dt_{i+n} family and the (u^2/2) second-derivative family.
    """
    if n < -1:
        raise ValueError(f"Virasoro index must be >= -1, got {n}")
    N = descendent_cap
    terms = []
    half = Fraction(1, 2)
    if n == -1:
        terms.append(OpTerm(Fraction(-1), t_derivs=(0,)))
        terms.append(OpTerm(half, u_power=-2, t_mult=(0, 0)))
        for i in range(0, N):  # multiplier t_{i+1}, derivative index i <= N-1
            terms.append(OpTerm(Fraction(1), t_mult=(i + 1,), t_derivs=(i,)))
        return DiffOperator(terms)

    two_pow = 2 ** (n + 1)
    lead = Fraction(double_factorial(2 * n + 3), two_pow)
    if n + 1 <= N:
        terms.append(OpTerm(-lead, t_derivs=(n + 1,)))
    for i in range(0, N - n + 1):  # derivative index i + n <= N
        coeff = Fraction(odd_product(2 * i + 1, n + 1), two_pow)
        terms.append(OpTerm(coeff, t_mult=(i,), t_derivs=(i + n,)))
    if n == 0:
        terms.append(OpTerm(Fraction(1, 16)))
    else:
        for i in range(0, n):
            # (-1)^{i+1} (-2i-1)(-2i+1)...(-2i+2n-1) / 2^{n+1}, times u^2/2
            prod = 1
            for m in range(n + 1):
                prod *= -2 * i - 1 + 2 * m
            sign = -1 if (i + 1) % 2 else 1
            coeff = Fraction(sign * prod, two_pow) * half
            terms.append(OpTerm(coeff, u_power=2, t_derivs=tuple(sorted((i, n - 1 - i)))))
    return DiffOperator(terms)


def open_virasoro(n: int, descendent_cap: int) -> DiffOperator:
    """The s-extension of L_n:  L_n + u^n s (d/ds)^{n+1} + (3n+3)/4 u^n (d/ds)^n.

    At n = -1 the first extra term degenerates to multiplication by u^{-1} s
    and the second has coefficient zero, hence is absent.
    """
    op = closed_virasoro(n, descendent_cap)
    extra = [OpTerm(Fraction(1), u_power=n, s_mult=1, s_derivs=n + 1)]
    dilaton_like = Fraction(3 * n + 3, 4)
    if dilaton_like != 0:
        extra.append(OpTerm(dilaton_like, u_power=n, s_derivs=n))
    return op + DiffOperator(extra)


def commutator_check(n: int, m: int, descendent_cap: int, degree_cap: int) -> bool:
    """Check [L_n, L_m] = (n-m) L_{n+m} for the open operators.

    The check applies both sides to every (t, s)-monomial with total degree
    <= degree_cap and t-indices <= descendent_cap.  Caps are inflated
    internally (degree +4, index +2) so that no truncation occurs for these
    inputs; within this window the comparison is exact.
    """
    if n < -1 or m < -1:
        raise ValueError("Virasoro indices must be >= -1")
    if n == m:
        return True  # antisymmetric bracket, zero on both sides
    big_n = descendent_cap + 2
    big_d = degree_cap + 4
    op_n = open_virasoro(n, big_n)
    op_m = open_virasoro(m, big_n)
    op_nm = open_virasoro(n + m, big_n)
    for mono in _window_monomials(degree_cap, descendent_cap):
        f = FormalSeries(big_d, big_n, {mono: Fraction(1)})
        lhs = op_n.apply(op_m.apply(f)) - op_m.apply(op_n.apply(f))
        rhs = op_nm.apply(f).scale(n - m)
        if lhs != rhs:
            return False
    return True


def _window_monomials(degree_cap: int, descendent_cap: int):
    """All monomials (u_exp = 0) with degree <= degree_cap, index <= cap."""
    def rec(slots: int, lo: int):
        # lo ranges over 0..descendent_cap for t-indices, descendent_cap+1 = s
        yield ()
        if slots == 0:
            return
        for v in range(lo, descendent_cap + 2):
            for rest in rec(slots - 1, v):
                yield (v,) + rest

    for combo in rec(degree_cap, 0):
        t: Dict[int, int] = {}
        s = 0
        for v in combo:
            if v == descendent_cap + 1:
                s += 1
            else:
                t[v] = t.get(v, 0) + 1
        yield TSMonomial(tuple(sorted(t.items())), s, 0)


__all__ = [
    "DiffOperator",
    "OpTerm",
    "closed_virasoro",
    "open_virasoro",
    "commutator_check",
]
