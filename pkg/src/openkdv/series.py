"""Truncated multivariate formal series over exact rationals.

A monomial lives in the variables t_0, t_1, ..., s and u, where the u
exponent may be negative (u tracks genus, so Laurent behaviour is
expected).  A series keeps two caps:

  * ``degree_cap``     -- maximum total (t, s)-degree retained;
  * ``descendent_cap`` -- maximum t-index retained.

Truncation acts on the (t, s)-degree only.  The u exponent is never
truncated: for every fixed (t, s)-monomial the dimension constraints of the
intersection theory force finitely many u-powers, so series stay finite.

All coefficients are ``fractions.Fraction`` (arbitrary precision, always in
lowest terms with positive denominator); there is no floating point anywhere
in the package.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, Iterator, Mapping, Tuple

Rational = Fraction

TExps = Tuple[Tuple[int, int], ...]


class CapError(ValueError):
    """A monomial or index fell outside the caps of a series."""


class CapMismatchError(CapError):
    """Two series with different caps were combined."""


@dataclass(frozen=True)
class TSMonomial:
    """A monomial u^u_exp * prod_i t_i^e_i * s^s_exp.

    ``t_exps`` is a tuple of (index, exponent) pairs, sorted by index, with
    no zero exponents stored.
    """

    t_exps: TExps = ()
    s_exp: int = 0
    u_exp: int = 0

    def __post_init__(self):
        if any(e <= 0 or i < 0 for i, e in self.t_exps):
            raise ValueError(f"malformed t exponents: {self.t_exps}")
        if list(self.t_exps) != sorted(self.t_exps):
            raise ValueError("t exponents must be sorted by index")
        if self.s_exp < 0:
            raise ValueError("negative s exponent")

    @property
    def degree(self) -> int:
        """Total (t, s)-degree; u does not count."""
        return sum(e for _, e in self.t_exps) + self.s_exp

    def max_t_index(self) -> int:
        return self.t_exps[-1][0] if self.t_exps else -1

    def t_exp(self, i: int) -> int:
        for j, e in self.t_exps:
            if j == i:
                return e
        return 0

    def sort_key(self):
        """Graded lexicographic: (degree, s_exp, t_exps by index, u_exp)."""
        return (self.degree, self.s_exp, self.t_exps, self.u_exp)

    def mul(self, other: "TSMonomial") -> "TSMonomial":
        exps: Dict[int, int] = dict(self.t_exps)
        for i, e in other.t_exps:
            exps[i] = exps.get(i, 0) + e
        return TSMonomial(
            tuple(sorted(exps.items())),
            self.s_exp + other.s_exp,
            self.u_exp + other.u_exp,
        )

    def __str__(self) -> str:
        parts = []
        if self.u_exp:
            parts.append(f"u^{self.u_exp}")
        for i, e in self.t_exps:
            parts.append(f"t{i}^{e}")
        if self.s_exp:
            parts.append(f"s^{self.s_exp}")
        return " ".join(parts) if parts else "1"


def monomial(t: Mapping[int, int] | Iterable[Tuple[int, int]] = (), s: int = 0, u: int = 0) -> TSMonomial:
    """Convenience constructor; drops zero t-exponents."""
    items = t.items() if isinstance(t, Mapping) else t
    return TSMonomial(tuple(sorted((i, e) for i, e in items if e)), s, u)


ONE = TSMonomial()


class FormalSeries:
    """Finite mapping TSMonomial -> Fraction under a pair of caps.

    Instances are immutable by convention: every operation returns a fresh
    series, so values are safe to share between concurrent workers.
    """

    __slots__ = ("degree_cap", "descendent_cap", "_coeffs")

    def __init__(self, degree_cap: int, descendent_cap: int,
                 coeffs: Mapping[TSMonomial, Rational] | None = None):
        if degree_cap < 0 or descendent_cap < 0:
            raise CapError("caps must be non-negative")
        self.degree_cap = degree_cap
        self.descendent_cap = descendent_cap
        store: Dict[TSMonomial, Rational] = {}
        if coeffs:
            for m, c in coeffs.items():
                if c == 0:
                    continue
                if m.degree > degree_cap or m.max_t_index() > descendent_cap:
                    raise CapError(f"monomial {m} violates caps ({degree_cap}, {descendent_cap})")
                store[m] = Fraction(c)
        self._coeffs = store

    # -- construction helpers -------------------------------------------

    @classmethod
    def zero(cls, degree_cap: int, descendent_cap: int) -> "FormalSeries":
        return cls(degree_cap, descendent_cap)

    @classmethod
    def one(cls, degree_cap: int, descendent_cap: int) -> "FormalSeries":
        return cls(degree_cap, descendent_cap, {ONE: Fraction(1)})

    def _build(self, coeffs: Dict[TSMonomial, Rational]) -> "FormalSeries":
        # Internal fast path: caller guarantees caps; zeros dropped here.
        out = FormalSeries(self.degree_cap, self.descendent_cap)
        out._coeffs.update((m, c) for m, c in coeffs.items() if c != 0)
        return out

    # -- inspection ------------------------------------------------------

    def coeff(self, m: TSMonomial) -> Rational:
        if m.degree > self.degree_cap or m.max_t_index() > self.descendent_cap:
            raise CapError(f"monomial {m} outside caps")
        return self._coeffs.get(m, Fraction(0))

    def items(self) -> Iterator[Tuple[TSMonomial, Rational]]:
        """Monomials in canonical (graded lexicographic) order."""
        for m in sorted(self._coeffs, key=TSMonomial.sort_key):
            yield m, self._coeffs[m]

    def __len__(self) -> int:
        return len(self._coeffs)

    def is_zero(self) -> bool:
        return not self._coeffs

    def __eq__(self, other) -> bool:
        if not isinstance(other, FormalSeries):
            return NotImplemented
        return (self.degree_cap == other.degree_cap
                and self.descendent_cap == other.descendent_cap
                and self._coeffs == other._coeffs)

    __hash__ = None  # mutable mapping inside; compare by value only

    def __repr__(self) -> str:
        n = len(self._coeffs)
        return f"FormalSeries(D={self.degree_cap}, N={self.descendent_cap}, {n} terms)"

    # -- ring operations -------------------------------------------------

    def _require_same_caps(self, other: "FormalSeries"):
        if (self.degree_cap != other.degree_cap
                or self.descendent_cap != other.descendent_cap):
            raise CapMismatchError(
                f"cap mismatch: ({self.degree_cap},{self.descendent_cap}) vs "
                f"({other.degree_cap},{other.descendent_cap})")

    def __add__(self, other: "FormalSeries") -> "FormalSeries":
        self._require_same_caps(other)
        out = dict(self._coeffs)
        for m, c in other._coeffs.items():
            out[m] = out.get(m, Fraction(0)) + c
        return self._build(out)

    def __neg__(self) -> "FormalSeries":
        return self.scale(Fraction(-1))

    def __sub__(self, other: "FormalSeries") -> "FormalSeries":
        return self + (-other)

    def scale(self, c: Rational | int) -> "FormalSeries":
        c = Fraction(c)
        if c == 0:
            return FormalSeries(self.degree_cap, self.descendent_cap)
        return self._build({m: c * v for m, v in self._coeffs.items()})

    def __mul__(self, other: "FormalSeries") -> "FormalSeries":
        self._require_same_caps(other)
        cap = self.degree_cap
        # Sort the smaller factor by degree so the inner loop can stop early.
        a = sorted(self._coeffs.items(), key=lambda mc: mc[0].degree)
        b = sorted(other._coeffs.items(), key=lambda mc: mc[0].degree)
        if len(a) > len(b):
            a, b = b, a
        out: Dict[TSMonomial, Rational] = {}
        for m1, c1 in a:
            budget = cap - m1.degree
            for m2, c2 in b:
                if m2.degree > budget:
                    break
                m = m1.mul(m2)
                prev = out.get(m)
                out[m] = c1 * c2 if prev is None else prev + c1 * c2
        return self._build(out)

    # -- calculus --------------------------------------------------------

    def deriv_t(self, i: int) -> "FormalSeries":
        if i > self.descendent_cap:
            raise CapError(f"t-index {i} above descendent cap {self.descendent_cap}")
        out: Dict[TSMonomial, Rational] = {}
        for m, c in self._coeffs.items():
            e = m.t_exp(i)
            if not e:
                continue
            exps = dict(m.t_exps)
            if e == 1:
                del exps[i]
            else:
                exps[i] = e - 1
            dm = TSMonomial(tuple(sorted(exps.items())), m.s_exp, m.u_exp)
            out[dm] = out.get(dm, Fraction(0)) + c * e
        return self._build(out)

    def deriv_s(self) -> "FormalSeries":
        out: Dict[TSMonomial, Rational] = {}
        for m, c in self._coeffs.items():
            if not m.s_exp:
                continue
            dm = TSMonomial(m.t_exps, m.s_exp - 1, m.u_exp)
            out[dm] = out.get(dm, Fraction(0)) + c * m.s_exp
        return self._build(out)

    def mul_t(self, i: int) -> "FormalSeries":
        if i > self.descendent_cap:
            raise CapError(f"t-index {i} above descendent cap {self.descendent_cap}")
        out: Dict[TSMonomial, Rational] = {}
        for m, c in self._coeffs.items():
            if m.degree + 1 > self.degree_cap:
                continue
            exps = dict(m.t_exps)
            exps[i] = exps.get(i, 0) + 1
            out[TSMonomial(tuple(sorted(exps.items())), m.s_exp, m.u_exp)] = c
        return self._build(out)

    def mul_s(self) -> "FormalSeries":
        out: Dict[TSMonomial, Rational] = {}
        for m, c in self._coeffs.items():
            if m.degree + 1 > self.degree_cap:
                continue
            out[TSMonomial(m.t_exps, m.s_exp + 1, m.u_exp)] = c
        return self._build(out)

    def mul_u(self, e: int) -> "FormalSeries":
        if e == 0:
            return self
        return self._build({
            TSMonomial(m.t_exps, m.s_exp, m.u_exp + e): c
            for m, c in self._coeffs.items()
        })

    def u_slice(self, e: int) -> "FormalSeries":
        """The sub-series of monomials with u exponent exactly e."""
        return self._build({m: c for m, c in self._coeffs.items() if m.u_exp == e})

    def u_exponents(self) -> set:
        return {m.u_exp for m in self._coeffs}

    # -- exponential -----------------------------------------------------

    def exp(self) -> "FormalSeries":
        """Truncated exponential sum_{m<=D} self^m / m!.

        Requires every monomial of the input to have (t, s)-degree >= 1, so
        the sum is finite at the degree cap.  (For the generating functions
        handled here this holds because the empty bracket vanishes.)
        """
        for m in self._coeffs:
            if m.degree == 0:
                raise ValueError(
                    "exp requires input with no (t,s)-degree-0 part; "
                    f"found {m}")
        result = FormalSeries.one(self.degree_cap, self.descendent_cap)
        term = FormalSeries.one(self.degree_cap, self.descendent_cap)
        for order in range(1, self.degree_cap + 1):
            term = (term * self).scale(Fraction(1, order))
            if term.is_zero():
                break
            result = result + term
        return result

    # -- text dump -------------------------------------------------------

    def dumps(self) -> str:
        """Canonical text form: one `monomial : p/q` line per monomial."""
        if not self._coeffs:
            return "0\n"
        lines = [f"{m} : {c}" for m, c in self.items()]
        return "\n".join(lines) + "\n"


__all__ = [
    "CapError",
    "CapMismatchError",
    "FormalSeries",
    "Rational",
    "TSMonomial",
    "monomial",
]
