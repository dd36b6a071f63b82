"""Bracket keys and the dimension bookkeeping they share.

A bracket is indexed by its sector (closed or open), genus, sorted multiset
of descendent indices, and -- in the open sector -- the number of boundary
markings.  The genus of a non-vanishing bracket is forced by the dimension
constraint:

    closed:  sum(a) = 3g - 3 + l
    open:   2 sum(a) = 3g - 3 + k + 2l

so most of the package passes around (a, k) and recovers g on demand.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Tuple

from .combinat import Multiset, canon

CLOSED = "closed"
OPEN = "open"


@dataclass(frozen=True)
class BracketKey:
    sector: str
    genus: int
    descendents: Multiset
    boundary: int = 0

    def __post_init__(self):
        if self.sector not in (CLOSED, OPEN):
            raise ValueError(f"unknown sector {self.sector!r}")
        if self.sector == CLOSED and self.boundary:
            raise ValueError("closed brackets carry no boundary markings")
        if self.genus < 0 or self.boundary < 0:
            raise ValueError("genus and boundary count must be non-negative")
        object.__setattr__(self, "descendents", canon(self.descendents))

    def __str__(self) -> str:
        taus = " ".join(f"tau_{a}" for a in self.descendents)
        if self.sector == CLOSED:
            return f"<{taus}>_{self.genus}^c" if taus else f"<>_{self.genus}^c"
        sigma = f" sigma^{self.boundary}" if self.boundary else ""
        return f"<{taus}{sigma}>_{self.genus}^o"


def closed_genus(a: Iterable[int]) -> Optional[int]:
    """The unique genus allowed by the closed dimension constraint, if any."""
    if not isinstance(a, tuple):
        a = tuple(a)
    num = sum(a) - len(a) + 3
    if num < 0 or num % 3:
        return None
    return num // 3


def open_genus(a: Iterable[int], k: int) -> Optional[int]:
    """The unique genus allowed by the open dimension constraint, if any."""
    if not isinstance(a, tuple):
        a = tuple(a)
    num = 2 * sum(a) + 3 - k - 2 * len(a)
    if num < 0 or num % 3:
        return None
    return num // 3


def closed_stable(g: int, l: int) -> bool:
    return 2 * g - 2 + l > 0


def open_stable(g: int, k: int, l: int) -> bool:
    return 2 * g - 2 + k + 2 * l > 0


__all__ = [
    "BracketKey",
    "CLOSED",
    "OPEN",
    "closed_genus",
    "open_genus",
    "closed_stable",
    "open_stable",
]
