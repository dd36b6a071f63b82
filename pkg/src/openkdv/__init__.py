"""Exact computation and verification engine for descendent integrals on
moduli of genus-0 closed curves and marked disks."""

from .brackets import BracketKey, closed_genus, open_genus
from .closed import build_Fc, check_closed_kdv, closed_bracket, closed_genus0
from .disk import (
    bracket_status,
    build_Fo,
    build_Fo_via_kdv,
    genus_of_open,
    kdv_open_bracket,
    open_bracket,
    open_genus0_bracket,
    open_genus0_closed_form,
    virasoro_open_bracket,
)
from .operators import DiffOperator, closed_virasoro, commutator_check, open_virasoro
from .series import CapError, CapMismatchError, FormalSeries, TSMonomial, monomial

__version__ = "0.1.0"

__all__ = [
    "BracketKey",
    "CapError",
    "CapMismatchError",
    "DiffOperator",
    "FormalSeries",
    "TSMonomial",
    "bracket_status",
    "build_Fc",
    "build_Fo",
    "build_Fo_via_kdv",
    "check_closed_kdv",
    "closed_bracket",
    "closed_genus",
    "closed_genus0",
    "closed_virasoro",
    "commutator_check",
    "genus_of_open",
    "kdv_open_bracket",
    "monomial",
    "open_bracket",
    "open_genus",
    "open_genus0_bracket",
    "open_genus0_closed_form",
    "open_virasoro",
    "virasoro_open_bracket",
]
