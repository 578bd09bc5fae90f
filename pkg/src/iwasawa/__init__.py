"""Reconstruct a real semisimple Lie algebra from its Iwasawa subalgebra."""

from .algebra import FormatError, InconsistencyError, LieAlgebra, Subspace, UnsupportedInput
from .reconstruct import compare_iwasawa, reconstruct_from_iwasawa

__all__ = [
    "FormatError",
    "InconsistencyError",
    "LieAlgebra",
    "Subspace",
    "UnsupportedInput",
    "compare_iwasawa",
    "reconstruct_from_iwasawa",
]
