"""Exact computations on the four Severi varieties and their secant cubics.

The varieties are the rank-one loci in the cubic Jordan algebras Herm_3(A)
for the split composition algebras A of dimension 1, 2, 4, 8; the secant
variety is the cubic norm hypersurface.  All arithmetic is exact, over a
prime field or the rationals.
"""

from .jordan import MODELS, JordanSpace, jordan_space
from .linalg import DEFAULT_PRIMES, PrimeField, RationalField, make_field

__all__ = [
    "DEFAULT_PRIMES",
    "MODELS",
    "JordanSpace",
    "PrimeField",
    "RationalField",
    "jordan_space",
    "make_field",
]
__version__ = "0.1.0"
