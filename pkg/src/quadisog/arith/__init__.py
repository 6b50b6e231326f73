from .primes import (
    divisors,
    euler_phi,
    factor,
    fundamental_discriminant,
    is_prime,
    is_squarefree,
    kronecker,
    next_prime,
    prime_divisors,
    primes_up_to,
    sqrt_mod,
    squarefree_part,
)
from .quadfield import Q, QuadField, QuadFieldElem
from .poly import UniPoly

__all__ = [
    "Q",
    "QuadField",
    "QuadFieldElem",
    "UniPoly",
    "divisors",
    "euler_phi",
    "factor",
    "fundamental_discriminant",
    "is_prime",
    "is_squarefree",
    "kronecker",
    "next_prime",
    "prime_divisors",
    "primes_up_to",
    "sqrt_mod",
    "squarefree_part",
]
