"""Modular exponentiation and quadratic residue symbols.

All functions take and return plain Python ints (arbitrary precision).
Symbol values are the ints -1, 0 and +1.
"""

from __future__ import annotations

from .errors import DomainError
from .factor import is_prime


def mod_pow(base: int, exponent: int, modulus: int) -> int:
    """Return ``base**exponent % modulus`` in O(log exponent) multiplications."""
    if modulus < 2:
        raise DomainError(f"modulus must be >= 2, got {modulus}")
    if exponent < 0:
        raise DomainError(f"exponent must be >= 0, got {exponent}")
    return pow(base, exponent, modulus)


def require_odd_prime(p: int, name: str = "p") -> int:
    if p < 3 or p % 2 == 0 or not is_prime(p):
        raise DomainError(f"{name} must be an odd prime, got {p}")
    return p


def legendre(a: int, p: int) -> int:
    """Legendre symbol (a/p) by Euler's criterion.

    ``a`` is reduced mod ``p`` first, so negative and oversized numerators
    are accepted.
    """
    require_odd_prime(p)
    a %= p
    if a == 0:
        return 0
    r = mod_pow(a, (p - 1) // 2, p)
    return -1 if r == p - 1 else 1


def legendre_two(q: int) -> int:
    """(2/q) = (-1)**((q*q - 1)/8), read off the residue of q mod 8."""
    require_odd_prime(q, "q")
    return -1 if q % 8 in (3, 5) else 1


def jacobi(a: int, n: int) -> int:
    """Jacobi symbol (a/n) for odd n >= 1, without factoring n."""
    if n <= 0 or n % 2 == 0:
        raise DomainError(f"Jacobi denominator must be odd and positive, got {n}")
    a %= n
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def reciprocity_pair(p1: int, p2: int) -> tuple[int, int]:
    """Return ((p2/p1), (p1/p2)) for distinct odd primes.

    The two values are opposite exactly when both primes are 3 mod 4.
    """
    require_odd_prime(p1, "p1")
    require_odd_prime(p2, "p2")
    if p1 == p2:
        raise DomainError(f"reciprocity pair needs distinct primes, got {p1} twice")
    return legendre(p2, p1), legendre(p1, p2)
