"""Primality, factorization and divisor-sum arithmetic.

The factorization text grammar is ``p^e`` terms joined by ``*``, primes
strictly ascending, ``^1`` optional, e.g. ``3^2*7^2*13``.  The literal
``1`` denotes the empty factorization.
"""

from __future__ import annotations

import enum
import math
import random
import re
from collections.abc import Iterator
from dataclasses import dataclass
from functools import cached_property

from .errors import DomainError, GrammarError, IncompleteFactorization

DEFAULT_BUDGET = 10**6
"""Default number of Pollard-Brent iterations a single factorize call may spend."""

TRIAL_BOUND = 1000

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
# These thirteen bases are a proof of primality for every n < 3.317e24.
_MR_DETERMINISTIC_LIMIT = 3_317_044_064_679_887_385_961_981


def primes_up_to(limit: int) -> list[int]:
    if limit < 2:
        return []
    flags = bytearray([1]) * (limit + 1)
    flags[0:2] = b"\x00\x00"
    for i in range(2, math.isqrt(limit) + 1):
        if flags[i]:
            flags[i * i :: i] = bytes(len(range(i * i, limit + 1, i)))
    return [i for i, f in enumerate(flags) if f]


SMALL_PRIMES = tuple(primes_up_to(TRIAL_BOUND))


def _strong_probable_prime(n: int, a: int, d: int, s: int) -> bool:
    x = pow(a, d, n)
    if x == 1 or x == n - 1:
        return True
    for _ in range(s - 1):
        x = x * x % n
        if x == n - 1:
            return True
    return False


def is_prime(n: int, rounds: int = 40) -> bool:
    """Miller-Rabin primality test.

    Exact for every n below 2**64 (in fact below 3.3e24) thanks to a fixed
    witness set.  Larger n additionally get ``rounds`` pseudo-random
    witnesses seeded from n itself, so the answer is reproducible but only
    probabilistic (error below 4**-rounds).
    """
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    if n < 43 * 43:
        return True
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    if not all(_strong_probable_prime(n, a, d, s) for a in _MR_BASES):
        return False
    if n < _MR_DETERMINISTIC_LIMIT:
        return True
    rng = random.Random(n)
    return all(_strong_probable_prime(n, rng.randrange(2, n - 1), d, s) for _ in range(rounds))


@dataclass(frozen=True, order=True)
class PrimePower:
    prime: int
    exponent: int

    def __post_init__(self):
        if self.exponent < 1:
            raise DomainError(f"exponent must be >= 1, got {self.exponent} on {self.prime}")
        if not is_prime(self.prime):
            raise DomainError(f"{self.prime} is not prime")

    @property
    def value(self) -> int:
        return self.prime**self.exponent

    def __str__(self) -> str:
        return str(self.prime) if self.exponent == 1 else f"{self.prime}^{self.exponent}"


@dataclass(frozen=True)
class Factorization:
    """Canonical prime factorization: parts strictly ascending by prime."""

    parts: tuple[PrimePower, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "parts", tuple(self.parts))
        for a, b in zip(self.parts, self.parts[1:]):
            if a.prime >= b.prime:
                raise DomainError(
                    f"primes must be strictly ascending, got {a.prime} before {b.prime}"
                )

    @classmethod
    def from_dict(cls, exponents: dict[int, int]) -> Factorization:
        return cls(tuple(PrimePower(p, e) for p, e in sorted(exponents.items()) if e))

    @classmethod
    def _trusted(cls, exponents: dict[int, int]) -> Factorization:
        # Skips primality checks; only for primes produced by factorize itself.
        f = object.__new__(cls)
        parts = []
        for p, e in sorted(exponents.items()):
            pp = object.__new__(PrimePower)
            object.__setattr__(pp, "prime", p)
            object.__setattr__(pp, "exponent", e)
            parts.append(pp)
        object.__setattr__(f, "parts", tuple(parts))
        return f

    @cached_property
    def value(self) -> int:
        return math.prod(pp.value for pp in self.parts)

    @property
    def primes(self) -> list[int]:
        return [pp.prime for pp in self.parts]

    def as_dict(self) -> dict[int, int]:
        return {pp.prime: pp.exponent for pp in self.parts}

    def __iter__(self) -> Iterator[PrimePower]:
        return iter(self.parts)

    def __len__(self) -> int:
        return len(self.parts)

    def __str__(self) -> str:
        return "*".join(str(pp) for pp in self.parts) or "1"


def _parse_terms(text: str, offset: int = 0) -> Iterator[tuple[int, int | str | None, int]]:
    """Yield (prime, exponent text, position) for each ``*``-separated term.

    Exponents are returned raw so that callers can accept keywords like
    ``odd`` or ``even``.
    """
    pos = 0
    term = re.compile(r"(\d+)(?:\^(\w+))?")
    while True:
        m = term.match(text, pos)
        if m is None:
            raise GrammarError("expected a prime", text, pos + offset)
        exp = m.group(2)
        if exp is not None and exp.isdigit():
            exp = int(exp)
        yield int(m.group(1)), exp, pos + offset
        pos = m.end()
        if pos == len(text):
            return
        if text[pos] != "*":
            raise GrammarError(f"unexpected character {text[pos]!r}", text, pos + offset)
        pos += 1


def parse_factorization(text: str) -> Factorization:
    """Parse ``3^2*7^2*13`` style text; errors carry the offending position."""
    stripped = text.strip()
    if stripped == "1":
        return Factorization()
    parts = []
    prev = 0
    for prime, exp, pos in _parse_terms(stripped):
        if exp is None:
            exp = 1
        if not isinstance(exp, int):
            raise GrammarError(f"exponent must be a positive integer, got {exp!r}", stripped, pos)
        if exp < 1:
            raise GrammarError("exponent must be >= 1", stripped, pos)
        if not is_prime(prime):
            raise GrammarError(f"{prime} is not prime", stripped, pos)
        if prime == prev:
            raise GrammarError(f"duplicate prime {prime}", stripped, pos)
        if prime < prev:
            raise GrammarError(f"primes must ascend, {prime} follows {prev}", stripped, pos)
        prev = prime
        parts.append(PrimePower(prime, exp))
    return Factorization(tuple(parts))


class _Budget:
    def __init__(self, limit: int):
        self.left = limit

    def spend(self, k: int) -> bool:
        self.left -= k
        return self.left >= 0


def _brent(n: int, rng: random.Random, budget: _Budget) -> int | None:
    """Return a nontrivial factor of composite odd n, or None when out of budget."""
    while budget.left > 0:
        y, c, m = rng.randrange(1, n), rng.randrange(1, n), 128
        g = r = q = 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            if not budget.spend(r):
                return None
            k = 0
            while k < r and g == 1:
                ys = y
                steps = min(m, r - k)
                for _ in range(steps):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                if not budget.spend(steps):
                    return None
                g = math.gcd(q, n)
                k += m
            r *= 2
        if g == n:
            # The batched gcd overshot; step back one iteration at a time.
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
                if not budget.spend(1):
                    return None
        if g != n:
            return g
    return None


def factorize(n: int, budget: int = DEFAULT_BUDGET, seed: int = 0) -> Factorization:
    """Factor n by trial division up to 1000, then Pollard-Brent rho.

    ``budget`` caps the total number of rho iterations and ``seed`` fixes
    the random starting points, so results and failures are reproducible.
    Raises IncompleteFactorization when the budget runs out.
    """
    if n < 1:
        raise DomainError(f"can only factor positive integers, got {n}")
    found: dict[int, int] = {}
    m = n
    for p in SMALL_PRIMES:
        if p * p > m:
            break
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            found[p] = e
    if 1 < m < TRIAL_BOUND * TRIAL_BOUND:
        # m has no prime factor up to its square root.
        found[m] = found.get(m, 0) + 1
        m = 1
    if m == 1:
        return Factorization._trusted(found)

    rng = random.Random(seed)
    remaining = _Budget(budget)
    stack = [m]
    cofactor = 1
    while stack:
        c = stack.pop()
        if c == 1:
            continue
        if is_prime(c):
            found[c] = found.get(c, 0) + 1
            continue
        r = math.isqrt(c)
        if r * r == c:
            stack += [r, r]
            continue
        d = _brent(c, rng, remaining)
        if d is None:
            cofactor *= c
            continue
        stack += [d, c // d]
    if cofactor > 1:
        raise IncompleteFactorization(n, found, cofactor)
    return Factorization._trusted(found)


def sigma_prime_power(p: int, a: int) -> int:
    """1 + p + ... + p**a via the exact quotient (p**(a+1) - 1) // (p - 1)."""
    if a < 0:
        raise DomainError(f"exponent must be >= 0, got {a}")
    if p < 2:
        raise DomainError(f"{p} is not prime")
    return (p ** (a + 1) - 1) // (p - 1)


def sigma(f: Factorization) -> int:
    return math.prod(sigma_prime_power(pp.prime, pp.exponent) for pp in f.parts)


def divisor_count(f: Factorization) -> int:
    return math.prod(pp.exponent + 1 for pp in f.parts)


def divisors(f: Factorization) -> list[int]:
    """All divisors, ascending, built as products p1^b1...pk^bk."""
    divs = [1]
    for pp in f.parts:
        divs = [d * pp.prime**b for d in divs for b in range(pp.exponent + 1)]
    return sorted(divs)


class Kind(enum.Enum):
    DEFICIENT = "deficient"
    PERFECT = "perfect"
    ABUNDANT = "abundant"

    def __str__(self) -> str:
        return self.value.capitalize()


@dataclass(frozen=True)
class Classification:
    n: int
    kind: Kind
    sigma: int

    @property
    def aliquot_sum(self) -> int:
        """Sum of proper divisors, 1 included."""
        return self.sigma - self.n


def classify(n: int, budget: int = DEFAULT_BUDGET, seed: int = 0) -> Classification:
    if n < 2:
        raise DomainError(f"classify needs n >= 2, got {n}")
    s = sigma(factorize(n, budget, seed))
    if s == 2 * n:
        kind = Kind.PERFECT
    elif s < 2 * n:
        kind = Kind.DEFICIENT
    else:
        kind = Kind.ABUNDANT
    return Classification(n, kind, s)


def two_adic_valuation(n: int) -> int:
    if n == 0:
        raise DomainError("2-adic valuation of 0 is undefined")
    return (n & -n).bit_length() - 1
