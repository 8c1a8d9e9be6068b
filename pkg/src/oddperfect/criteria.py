"""Quadratic-residue rejection filters over candidate odd perfect shapes.

A shape fixes the prime support of a hypothetical odd perfect number
n = p1^a1 ... pk^ak * q^b (a_i even, b odd) and optionally the exact
exponents.  Every filter returns a three-valued verdict: REJECT means the
shape provably cannot be an odd perfect number, PASS only means it was not
excluded, and INCONCLUSIVE means the filter could not decide (either it
does not apply or the factoring budget ran out).

Shape text grammar: the even part in factorization syntax with even
exponents (or ``^even``), then ``@`` and the special prime with an odd
exponent (or ``^odd``), e.g. ``3^2*5^2*13^2@29^1`` or
``5^2*13^2*53^2@29^odd``.
"""

from __future__ import annotations

import enum
from collections.abc import Callable
from dataclasses import dataclass, field
from typing import Any

from .arith import legendre, legendre_two
from .errors import DomainError, GrammarError, IncompleteFactorization, UsageError
from .euler_form import evaluate_profile
from .factor import (
    DEFAULT_BUDGET,
    Factorization,
    _parse_terms,
    factorize,
    is_prime,
    sigma_prime_power,
    two_adic_valuation,
)


@dataclass(frozen=True)
class ShapeSpec:
    """Candidate odd perfect shape.

    ``even_exponents[i]`` is the exact even exponent of ``even_part[i]`` or
    None when only its parity is known; ``special_exponent`` likewise.
    Primes are kept in ascending order.
    """

    even_part: tuple[int, ...]
    special: int
    even_exponents: tuple[int | None, ...] | None = None
    special_exponent: int | None = None

    def __post_init__(self):
        even = tuple(self.even_part)
        exps = (None,) * len(even) if self.even_exponents is None else tuple(self.even_exponents)
        if len(exps) != len(even):
            raise DomainError("even_exponents must match even_part in length")
        pairs = sorted(zip(even, exps))
        object.__setattr__(self, "even_part", tuple(p for p, _ in pairs))
        object.__setattr__(self, "even_exponents", tuple(e for _, e in pairs))

        for p in (*self.even_part, self.special):
            if p < 3 or p % 2 == 0 or not is_prime(p):
                raise DomainError(f"shape primes must be odd primes, got {p}")
        if len(set(self.even_part)) != len(self.even_part):
            raise DomainError(f"duplicate prime in even part {self.even_part}")
        if self.special in self.even_part:
            raise DomainError(f"special prime {self.special} also appears in the even part")
        for p, e in pairs:
            if e is not None and (e < 2 or e % 2):
                raise DomainError(f"exponent of {p} must be even and >= 2, got {e}")
        b = self.special_exponent
        if b is not None and (b < 1 or b % 2 == 0):
            raise DomainError(f"special exponent must be odd and positive, got {b}")

    @property
    def primes(self) -> tuple[int, ...]:
        return (*self.even_part, self.special)

    @property
    def exact(self) -> bool:
        return self.special_exponent is not None and None not in self.even_exponents

    def prime_powers(self) -> list[tuple[int, int | None]]:
        return [*zip(self.even_part, self.even_exponents), (self.special, self.special_exponent)]

    def to_factorization(self) -> Factorization:
        if not self.exact:
            raise UsageError(f"shape {self} has parity-only exponents")
        return Factorization.from_dict(dict(self.prime_powers()))

    def with_exponents(self, even_exponents, special_exponent) -> ShapeSpec:
        return ShapeSpec(self.even_part, self.special, tuple(even_exponents), special_exponent)

    def __str__(self) -> str:
        even = "*".join(
            f"{p}^{'even' if e is None else e}" for p, e in zip(self.even_part, self.even_exponents)
        )
        b = "odd" if self.special_exponent is None else self.special_exponent
        return f"{even}@{self.special}^{b}"


def parse_shape(text: str) -> ShapeSpec:
    """Parse shape text; GrammarError positions index into the stripped text."""
    s = text.strip()
    at = s.find("@")
    if at < 0:
        raise GrammarError("missing '@' before the special prime", s, len(s))
    if s.find("@", at + 1) >= 0:
        raise GrammarError("more than one '@'", s, s.find("@", at + 1))

    primes: list[int] = []
    exps: list[int | None] = []
    if at > 0:
        prev = 0
        for p, e, pos in _parse_terms(s[:at]):
            if e == "even":
                e = None
            elif e is None:
                raise GrammarError(f"{p} needs an even exponent or ^even", s, pos)
            elif not isinstance(e, int) or e < 2 or e % 2:
                raise GrammarError(f"even-part exponent must be even and >= 2, got {e}", s, pos)
            if p < 3 or p % 2 == 0 or not is_prime(p):
                raise GrammarError(f"{p} is not an odd prime", s, pos)
            if p == prev:
                raise GrammarError(f"duplicate prime {p}", s, pos)
            if p < prev:
                raise GrammarError(f"primes must ascend, {p} follows {prev}", s, pos)
            prev = p
            primes.append(p)
            exps.append(e)

    special_terms = list(_parse_terms(s[at + 1 :], offset=at + 1))
    if len(special_terms) != 1:
        raise GrammarError("exactly one special prime expected after '@'", s, special_terms[1][2])
    q, b, pos = special_terms[0]
    if b == "odd":
        b = None
    elif b is None:
        b = 1
    elif not isinstance(b, int) or b % 2 == 0:
        raise GrammarError(f"special exponent must be odd, got {b}", s, pos)
    if q < 3 or q % 2 == 0 or not is_prime(q):
        raise GrammarError(f"{q} is not an odd prime", s, pos)
    if q in primes:
        raise GrammarError(f"special prime {q} already in the even part", s, pos)
    return ShapeSpec(tuple(primes), q, tuple(exps), b)


class Outcome(enum.Enum):
    REJECT = "reject"
    PASS = "pass"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class FilterVerdict:
    """Outcome of one criterion on one shape.

    ``undecided`` marks an INCONCLUSIVE caused by the factoring budget, as
    opposed to a criterion that simply does not apply to the shape.
    """

    criterion: str
    outcome: Outcome
    witness: dict[str, Any] | None = None
    reason: str | None = None
    undecided: bool = False

    @property
    def rejected(self) -> bool:
        return self.outcome is Outcome.REJECT


def _reject(criterion, witness):
    return FilterVerdict(criterion, Outcome.REJECT, witness=witness)


def _pass(criterion):
    return FilterVerdict(criterion, Outcome.PASS)


def _inconclusive(criterion, reason, undecided=False, witness=None):
    return FilterVerdict(criterion, Outcome.INCONCLUSIVE, witness, reason, undecided)


@dataclass(frozen=True)
class ResidueMatrix:
    """entries[i][j] = (primes[i] / primes[j]); the diagonal is 0."""

    primes: tuple[int, ...]
    entries: tuple[tuple[int, ...], ...]

    def has_nonzero_square(self) -> bool:
        return any(v == 1 for row in self.entries for v in row)

    def to_dict(self) -> dict[str, Any]:
        return {"primes": list(self.primes), "entries": [list(r) for r in self.entries]}


def residue_matrix(primes) -> ResidueMatrix:
    primes = tuple(primes)
    if len(set(primes)) != len(primes):
        raise DomainError(f"residue matrix needs distinct primes, got {primes}")
    entries = tuple(
        tuple(0 if i == j else legendre(pi, pj) for j, pj in enumerate(primes))
        for i, pi in enumerate(primes)
    )
    return ResidueMatrix(primes, entries)


def euler_form_filter(shape: ShapeSpec) -> FilterVerdict:
    # Parity-only even exponents behave exactly like 2 here.
    profile = [(p, 2 if e is None else e) for p, e in zip(shape.even_part, shape.even_exponents)]
    profile.append((shape.special, shape.special_exponent))
    report = evaluate_profile(profile, str(shape))
    if report.overall:
        return _pass("euler_form")
    return _reject(
        "euler_form", {"violated": {c.lemma: c.witness for c in report.checks if not c.satisfied}}
    )


def theorem1_filter(shape: ShapeSpec) -> FilterVerdict:
    """Reject when q = 5 mod 8 and every even-part prime is a square mod q.

    An odd perfect number of this shape needs an odd, hence nonzero,
    number of non-residues mod q among the even-part primes.
    """
    q = shape.special
    if q % 8 != 5:
        return _inconclusive("theorem1", f"not applicable: special prime {q} is {q % 8} mod 8")
    symbols = {p: legendre(p, q) for p in shape.even_part}
    if all(v == 1 for v in symbols.values()):
        return _reject("theorem1", {"modulus": q, "symbols": symbols})
    return _pass("theorem1")


def theorem2_filter(shape: ShapeSpec) -> FilterVerdict:
    """Reject when q = 1 mod 8 and no support prime is a nonzero square mod another."""
    q = shape.special
    if q % 8 != 1:
        return _inconclusive("theorem2", f"not applicable: special prime {q} is {q % 8} mod 8")
    matrix = residue_matrix(shape.primes)
    if matrix.has_nonzero_square():
        return _pass("theorem2")
    return _reject("theorem2", {"matrix": matrix.to_dict()})


def _require_exact(shape, what):
    if not shape.exact:
        raise UsageError(f"{what} needs exact exponents; got parity-only shape {shape}")


def support_filter(
    shape: ShapeSpec, budget: int = DEFAULT_BUDGET, seed: int = 0
) -> FilterVerdict:
    """Check that every sigma(p^a) only involves primes of the shape.

    For an odd perfect number each sigma(p_i^a_i) is odd and divides n,
    and sigma(q^b) is exactly twice a divisor of the even part.  The
    special prime power is checked first.
    """
    _require_exact(shape, "support filter")
    even = set(shape.even_part)
    support = set(shape.primes)
    order = [(shape.special, shape.special_exponent)] + list(
        zip(shape.even_part, shape.even_exponents)
    )
    pending = None
    for p, a in order:
        s = sigma_prime_power(p, a)
        v = two_adic_valuation(s)
        expected_v = 1 if p == shape.special else 0
        if v != expected_v:
            return _reject(
                "support",
                {"prime_power": f"{p}^{a}", "sigma": s, "two_adic_valuation": v,
                 "expected_valuation": expected_v},
            )
        allowed = even if p == shape.special else support
        odd = s >> v
        try:
            found = factorize(odd, budget, seed).as_dict()
            cofactor = 1
        except IncompleteFactorization as exc:
            found, cofactor = exc.found, exc.cofactor
        foreign = sorted(r for r in found if r not in allowed)
        if foreign:
            return _reject(
                "support",
                {"prime_power": f"{p}^{a}", "sigma": s, "foreign_primes": foreign},
            )
        if cofactor > 1 and pending is None:
            pending = {"prime_power": f"{p}^{a}", "sigma": s, "cofactor": cofactor}
    if pending is not None:
        return _inconclusive(
            "support", "budget exhausted: unfactored cofactor", undecided=True, witness=pending
        )
    return _pass("support")


@dataclass(frozen=True)
class ParityEntry:
    """Non-residue count for the odd part of sigma(p^a), modulo p.

    Since sigma(p^a) = 1 (mod p) is a square, the count of odd-multiplicity
    odd primes that are non-residues mod p has the parity of
    v * [ (2/p) = -1 ], v being the 2-adic valuation of sigma(p^a).
    """

    prime: int
    exponent: int
    sigma: int
    two_adic_valuation: int
    symbols: dict[int, int] = field(default_factory=dict)
    cofactor: int = 1

    @property
    def complete(self) -> bool:
        return self.cofactor == 1

    @property
    def nonresidue_count(self) -> int:
        return sum(1 for v in self.symbols.values() if v == -1)

    @property
    def parity(self) -> int:
        return self.nonresidue_count % 2

    @property
    def expected_parity(self) -> int:
        return int(self.two_adic_valuation % 2 == 1 and legendre_two(self.prime) == -1)

    @property
    def consistent(self) -> bool:
        return self.parity == self.expected_parity

    def to_dict(self) -> dict[str, Any]:
        d = {
            "prime": self.prime,
            "exponent": self.exponent,
            "sigma": self.sigma,
            "two_adic_valuation": self.two_adic_valuation,
            "symbols": {str(r): v for r, v in self.symbols.items()},
            "status": "certified" if self.complete else "inconclusive",
        }
        if self.complete:
            d.update(
                nonresidue_count=self.nonresidue_count,
                parity=self.parity,
                expected_parity=self.expected_parity,
                consistent=self.consistent,
            )
        else:
            d["cofactor"] = self.cofactor
        return d


def parity_entry(p: int, a: int, budget: int = DEFAULT_BUDGET, seed: int = 0) -> ParityEntry:
    s = sigma_prime_power(p, a)
    v = two_adic_valuation(s)
    try:
        exps = factorize(s >> v, budget, seed).as_dict()
        cofactor = 1
    except IncompleteFactorization as exc:
        exps, cofactor = exc.found, exc.cofactor
    symbols = {r: legendre(r, p) for r, e in sorted(exps.items()) if e % 2 == 1}
    return ParityEntry(p, a, s, v, symbols, cofactor)


@dataclass(frozen=True)
class ParityCertificate:
    shape: str
    entries: tuple[ParityEntry, ...]

    @property
    def complete(self) -> bool:
        return all(e.complete for e in self.entries)

    @property
    def contradictions(self) -> list[ParityEntry]:
        return [e for e in self.entries if e.complete and not e.consistent]

    def to_dict(self) -> dict[str, Any]:
        return {"shape": self.shape, "entries": [e.to_dict() for e in self.entries]}


def parity_certificate(
    shape: ShapeSpec, budget: int = DEFAULT_BUDGET, seed: int = 0
) -> ParityCertificate:
    """Certify the non-residue parity of every sigma(p^a) in an exact shape.

    Only meaningful for shapes the support filter does not reject; the
    parities themselves hold unconditionally.
    """
    _require_exact(shape, "parity certificate")
    entries = tuple(parity_entry(p, a, budget, seed) for p, a in shape.prime_powers())
    return ParityCertificate(str(shape), entries)


def parity_filter(shape: ShapeSpec, budget: int = DEFAULT_BUDGET, seed: int = 0) -> FilterVerdict:
    cert = parity_certificate(shape, budget, seed)
    bad = cert.contradictions
    if bad:
        return _reject("parity_certificate", {"entries": [e.to_dict() for e in bad]})
    if not cert.complete:
        return _inconclusive(
            "parity_certificate",
            "budget exhausted: unfactored cofactor",
            undecided=True,
            witness=cert.to_dict(),
        )
    return _pass("parity_certificate")


def _exact_only(name, fn):
    def run(shape, budget, seed):
        if not shape.exact:
            return _inconclusive(name, "not applicable: needs exact exponents")
        return fn(shape, budget, seed)

    return run


CRITERIA: dict[str, Callable[[ShapeSpec, int, int], FilterVerdict]] = {
    "euler_form": lambda s, budget, seed: euler_form_filter(s),
    "theorem1": lambda s, budget, seed: theorem1_filter(s),
    "theorem2": lambda s, budget, seed: theorem2_filter(s),
    "support": _exact_only("support", support_filter),
    "parity_certificate": _exact_only("parity_certificate", parity_filter),
}
"""Criteria in pipeline order, cheapest first."""


def apply_criterion(
    name: str, shape: ShapeSpec, budget: int = DEFAULT_BUDGET, seed: int = 0
) -> FilterVerdict:
    try:
        fn = CRITERIA[name]
    except KeyError:
        raise UsageError(
            f"unknown criterion {name!r}; expected one of {', '.join(CRITERIA)}"
        ) from None
    return fn(shape, budget, seed)
