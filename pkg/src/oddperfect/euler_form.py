"""Structural necessary conditions on odd perfect factorizations.

Any odd perfect number must factor as p1^a1 ... pk^ak * q^b with every
a_i even, k >= 2 and q = b = 1 (mod 4).  ``check_euler_form`` tests a
concrete factorization against each of the individual conditions, and
``verify_lemma_numeric`` sweeps a bounded domain checking the arithmetic
facts those conditions rest on.
"""

from __future__ import annotations

import enum
import random
from dataclasses import dataclass, field

import numpy as np

from .arith import legendre
from .errors import DomainError, UsageError
from .factor import (
    DEFAULT_BUDGET,
    Factorization,
    divisor_count,
    factorize,
    primes_up_to,
    sigma_prime_power,
)

LEMMAS = ("L0", "L2", "L3", "L4", "L5", "L6")


class Status(enum.Enum):
    SATISFIED = "satisfied"
    VIOLATED = "violated"


@dataclass(frozen=True)
class LemmaCheck:
    lemma: str
    status: Status
    witness: str = ""

    @property
    def satisfied(self) -> bool:
        return self.status is Status.SATISFIED


@dataclass(frozen=True)
class EulerFormReport:
    factorization: str
    checks: tuple[LemmaCheck, ...]

    @property
    def overall(self) -> bool:
        return all(c.satisfied for c in self.checks)

    def violated(self) -> list[str]:
        return [c.lemma for c in self.checks if not c.satisfied]

    def __getitem__(self, lemma: str) -> LemmaCheck:
        for c in self.checks:
            if c.lemma == lemma:
                return c
        raise KeyError(lemma)


def _ok(lemma, detail=""):
    return LemmaCheck(lemma, Status.SATISFIED, detail)


def _bad(lemma, witness):
    return LemmaCheck(lemma, Status.VIOLATED, witness)


def evaluate_profile(items: list[tuple[int, int | None]], label: str = "") -> EulerFormReport:
    """Run the Euler-form checks on (prime, exponent) pairs.

    An exponent of None stands for "odd, magnitude unknown"; the check on
    the odd exponent's class mod 4 cannot fail for such an entry.
    """
    if any(p == 2 for p, _ in items):
        raise DomainError("Euler-form criteria apply to odd n only; factorization contains 2")
    odd = [(p, e) for p, e in items if e is None or e % 2 == 1]
    checks = []

    if len(items) > 1:
        checks.append(_ok("L0", f"{len(items)} distinct primes"))
    elif items:
        checks.append(_bad("L0", f"prime power of {items[0][0]}"))
    else:
        checks.append(_bad("L0", "n = 1 has no prime factor"))

    if odd:
        checks.append(_ok("L2", f"odd exponent on {odd[0][0]}"))
    else:
        checks.append(_bad("L2", "all exponents are even"))

    if len(odd) == 1:
        checks.append(_ok("L3", f"{odd[0][0]} carries the only odd exponent"))
    else:
        names = ", ".join(str(p) for p, _ in odd) or "none"
        checks.append(_bad("L3", f"{len(odd)} primes with odd exponent: {names}"))

    bad4 = [(p, e) for p, e in odd if e is not None and e % 4 == 3]
    if bad4:
        checks.append(
            _bad("L4", "; ".join(f"exponent {e} on {p} is 3 mod 4" for p, e in bad4))
        )
    elif any(e is None for _, e in odd):
        checks.append(_ok("L4", "odd exponent known by parity only"))
    else:
        checks.append(_ok("L4"))

    bad5 = [p for p, _ in odd if p % 4 == 3]
    if bad5:
        checks.append(
            _bad("L5", "; ".join(f"prime {p} with odd exponent is 3 mod 4" for p in bad5))
        )
    else:
        checks.append(_ok("L5"))

    if len(items) >= 3:
        checks.append(_ok("L6"))
    else:
        checks.append(_bad("L6", f"only {len(items)} distinct prime(s)"))
    return EulerFormReport(label, tuple(checks))


def check_euler_form(f: Factorization) -> EulerFormReport:
    """Check a factorization of an odd integer against the Euler form.

    ``overall`` only means the factorization is not excluded; it says
    nothing about perfection.
    """
    return evaluate_profile([(pp.prime, pp.exponent) for pp in f], str(f))


# Numeric sweeps ---------------------------------------------------------

DEFAULT_BOUNDS = {
    "L0": 1000,
    "L1": 10**5,
    "L2": 10**6,
    "L3": 10**6,
    "L4": 500,
    "L5": 500,
    "L6": 100,
    "parity-mechanism": 10**4,
}
VERIFIABLE = tuple(DEFAULT_BOUNDS)


@dataclass
class LemmaVerification:
    lemma: str
    bound: int
    domain: str
    trials: int = 0
    failures: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures


def smallest_prime_factors(limit: int) -> np.ndarray:
    spf = np.zeros(limit + 1, dtype=np.int64)
    for p in primes_up_to(int(limit**0.5) + 1):
        block = spf[p * p :: p]
        block[block == 0] = p
    idx = np.flatnonzero(spf == 0)
    spf[idx] = idx
    return spf


def _exponents_from_spf(n: int, spf: np.ndarray) -> dict[int, int]:
    out: dict[int, int] = {}
    while n > 1:
        p = int(spf[n])
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        out[p] = e
    return out


def _sigma_of(exps: dict[int, int]) -> int:
    s = 1
    for p, e in exps.items():
        s *= sigma_prime_power(p, e)
    return s


def _verify_l0(bound, rep, **_):
    for p in primes_up_to(bound - 1)[1:]:
        for a in range(1, 21):
            rep.trials += 1
            if sigma_prime_power(p, a) >= 2 * p**a:
                rep.failures.append({"p": p, "a": a})


def _verify_l1(bound, rep, **_):
    counts = np.zeros(bound + 1, dtype=np.int64)
    for d in range(1, bound + 1):
        counts[d::d] += 1
    for n in range(1, bound + 1):
        rep.trials += 1
        c = divisor_count(factorize(n))
        if c != counts[n]:
            rep.failures.append({"n": n, "formula": c, "enumerated": int(counts[n])})


def _verify_l2(bound, rep, **_):
    spf = smallest_prime_factors(bound)
    for n in range(3, bound + 1, 2):
        exps = _exponents_from_spf(n, spf)
        if all(e % 2 == 0 for e in exps.values()):
            rep.trials += 1
            if _sigma_of(exps) % 2 == 0:
                rep.failures.append({"n": n})


def _verify_l3(bound, rep, **_):
    spf = smallest_prime_factors(bound)
    for n in range(3, bound + 1, 2):
        exps = _exponents_from_spf(n, spf)
        if sum(e % 2 for e in exps.values()) >= 2:
            rep.trials += 1
            if _sigma_of(exps) % 4:
                rep.failures.append({"n": n})


def _verify_l4(bound, rep, **_):
    for q in primes_up_to(bound - 1)[1:]:
        for b in range(3, 20, 4):
            rep.trials += 1
            if sigma_prime_power(q, b) % 4:
                rep.failures.append({"q": q, "beta": b})


def _verify_l5(bound, rep, **_):
    for q in primes_up_to(bound - 1)[1:]:
        if q % 4 != 3:
            continue
        for b in range(1, 18, 4):
            rep.trials += 1
            if sigma_prime_power(q, b) % 4:
                rep.failures.append({"q": q, "beta": b})


def _verify_l6(bound, rep, **_):
    primes = primes_up_to(bound - 1)[1:]
    for p in primes:
        for q in primes:
            if p == q:
                continue
            for a in range(2, 9, 2):
                sp = sigma_prime_power(p, a)
                for b in range(1, 10, 2):
                    rep.trials += 1
                    n = p**a * q**b
                    if sp * sigma_prime_power(q, b) == 2 * n:
                        rep.failures.append({"p": p, "alpha": a, "q": q, "beta": b})


def _verify_parity_mechanism(bound, rep, seed=0, budget=DEFAULT_BUDGET):
    rng = random.Random(seed)
    primes = primes_up_to(10**4)[1:]
    while rep.trials < bound:
        p = rng.choice(primes)
        x = rng.randrange(1, p)
        n = x * x % p + p * rng.randrange(0, 10**6)
        rep.trials += 1
        f = factorize(n, budget, seed)
        nonresidues = [
            pp.prime for pp in f if pp.exponent % 2 == 1 and legendre(pp.prime, p) == -1
        ]
        if len(nonresidues) % 2:
            rep.failures.append({"p": p, "N": n, "nonresidues": nonresidues})


_SWEEPS = {
    "L0": (_verify_l0, "odd primes p < {b}, 1 <= a <= 20: sigma(p^a) < 2 p^a"),
    "L1": (_verify_l1, "n <= {b}: divisor_count formula equals enumerated count"),
    "L2": (_verify_l2, "odd n <= {b} with all exponents even: sigma(n) odd"),
    "L3": (_verify_l3, "odd n <= {b} with >= 2 odd exponents: 4 | sigma(n)"),
    "L4": (_verify_l4, "odd primes q < {b}, beta = 3 mod 4, beta <= 19: 4 | sigma(q^beta)"),
    "L5": (_verify_l5, "primes q = 3 mod 4, q < {b}, beta = 1 mod 4, beta <= 17: 4 | sigma(q^beta)"),
    "L6": (
        _verify_l6,
        "odd primes p != q < {b}, even alpha <= 8, odd beta <= 9: sigma(p^alpha q^beta) != 2n",
    ),
    "parity-mechanism": (
        _verify_parity_mechanism,
        "{b} random (p, N) with (N/p) = +1: even count of odd-multiplicity non-residue primes",
    ),
}


def verify_lemma_numeric(
    lemma: str, bound: int | None = None, seed: int = 0, budget: int = DEFAULT_BUDGET
) -> LemmaVerification:
    """Run the bounded numeric sweep for one lemma (or the parity mechanism).

    ``bound`` overrides the lemma's default domain bound; see
    DEFAULT_BOUNDS for what it limits in each case.
    """
    if lemma not in _SWEEPS:
        raise UsageError(f"unknown lemma {lemma!r}; expected one of {', '.join(VERIFIABLE)}")
    b = DEFAULT_BOUNDS[lemma] if bound is None else bound
    if b < 1:
        raise UsageError(f"bound must be positive, got {b}")
    fn, domain = _SWEEPS[lemma]
    rep = LemmaVerification(lemma, b, domain.format(b=b))
    fn(b, rep, seed=seed, budget=budget)
    return rep
