"""Exception types shared across the package."""

from __future__ import annotations


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class UsageError(ValueError):
    """An operation was invoked in a way its contract does not allow."""


class GrammarError(DomainError):
    """Malformed factorization or shape text.

    ``position`` is the 0-based offset into ``text`` where parsing failed.
    """

    def __init__(self, message: str, text: str, position: int):
        self.message = message
        self.text = text
        self.position = position
        super().__init__(f"{message} (at position {position})")

    def pointer(self) -> str:
        """Two-line rendering of the input with a caret under the fault."""
        return f"{self.text}\n{' ' * self.position}^"


class IncompleteFactorization(ArithmeticError):
    """Factoring budget ran out before the cofactor was split into primes.

    ``found`` maps each prime already extracted to its multiplicity and
    ``cofactor`` is the remaining composite part, so that
    ``prod(p**e for p, e in found.items()) * cofactor == n``.
    """

    def __init__(self, n: int, found: dict[int, int], cofactor: int):
        self.n = n
        self.found = dict(found)
        self.cofactor = cofactor
        super().__init__(
            f"factoring budget exhausted for {n}: composite cofactor {cofactor} remains"
        )
