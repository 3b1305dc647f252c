"""Exception hierarchy shared by the kernel, the backdoor modules and the CLI."""


class EscrowKeyError(Exception):
    """Base class for every error raised by this package."""


class DomainError(EscrowKeyError, ValueError):
    """An argument lies outside the documented domain of an operation."""


class NotInvertible(EscrowKeyError, ValueError):
    pass


class NoRoot(EscrowKeyError, ValueError):
    """The value is a quadratic non-residue, so it has no square root."""


class NotASquare(EscrowKeyError, ValueError):
    pass


class NotCoprime(EscrowKeyError, ValueError):
    pass


class TooLarge(EscrowKeyError, ValueError):
    """Trial division hit its limit before the factorization was complete."""


class Exhausted(EscrowKeyError, RuntimeError):
    """A randomized search ran out of its attempt budget."""


class TrivialFactor(EscrowKeyError, ValueError):
    """The escrow key shares a factor with the semi-prime.

    The common divisor is kept in ``factor``.
    """

    def __init__(self, factor: int, message: str | None = None):
        self.factor = factor
        super().__init__(message or f"gcd with the escrow key is {factor}")


class NotRecovered(EscrowKeyError, LookupError):
    """No candidate branch produced a verified factorization."""
