"""Plain RSA key assembly from a pair of primes."""

from __future__ import annotations

import math

from .errors import DomainError, NotCoprime
from .numtheory import is_probable_prime

DEFAULT_E = 65537


def rsa_assemble(p: int, q: int, e: int = DEFAULT_E) -> tuple[int, int, int]:
    """Return ``(N, e, d)`` with ``e * d = 1 (mod (p-1)(q-1))``."""
    if p == q:
        raise DomainError("p and q must be distinct")
    if not (is_probable_prime(p) and is_probable_prime(q)):
        raise DomainError("p and q must both be prime")
    phi = (p - 1) * (q - 1)
    if e < 2 or math.gcd(e, phi) != 1:
        raise NotCoprime(f"e={e} is not invertible modulo phi(N)")
    return p * q, e, pow(e, -1, phi)
