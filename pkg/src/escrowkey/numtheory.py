"""Number-theoretic kernel on arbitrary-precision Python integers.

Everything here is a pure function of its arguments; randomness is always
passed in explicitly as a :class:`random.Random`-compatible object.
"""

from __future__ import annotations

import math
import random

from .errors import DomainError, Exhausted, NoRoot, NotASquare, NotInvertible, TooLarge

__all__ = [
    "bitsize",
    "mod_inverse",
    "is_quadratic_residue",
    "sqrt_mod",
    "integer_sqrt_exact",
    "is_probable_prime",
    "random_prime",
    "factor_by_trial_division",
    "MR_ROUNDS",
]

MR_ROUNDS = 40

# Deterministic Miller-Rabin witnesses for every n < 3.3e24 (covers 2**64).
_DETERMINISTIC_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def _small_primes(limit: int) -> tuple[int, ...]:
    sieve = bytearray([1]) * (limit + 1)
    sieve[0:2] = b"\x00\x00"
    for i in range(2, math.isqrt(limit) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytearray(len(sieve[i * i :: i]))
    return tuple(i for i, flag in enumerate(sieve) if flag)


_SMALL_PRIMES = _small_primes(1000)


def bitsize(n: int) -> int:
    """Size in bits, ``max(1, ceil(log2(n + 1)))``; so ``bitsize(0) == 1``."""
    if n < 0:
        raise DomainError("bitsize is defined for non-negative integers only")
    return max(1, n.bit_length())


def mod_inverse(a: int, m: int) -> int:
    """Return ``x`` in ``[1, m)`` with ``a * x % m == 1``."""
    if m < 2:
        raise DomainError(f"modulus must be at least 2, got {m}")
    try:
        return pow(a, -1, m)
    except ValueError:
        raise NotInvertible(f"{a} has no inverse modulo {m}") from None


def _check_residue_args(a: int, p: int) -> None:
    if p < 3 or p % 2 == 0:
        raise DomainError(f"modulus must be an odd prime, got {p}")


def is_quadratic_residue(a: int, p: int) -> bool:
    """Euler's criterion for a reduced, non-zero ``a`` modulo the odd prime ``p``.

    ``a == 0`` and unreduced inputs raise :class:`DomainError`.
    """
    _check_residue_args(a, p)
    if not 1 <= a < p:
        raise DomainError(f"residue must lie in [1, {p}), got {a}")
    return pow(a, (p - 1) // 2, p) == 1


def sqrt_mod(a: int, p: int) -> tuple[int, int]:
    """Both square roots of ``a`` modulo the odd prime ``p`` (Tonelli-Shanks).

    Returns ``(g1, g2)`` with ``g1 < g2`` and ``g1 + g2 == p``; ``(0, 0)`` for
    ``a == 0``. Raises :class:`NoRoot` for a non-residue.
    """
    _check_residue_args(a, p)
    if not 0 <= a < p:
        raise DomainError(f"residue must lie in [0, {p}), got {a}")
    if a == 0:
        return 0, 0
    if pow(a, (p - 1) // 2, p) != 1:
        raise NoRoot(f"{a} is a quadratic non-residue modulo {p}")

    if p % 4 == 3:
        x = pow(a, (p + 1) // 4, p)
    else:
        # p - 1 = q * 2**s with q odd
        q, s = p - 1, 0
        while q % 2 == 0:
            q //= 2
            s += 1
        z = 2
        while pow(z, (p - 1) // 2, p) != p - 1:
            z += 1
            if z >= p:
                raise DomainError(f"{p} is not prime: no quadratic non-residue found")
        m = s
        c = pow(z, q, p)
        t = pow(a, q, p)
        x = pow(a, (q + 1) // 2, p)
        while t != 1:
            # least i with t**(2**i) == 1
            i, t2 = 0, t
            while t2 != 1:
                t2 = t2 * t2 % p
                i += 1
            b = pow(c, 1 << (m - i - 1), p)
            m = i
            c = b * b % p
            t = t * c % p
            x = x * b % p
    y = p - x
    return (x, y) if x < y else (y, x)


def _exact_isqrt(n: int) -> int:
    """Integer square root of ``n`` if it is a perfect square, else ``-1``."""
    if n < 0:
        return -1
    r = math.isqrt(n)
    return r if r * r == n else -1


def integer_sqrt_exact(n: int) -> int:
    """Return ``r`` with ``r * r == n``; raise :class:`NotASquare` otherwise."""
    if n < 0:
        raise DomainError("negative integers have no integer square root")
    r = _exact_isqrt(n)
    if r < 0:
        raise NotASquare(f"{n} is not a perfect square")
    return r


def _miller_rabin(n: int, bases) -> bool:
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for base in bases:
        x = pow(base, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def is_probable_prime(n: int, rounds: int = MR_ROUNDS, rng: random.Random | None = None) -> bool:
    """Miller-Rabin primality test.

    Inputs below 2**64 are decided exactly with a fixed witness set. Larger
    inputs use ``rounds`` random bases (error probability at most 4**-rounds);
    when no ``rng`` is given the bases are derived from ``n`` itself so the
    answer is reproducible.
    """
    if n < 2:
        return False
    for sp in _SMALL_PRIMES:
        if n == sp:
            return True
        if n % sp == 0:
            return False
    if n < 1 << 64:
        return _miller_rabin(n, _DETERMINISTIC_BASES)
    if rng is None:
        rng = random.Random(n)
    bases = [rng.randrange(2, n - 1) for _ in range(rounds)]
    return _miller_rabin(n, bases)


def random_prime(bits: int, rng: random.Random, attempts: int | None = None) -> int:
    """Random probable prime of exactly ``bits`` bits (top bit forced).

    Gives up with :class:`Exhausted` after ``64 * bits`` candidates unless
    ``attempts`` says otherwise.
    """
    if bits < 8:
        raise DomainError(f"random_prime needs at least 8 bits, got {bits}")
    budget = 64 * bits if attempts is None else attempts
    top = 1 << (bits - 1)
    for _ in range(budget):
        candidate = rng.getrandbits(bits) | top | 1
        if is_probable_prime(candidate):
            return candidate
    raise Exhausted(f"no {bits}-bit prime found in {budget} draws")


def factor_by_trial_division(n: int, limit: int) -> dict[int, int]:
    """Complete factorization of ``n`` as ``{prime: multiplicity}``.

    Raises :class:`TooLarge` when some prime factor exceeds ``limit``.
    """
    if n < 1:
        raise DomainError(f"cannot factor {n}")
    factors: dict[int, int] = {}
    d = 2
    while d * d <= n and d <= limit:
        while n % d == 0:
            factors[d] = factors.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        if n > limit or d * d <= n:
            # Leftover is either a prime above the limit or still composite.
            raise TooLarge(f"cofactor {n} has a prime factor above {limit}")
        factors[n] = factors.get(n, 0) + 1
    return factors
