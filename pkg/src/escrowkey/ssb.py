"""Single semi-prime backdoor (SSB).

A vulnerable semi-prime ``N = p * q`` has factors tied together by a secret
prime ``T``: ``p = k * q (mod T)`` for some small ``1 < k <= K``. Knowing ``T``
the factors come back in three phases:

1. *low level*: every ``k`` in ``[2, K]`` for which ``N / k`` is a square
   modulo ``T`` is a candidate, since ``N = k * q**2 (mod T)``;
2. *high level*: for each root ``q mod T`` and the matching ``p mod T`` the
   quotients ``pi = p // T`` and ``nu = q // T`` are small, and a brute force
   over their sum solves a quadratic in ``pi``;
3. the candidate factors are multiplied back and compared with ``N``.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from typing import NamedTuple

from .errors import DomainError, Exhausted, NotInvertible, NotRecovered, TrivialFactor
from .numtheory import (
    _exact_isqrt,
    is_probable_prime,
    is_quadratic_residue,
    mod_inverse,
    random_prime,
    sqrt_mod,
)

__all__ = [
    "SsbParams",
    "EscrowKey",
    "SsbInstance",
    "LowCandidate",
    "HighSolution",
    "RecoveryTrace",
    "generate_escrow_key",
    "ssb_generate",
    "check_ssb",
    "ssb_recover_low",
    "ssb_recover_high",
    "high_search_range",
    "ssb_recover",
]

MIN_ALPHA = 16
GENERATION_DRAWS = 10_000


def _check_common(alpha: int, c: int, k_max: int) -> None:
    if alpha < MIN_ALPHA:
        raise DomainError(f"alpha must be at least {MIN_ALPHA}, got {alpha}")
    if c < 1 or alpha - c < 8:
        raise DomainError(f"c={c} leaves no room for an escrow key at alpha={alpha}")
    if k_max < 2:
        raise DomainError(f"k_max must be at least 2, got {k_max}")


@dataclass(frozen=True)
class SsbParams:
    """Designer parameters: factor size ``alpha``, key deficit ``c`` and bound ``k_max`` (K)."""

    alpha: int
    c: int
    k_max: int

    def __post_init__(self):
        _check_common(self.alpha, self.c, self.k_max)

    @property
    def key_bits(self) -> int:
        return self.alpha - self.c


@dataclass(frozen=True)
class EscrowKey:
    """The designer prime ``T`` together with the parameters it was made for."""

    T: int
    params: "SsbParams | TsbParams"  # noqa: F821

    def __post_init__(self):
        if self.T < 3 or self.T % 2 == 0:
            raise DomainError("escrow key must be an odd prime")


def generate_escrow_key(params, rng: random.Random) -> EscrowKey:
    """Draw a random prime of ``alpha - c`` bits and bind it to ``params``."""
    T = random_prime(params.key_bits, rng)
    key = EscrowKey(T, params)
    threshold = getattr(params, "b_threshold", None)
    if threshold is not None and threshold >= T:
        raise DomainError("detection threshold B must be smaller than T")
    return key


@dataclass(frozen=True)
class SsbInstance:
    N: int
    p: int
    q: int
    k: int


class LowCandidate(NamedTuple):
    k: int
    gamma_sq: int


class HighSolution(NamedTuple):
    pi: int
    nu: int


@dataclass
class RecoveryTrace:
    """Per-phase candidate lists kept for diagnostics.

    ``high`` only records branches that produced at least one (pi, nu) pair.
    ``solution`` describes the branch that verified, if any.
    """

    medium: list = field(default_factory=list)
    low: list = field(default_factory=list)
    high: list = field(default_factory=list)
    branches: int = 0
    solution: dict | None = None

    def summary(self) -> dict:
        return {
            "medium_candidates": len(self.medium),
            "low_candidates": len(self.low),
            "branches_tried": self.branches,
            "high_solutions": sum(len(sols) for _, sols in self.high),
            "solution": self.solution,
        }


def require_prime_key(T: int) -> None:
    """Recovery works in GF(T); a composite key is rejected up front."""
    if T < 3 or not is_probable_prime(T):
        raise DomainError(f"escrow key {T} is not an odd prime")


def ssb_generate(
    key: EscrowKey,
    rng: random.Random,
    *,
    randomize_k: bool = False,
    max_draws: int = GENERATION_DRAWS,
) -> SsbInstance:
    """Generate a semi-prime whose factors satisfy ``p = k q (mod T)``.

    Draws random ``alpha``-bit primes ``q`` and ``r`` and tries
    ``p = r + ((k q - r) mod T)`` for ``k = 2..K`` (shuffled when
    ``randomize_k``) until ``p`` is prime.
    """
    params = key.params
    T = key.T
    ks = list(range(2, params.k_max + 1))
    for _ in range(max_draws):
        q = random_prime(params.alpha, rng)
        r = random_prime(params.alpha, rng)
        if randomize_k:
            rng.shuffle(ks)
        for k in ks:
            p = r + (k * q - r) % T
            if p != q and is_probable_prime(p):
                return SsbInstance(p * q, p, q, k)
    raise Exhausted(f"no SSB instance found after {max_draws} draws")


def check_ssb(inst: SsbInstance, key: EscrowKey) -> bool:
    """Verify ``N = p q``, primality, and ``p = k q (mod T)`` for some ``1 < k <= K``."""
    T = key.T
    if inst.N != inst.p * inst.q:
        return False
    if not (is_probable_prime(inst.p) and is_probable_prime(inst.q)):
        return False
    target = inst.p % T
    return any(k * inst.q % T == target for k in range(2, key.params.k_max + 1))


def ssb_recover_low(N: int, T: int, k_max: int) -> list[LowCandidate]:
    """Low-level phase: all ``k`` in ``[2, k_max]`` with ``N k^-1`` a square mod ``T``."""
    require_prime_key(T)
    g = math.gcd(N, T)
    if g > 1:
        raise TrivialFactor(g)
    n = N % T
    out = []
    for k in range(2, k_max + 1):
        try:
            gamma_sq = n * mod_inverse(k, T) % T
        except NotInvertible:
            continue
        if is_quadratic_residue(gamma_sq, T):
            out.append(LowCandidate(k, gamma_sq))
    return out


def high_search_range(N: int, T: int) -> tuple[int, int]:
    """Inclusive range swept for ``C = pi + nu``."""
    T2 = T * T
    floor_q = N // T2
    ceil_q = -(-N // T2)
    lower = math.isqrt(2 * (floor_q - 1)) if floor_q >= 1 else 0
    return lower, ceil_q


def ssb_recover_high(N: int, T: int, p_mod_T: int, q_mod_T: int) -> list[HighSolution]:
    """High-level phase: all ``(pi, nu)`` with ``N = (pi T + p_mod_T)(nu T + q_mod_T)``.

    For each candidate sum ``C`` the quadratic
    ``T x^2 + (b - a - C T) x + delta - b C = 0`` (``a = q mod T``,
    ``b = p mod T``) must have a perfect-square discriminant and a
    non-negative integral root ``x = pi``. An inexact ``delta`` falsifies the
    branch and yields an empty list.
    """
    a, b = q_mod_T, p_mod_T
    if not (0 <= a < T and 0 <= b < T):
        raise DomainError("residues must be reduced modulo T")
    num = N - a * b
    if num < 0 or num % T:
        return []
    delta = num // T
    lower, upper = high_search_range(N, T)

    two_t = 2 * T
    T2 = T * T
    # disc(C) = T^2 C^2 + 2T(a+b) C + (b-a)^2 - 4 T delta, stepped incrementally
    C = lower
    disc = T2 * C * C + two_t * (a + b) * C + (b - a) ** 2 - 4 * T * delta
    step = T2 * (2 * C + 1) + two_t * (a + b)
    step_inc = 2 * T2
    base = a - b
    out = []
    while C <= upper:
        if disc >= 0 and (disc & 15) in (0, 1, 4, 9):
            r = _exact_isqrt(disc)
            if r >= 0:
                ct = C * T + base
                for num_x in (ct - r, ct + r) if r else (ct,):
                    if num_x >= 0 and num_x % two_t == 0:
                        x = num_x // two_t
                        if x <= C:
                            out.append(HighSolution(x, C - x))
        disc += step
        step += step_inc
        C += 1
    return out


def ssb_recover(
    N: int, T: int, k_max: int, trace: RecoveryTrace | None = None
) -> tuple[int, int]:
    """Recover ``(p, q)`` from ``N`` and the escrow key ``T``.

    Branches are scanned in the order ``k`` ascending, smaller root first,
    ``C`` ascending, and the first verified pair is returned. Raises
    :class:`NotRecovered` when nothing verifies and :class:`TrivialFactor` when
    ``T`` shares a factor with ``N``.
    """
    low = ssb_recover_low(N, T, k_max)
    if trace is not None:
        trace.low = low
    for k, gamma_sq in low:
        for root_index, gamma in enumerate(sqrt_mod(gamma_sq, T), start=1):
            q_mod = gamma
            p_mod = k * gamma % T
            sols = ssb_recover_high(N, T, p_mod, q_mod)
            if trace is not None:
                trace.branches += 1
                if sols:
                    trace.high.append(((k, root_index), sols))
            for pi, nu in sols:
                p = pi * T + p_mod
                q = nu * T + q_mod
                if p > 1 and q > 1 and p * q == N:
                    if trace is not None:
                        trace.solution = {
                            "k": k,
                            "root": root_index,
                            "p_mod_T": p_mod,
                            "q_mod_T": q_mod,
                            "pi": pi,
                            "nu": nu,
                        }
                    return p, q
    raise NotRecovered(f"no SSB factorization of N with K={k_max}")

