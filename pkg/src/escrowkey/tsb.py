"""Twin semi-prime backdoor (TSB).

Two semi-primes ``N1 = p1 q1`` and ``N2 = p2 q2`` are linked through the
designer prime ``T`` by

* ``q2 = h^2 q1``, ``p1 = h k1 q2`` and ``p2 = k2 q1`` (all mod ``T``),
  with ``1 < h, k1, k2 <= K`` pairwise coprime and ``h k1 != k2 (mod T)``;
* ``(h q1)^2 mod T > B`` for a detection threshold ``B < T``.

Then ``N1 mod T`` and ``N2 mod T`` lift to small multiples ``h k1 g`` and
``k2 g`` of the common value ``g = (h q1)^2 mod T``. Recovery finds the lifts
by a gcd search (medium level), splits ``h k1`` (low level) and reuses the
SSB quadratic search for the quotients by ``T`` (high level).
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from itertools import product
from typing import Iterator, NamedTuple

from .errors import DomainError, Exhausted, NotInvertible, NotRecovered, TooLarge, TrivialFactor
from .numtheory import (
    bitsize,
    factor_by_trial_division,
    is_probable_prime,
    is_quadratic_residue,
    mod_inverse,
    random_prime,
    sqrt_mod,
)
from .ssb import (
    EscrowKey,
    HighSolution,
    RecoveryTrace,
    _check_common,
    require_prime_key,
    ssb_recover_high,
)

__all__ = [
    "TsbParams",
    "TsbInstance",
    "MediumCandidate",
    "LowCandidateTsb",
    "get_correl_prime",
    "tsb_generate",
    "check_tsb",
    "medium_gcd_hits",
    "iter_medium_candidates",
    "tsb_recover_medium",
    "coprime_splits",
    "tsb_recover_low",
    "tsb_recover",
]

GENERATION_DRAWS = 10_000
RESTARTS = 1_000


@dataclass(frozen=True)
class TsbParams:
    """Designer parameters; ``b_threshold`` (B) defaults to ``2**(alpha - 2c)``."""

    alpha: int
    c: int
    k_max: int
    b_threshold: int | None = None

    def __post_init__(self):
        _check_common(self.alpha, self.c, self.k_max)
        if self.b_threshold is None:
            object.__setattr__(self, "b_threshold", 1 << max(0, self.alpha - 2 * self.c))
        if self.b_threshold < 0:
            raise DomainError("detection threshold must be non-negative")

    @property
    def key_bits(self) -> int:
        return self.alpha - self.c


@dataclass(frozen=True)
class TsbInstance:
    N1: int
    N2: int
    p1: int
    q1: int
    p2: int
    q2: int
    h: int
    k1: int
    k2: int


class MediumCandidate(NamedTuple):
    kt1: int
    kt2: int
    g: int


class LowCandidateTsb(NamedTuple):
    h: int
    k1: int
    k2: int
    gamma_sq: int


def get_correl_prime(
    q: int,
    j: int,
    T: int,
    k_max: int,
    c: int,
    rng: random.Random,
    *,
    max_tries: int | None = None,
) -> tuple[int, int]:
    """Prime ``p = k j q (mod T)`` for a random ``k`` in ``[2, k_max]``.

    Walks the progression ``t1 + m T`` for ``m = 1 .. 2**(2c) - 1`` and keeps
    the first probable prime whose size is within one bit of
    ``bitsize(T) + c``; a fresh ``k`` is drawn when the walk is exhausted.
    """
    if q <= 0 or j < 1:
        raise DomainError("q must be positive and j at least 1")
    target = bitsize(T) + c
    budget = 64 * k_max if max_tries is None else max_tries
    for _ in range(budget):
        k = rng.randint(2, k_max)
        t1 = k * j * q % T
        if t1 == 0:
            continue
        for m in range(1, 1 << (2 * c)):
            p = t1 + m * T
            size = bitsize(p)
            if size < target - 1:
                continue
            if size > target + 1:
                break
            if is_probable_prime(p):
                return p, k
    raise Exhausted(f"no correlated prime found in {budget} draws of k")


def _correl_until(q, j, T, params, rng, accept) -> tuple[int, int] | None:
    for _ in range(64 * params.k_max):
        p, k = get_correl_prime(q, j, T, params.k_max, params.c, rng)
        if accept(k):
            return p, k
    return None


def tsb_generate(
    key: EscrowKey,
    rng: random.Random,
    *,
    max_draws: int = GENERATION_DRAWS,
    restarts: int = RESTARTS,
) -> TsbInstance:
    """Generate a vulnerable pair ``(N1, N2)``; every condition is re-checked before returning."""
    params = key.params
    T, K = key.T, params.k_max
    for _ in range(restarts):
        # q2 = p + ((h^2 q1 - p) mod T) prime for the smallest workable h
        for _ in range(max_draws):
            q1 = random_prime(params.alpha, rng)
            p = random_prime(params.alpha, rng)
            for h in range(2, K + 1):
                q2 = p + (h * h * q1 - p) % T
                if is_probable_prime(q2):
                    break
            else:
                continue
            break
        else:
            raise Exhausted(f"no (q1, q2) pair found after {max_draws} draws")

        got = _correl_until(q2, h, T, params, rng, lambda k: math.gcd(k, h) == 1)
        if got is None:
            continue
        p1, k1 = got
        got = _correl_until(
            q1, 1, T, params, rng, lambda k: math.gcd(k, k1) == 1 and math.gcd(k, h) == 1
        )
        if got is None:
            continue
        p2, k2 = got
        inst = TsbInstance(p1 * q1, p2 * q2, p1, q1, p2, q2, h, k1, k2)
        if check_tsb(inst, key):
            return inst
    raise Exhausted(f"no TSB instance satisfied every condition after {restarts} restarts")


def tsb_conditions(inst: TsbInstance, key: EscrowKey) -> dict[str, bool]:
    """Truth value of each named invariant of a TSB instance."""
    T, params = key.T, key.params
    K, B = params.k_max, params.b_threshold
    h, k1, k2 = inst.h, inst.k1, inst.k2
    in_range = all(1 < v <= K for v in (h, k1, k2))
    return {
        "N1 = p1*q1": inst.N1 == inst.p1 * inst.q1,
        "N2 = p2*q2": inst.N2 == inst.p2 * inst.q2,
        "p1 prime": is_probable_prime(inst.p1),
        "q1 prime": is_probable_prime(inst.q1),
        "p2 prime": is_probable_prime(inst.p2),
        "q2 prime": is_probable_prime(inst.q2),
        "p1 != q1, p2 != q2": inst.p1 != inst.q1 and inst.p2 != inst.q2,
        "gcd(N1, N2) = 1": math.gcd(inst.N1, inst.N2) == 1,
        "1 < h, k1, k2 <= K": in_range,
        "H1": (inst.q2 - h * h * inst.q1) % T == 0,
        "H2": (inst.p1 - h * k1 * inst.q2) % T == 0,
        "H3": (inst.p2 - k2 * inst.q1) % T == 0,
        "H4": math.gcd(h, k1) == 1 and math.gcd(h, k2) == 1 and math.gcd(k1, k2) == 1,
        "H5": (h * k1 - k2) % T != 0,
        "H6": (h * inst.q1) ** 2 % T > B,
        "B < T": B < T,
    }


def check_tsb(inst: TsbInstance, key: EscrowKey) -> bool:
    return all(tsb_conditions(inst, key).values())


def _require_coprime(N1: int, N2: int, T: int) -> None:
    require_prime_key(T)
    g = math.gcd(N1 * N2, T)
    if g > 1:
        raise TrivialFactor(g)


def medium_gcd_hits(N1: int, N2: int, T: int, B: int, k_max: int) -> Iterator[MediumCandidate]:
    """Every ``(kt1, kt2)`` whose lifted gcd exceeds ``B``, before the ``g < T`` and residue filters.

    Scans diagonals ``s = kt1 + kt2`` upward and ``kt1`` upward within each,
    restricted to ``kt1 <= k_max**2`` and ``kt2 <= k_max``.
    """
    _require_coprime(N1, N2, T)
    K1, K2 = k_max * k_max, k_max
    lift1 = [N1 % T + i * T for i in range(K1 + 1)]
    lift2 = [N2 % T + j * T for j in range(K2 + 1)]
    gcd = math.gcd
    for s in range(K1 + K2 + 1):
        for kt1 in range(max(0, s - K2), min(s, K1) + 1):
            g = gcd(lift1[kt1], lift2[s - kt1])
            if g > B:
                yield MediumCandidate(kt1, s - kt1, g)


def iter_medium_candidates(
    N1: int, N2: int, T: int, B: int, k_max: int
) -> Iterator[MediumCandidate]:
    """Lazy medium-level phase: hits with ``B < g < T`` and ``g`` a square mod ``T``."""
    for cand in medium_gcd_hits(N1, N2, T, B, k_max):
        if cand.g < T and is_quadratic_residue(cand.g, T):
            yield cand


def tsb_recover_medium(N1: int, N2: int, T: int, B: int, k_max: int) -> list[MediumCandidate]:
    return list(iter_medium_candidates(N1, N2, T, B, k_max))


def coprime_splits(factors: dict[int, int]) -> list[tuple[int, int]]:
    """Ordered coprime pairs ``(h, k1)`` with ``h, k1 > 1`` from a factorization, ``h`` ascending."""
    powers = [pr**e for pr, e in factors.items()]
    splits = []
    for mask in product((0, 1), repeat=len(powers)):
        h = k1 = 1
        for bit, pp in zip(mask, powers):
            if bit:
                h *= pp
            else:
                k1 *= pp
        if h > 1 and k1 > 1:
            splits.append((h, k1))
    return sorted(splits)


def tsb_recover_low(
    N1: int,
    N2: int,
    T: int,
    cand: MediumCandidate,
    k_max: int,
    *,
    prune: bool = False,
) -> list[LowCandidateTsb]:
    """Low-level phase: ``k2`` and ``h k1`` by exact division, then all coprime splits.

    ``prune`` drops splits with ``h`` or ``k1`` above ``k_max``; by default
    they are kept and left for the high-level phase to reject.
    """
    kt1, kt2, g = cand
    num1 = N1 % T + kt1 * T
    num2 = N2 % T + kt2 * T
    if num1 % g or num2 % g:
        return []
    hk1, k2 = num1 // g, num2 // g
    try:
        factors = factor_by_trial_division(hk1, 2 * k_max * k_max)
    except TooLarge:
        return []
    out = []
    for h, k1 in coprime_splits(factors):
        if prune and (h > k_max or k1 > k_max):
            continue
        out.append(LowCandidateTsb(h, k1, k2, g))
    return out


def _first_factorization(N: int, T: int, p_mod: int, q_mod: int) -> tuple[HighSolution, int, int] | None:
    for sol in ssb_recover_high(N, T, p_mod, q_mod):
        p = sol.pi * T + p_mod
        q = sol.nu * T + q_mod
        if p > 1 and q > 1 and p * q == N:
            return sol, p, q
    return None


def tsb_recover(
    N1: int,
    N2: int,
    T: int,
    B: int,
    k_max: int,
    trace: RecoveryTrace | None = None,
    *,
    prune: bool = False,
) -> tuple[tuple[int, int], tuple[int, int]]:
    """Recover ``((p1, q1), (p2, q2))`` from the pair and the designer key ``T``.

    Branches are explored in the order medium candidate ``(s, kt1)``, split
    ``h`` ascending, smaller root first; the first branch that factors both
    semi-primes wins. Raises :class:`NotRecovered` otherwise.
    """
    for cand in iter_medium_candidates(N1, N2, T, B, k_max):
        lows = tsb_recover_low(N1, N2, T, cand, k_max, prune=prune)
        if trace is not None:
            trace.medium.append(cand)
            trace.low.extend(lows)
        for h, k1, k2, gamma_sq in lows:
            try:
                h_inv = mod_inverse(h, T)
            except NotInvertible:
                continue
            for root_index, gamma in enumerate(sqrt_mod(gamma_sq, T), start=1):
                q1m = gamma * h_inv % T
                q2m = q1m * h * h % T
                p1m = h * k1 * q2m % T
                p2m = k2 * q1m % T
                if trace is not None:
                    trace.branches += 1
                first = _first_factorization(N1, T, p1m, q1m)
                if first is None:
                    continue
                second = _first_factorization(N2, T, p2m, q2m)
                if second is None:
                    continue
                (sol1, p1, q1), (sol2, p2, q2) = first, second
                if trace is not None:
                    trace.high.append(((h, k1, root_index), [sol1, sol2]))
                    trace.solution = {
                        "kt1": cand.kt1,
                        "kt2": cand.kt2,
                        "g": cand.g,
                        "h": h,
                        "k1": k1,
                        "k2": k2,
                        "root": root_index,
                        "pi1": sol1.pi,
                        "nu1": sol1.nu,
                        "pi2": sol2.pi,
                        "nu2": sol2.nu,
                    }
                return (p1, q1), (p2, q2)
    raise NotRecovered(f"no TSB factorization of (N1, N2) with K={k_max}")
