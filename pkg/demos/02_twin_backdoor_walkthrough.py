# # Twin semi-prime backdoor
#
# Here two moduli N1 = p1*q1 and N2 = p2*q2 are correlated through T:
# q2 = h^2 * q1, p1 = h*k1*q2 and p2 = k2*q1, all modulo T. Neither modulus
# alone gives the game away, but a gcd of suitably lifted residues does.
#
# The reference instance uses 64-bit primes, K = 100 and a detection
# threshold B = 2^57.

from escrowkey.numtheory import factor_by_trial_division, sqrt_mod
from escrowkey.tsb import (
    coprime_splits,
    medium_gcd_hits,
    tsb_recover,
    tsb_recover_low,
    tsb_recover_medium,
)

T = 1350856093440009833
N1 = 199771249142689629600100193795300988277
N2 = 330849388672597230630022641974377014199
B = 2**57
K = 100

# ## Medium phase
#
# Both N1 and N2 are multiples of (h*q1)^2 mod T. Lifting the residues by
# multiples of T and taking gcds exposes that common square once the gcd
# is unusually large.

for hit in medium_gcd_hits(N1, N2, T, B, K):
    verdict = "kept" if hit.g < T else "rejected, g >= T"
    print(f"gcd hit at (kt1, kt2) = ({hit.kt1}, {hit.kt2}): g = {hit.g} ({verdict})")

cand = tsb_recover_medium(N1, N2, T, B, K)[0]

# ## Low phase
#
# Dividing out g leaves k2 and the product h*k1. The product is small, so
# trial division factors it and each coprime split is a candidate (h, k1).

hk1 = (N1 % T + cand.kt1 * T) // cand.g
print("h*k1 =", hk1, "=", factor_by_trial_division(hk1, 2 * K * K))
print("splits:", coprime_splits(factor_by_trial_division(hk1, 2 * K * K)))
lows = tsb_recover_low(N1, N2, T, cand, K)
print("k2 =", lows[0].k2)
print("roots of g mod T:", sqrt_mod(cand.g, T))

# ## High phase and result
#
# Every (h, k1, root) branch fixes all four residues mod T; the single
# semi-prime high phase then runs on N1 and N2 in turn.

(p1, q1), (p2, q2) = tsb_recover(N1, N2, T, B, K)
print(f"N1 = {p1} * {q1}")
print(f"N2 = {p2} * {q2}")
