# # Single semi-prime backdoor, step by step
#
# A designer holds a secret prime T. Every vulnerable modulus N = p*q they
# produce satisfies p = k*q (mod T) for some small k <= K. Knowing T, the
# designer factors N in three moves: guess k, take a square root mod T,
# then solve a small quadratic for the high halves of p and q.
#
# This script replays the 128-bit reference instance with K = 30.

from escrowkey import RecoveryTrace, ssb_recover
from escrowkey.numtheory import is_quadratic_residue, sqrt_mod
from escrowkey.ssb import high_search_range, ssb_recover_high, ssb_recover_low

T = 6451117418610792529759522664972769997
N = 54577680260424665710663143106120874652519112194523277824721618245793829954991
K = 30

# ## Low phase
#
# If p = k*q (mod T) then N/k = q^2 (mod T), so N/k must be a square mod T.
# Euler's criterion keeps roughly half of the k in [2, K].

low = ssb_recover_low(N, T, K)
print("k values surviving the residue filter:", [c.k for c in low])
print("N/2 is a square mod T?", is_quadratic_residue(N * pow(2, -1, T) % T, T))

# ## Square roots
#
# Each surviving k gives two candidates for q mod T, and p mod T follows.

k, gamma_sq = low[2]
g1, g2 = sqrt_mod(gamma_sq, T)
print(f"k={k}: roots of N/k mod T are {g1} and {g2}")

# ## High phase
#
# Write p = pi*T + (p mod T) and q = nu*T + (q mod T). The product pi*nu is
# close to N/T^2, so a short sweep over C = pi + nu plus an exact integer
# square root settles every branch.

lo, hi = high_search_range(N, T)
print(f"sweep range for C: [{lo}, {hi}]")
for root_index, gamma in enumerate((g1, g2), start=1):
    sols = ssb_recover_high(N, T, k * gamma % T, gamma)
    print(f"  root {root_index}: {sols or 'no integer solution'}")

# ## End to end
#
# The library drives all three phases and stops at the first branch whose
# product equals N.

trace = RecoveryTrace()
p, q = ssb_recover(N, T, K, trace)
print("p =", p)
print("q =", q)
print("p*q == N:", p * q == N)
print("winning branch:", trace.solution)
