# # How K trades generation time against recovery time
#
# A larger K gives the generator more chances to land a prime in the right
# residue class, so generation gets faster. Recovery has more k values to
# try, so it gets slower. This sweep shows both trends on a small scale.

import sys

from escrowkey.bench import run_bench, write_csv

records = run_bench("ssb", alpha=128, c=5, k_values=[16, 64, 256], trials=10, seed=1)
write_csv(records, sys.stdout)

# ## Reading the table
#
# Averages are in seconds over the trials; the std columns are population
# standard deviations.

for r in records:
    print(f"K={r.k_value:>4}: generate {r.gen_avg * 1e3:7.2f} ms, recover {r.rec_avg * 1e3:7.2f} ms")
