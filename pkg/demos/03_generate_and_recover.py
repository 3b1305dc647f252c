# # From key generation to recovery
#
# Build a fresh escrow key, plant the backdoor in new moduli, save the
# public half to disk and recover the factors from that file alone.

import random
import tempfile
from pathlib import Path

from escrowkey import (
    InstanceFile,
    SsbParams,
    TsbParams,
    check_ssb,
    check_tsb,
    generate_escrow_key,
    rsa_assemble,
    ssb_generate,
    ssb_recover,
    tsb_generate,
    tsb_recover,
)

rng = random.Random(2024)

# ## Single modulus, 256-bit factors

params = SsbParams(alpha=256, c=7, k_max=64)
key = generate_escrow_key(params, rng)
inst = ssb_generate(key, rng)
print(f"T has {key.T.bit_length()} bits, hidden k = {inst.k}, backdoor holds: {check_ssb(inst, key)}")

# The modulus looks like any other RSA key.
N, e, d = rsa_assemble(inst.p, inst.q)
print(f"RSA key: {N.bit_length()}-bit N, e = {e}")

# ## Ship only the public part

with tempfile.TemporaryDirectory() as tmp:
    path = Path(tmp) / "public.json"
    InstanceFile.from_ssb(key, inst).public_only().write(path)
    print(path.read_text())
    public = InstanceFile.read(path)

p, q = ssb_recover(public.public["N"], key.T, params.k_max)
print("recovered the planted factors:", {p, q} == {inst.p, inst.q})

# ## Twin moduli, 128-bit factors

tparams = TsbParams(alpha=128, c=7, k_max=32)
tkey = generate_escrow_key(tparams, rng)
twin = tsb_generate(tkey, rng)
print(f"h = {twin.h}, k1 = {twin.k1}, k2 = {twin.k2}, all conditions hold: {check_tsb(twin, tkey)}")
(p1, q1), (p2, q2) = tsb_recover(twin.N1, twin.N2, tkey.T, tparams.b_threshold, tparams.k_max)
print("N1 factored:", p1 * q1 == twin.N1, " N2 factored:", p2 * q2 == twin.N2)
