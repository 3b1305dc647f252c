import math

import numpy as np
import pytest

from escrowkey.ssb import EscrowKey, SsbInstance, SsbParams
from escrowkey.tsb import TsbInstance, TsbParams

# SSB running example: alpha=128, c=5, K=30
SSB_T = 6451117418610792529759522664972769997
SSB_N = 54577680260424665710663143106120874652519112194523277824721618245793829954991
SSB_P = 313801445905602285635531222640499824151
SSB_Q = 173924247235121781823208735516135244841
SSB_K = 9

# TSB running example: alpha=64, c=3, K=100, B=2**57
TSB_T = 1350856093440009833
TSB_B = 2**57
TSB_N1 = 199771249142689629600100193795300988277
TSB_N2 = 330849388672597230630022641974377014199
TSB_P1 = 12258708750247312273
TSB_Q1 = 16296271753634685349
TSB_P2 = 16740754379985226021
TSB_Q2 = 19763111097798043819
TSB_H, TSB_K1, TSB_K2 = 47, 98, 69
TSB_G = 196865400950880229
TSB_GAMMAS = (10632559655363908, 1340223533784645925)


@pytest.fixture
def ssb_reference():
    key = EscrowKey(SSB_T, SsbParams(128, 5, 30))
    return key, SsbInstance(SSB_N, SSB_P, SSB_Q, SSB_K)


@pytest.fixture
def tsb_reference():
    key = EscrowKey(TSB_T, TsbParams(64, 3, 100, TSB_B))
    inst = TsbInstance(
        TSB_N1, TSB_N2, TSB_P1, TSB_Q1, TSB_P2, TSB_Q2, TSB_H, TSB_K1, TSB_K2
    )
    return key, inst


def trial_division_factors(n: int) -> tuple[int, int]:
    """Smallest-factor split of a semi-prime below 2**63 by vectorised trial division."""
    assert n < 2**63
    if n % 2 == 0:
        return 2, n // 2
    limit = math.isqrt(n)
    step = 1 << 22
    for start in range(3, limit + 1, step):
        d = np.arange(start, min(start + step, limit + 1), dtype=np.int64)
        hits = d[np.int64(n) % d == 0]
        if hits.size:
            f = int(hits[0])
            return f, n // f
    raise AssertionError(f"{n} is prime")


# Acceptance report, one line per criterion, printed at the end of the run.
ACCEPTANCE_RESULTS: list[tuple[str, bool, str]] = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok, detail in ACCEPTANCE_RESULTS:
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}")
