"""K-sweep timing harness: generate-then-recover cycles, averaged per K."""

from __future__ import annotations

import csv
import random
import statistics
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from .errors import DomainError, EscrowKeyError
from .ssb import SsbParams, generate_escrow_key, ssb_generate, ssb_recover
from .tsb import TsbParams, tsb_generate, tsb_recover

CSV_HEADER = ("K", "gen_avg", "gen_std", "rec_avg", "rec_std")


@dataclass(frozen=True)
class BenchRecord:
    k_value: int
    gen_avg: float
    gen_std: float
    rec_avg: float
    rec_std: float
    failures: int = 0

    @property
    def ok(self) -> bool:
        return self.failures == 0

    def csv_row(self) -> list[str]:
        rec = ("failed", "failed") if self.failures else (f"{self.rec_avg:.3f}", f"{self.rec_std:.3f}")
        return [str(self.k_value), f"{self.gen_avg:.3f}", f"{self.gen_std:.3f}", *rec]


def run_trial(kind: str, alpha: int, c: int, k_max: int, b_threshold: int | None, seed: int):
    """One timed cycle. Returns ``(gen_seconds, rec_seconds, recovered)``.

    Only instance generation and recovery are timed; drawing ``T`` is not.
    """
    rng = random.Random(seed)
    if kind == "ssb":
        params = SsbParams(alpha, c, k_max)
        key = generate_escrow_key(params, rng)
        t0 = time.perf_counter()
        inst = ssb_generate(key, rng)
        t1 = time.perf_counter()
        try:
            got = set(ssb_recover(inst.N, key.T, k_max))
        except EscrowKeyError:
            got = None
        t2 = time.perf_counter()
        return t1 - t0, t2 - t1, got == {inst.p, inst.q}
    if kind == "tsb":
        params = TsbParams(alpha, c, k_max, b_threshold)
        key = generate_escrow_key(params, rng)
        t0 = time.perf_counter()
        inst = tsb_generate(key, rng)
        t1 = time.perf_counter()
        try:
            (p1, q1), (p2, q2) = tsb_recover(inst.N1, inst.N2, key.T, params.b_threshold, k_max)
            ok = {p1, q1} == {inst.p1, inst.q1} and {p2, q2} == {inst.p2, inst.q2}
        except EscrowKeyError:
            ok = False
        t2 = time.perf_counter()
        return t1 - t0, t2 - t1, ok
    raise DomainError(f"unknown backdoor kind {kind!r}")


def _trial_args(args):
    return run_trial(*args)


def run_bench(
    kind: str,
    alpha: int,
    c: int,
    k_values,
    trials: int,
    seed: int | None = None,
    *,
    b_threshold: int | None = None,
    jobs: int = 1,
) -> list[BenchRecord]:
    """Run ``trials`` cycles for each K and aggregate mean and population std-dev.

    Per-trial seeds are drawn from ``seed`` up front, so the results do not
    depend on ``jobs``.
    """
    k_values = list(k_values)
    if not k_values:
        raise DomainError("k_values must not be empty")
    if trials < 1:
        raise DomainError("trials must be at least 1")
    master = random.Random(seed)
    tasks = [
        (kind, alpha, c, k, b_threshold, master.getrandbits(64))
        for k in k_values
        for _ in range(trials)
    ]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_trial_args, tasks))
    else:
        results = [run_trial(*t) for t in tasks]

    records = []
    for i, k in enumerate(k_values):
        chunk = results[i * trials : (i + 1) * trials]
        gen = [r[0] for r in chunk]
        rec = [r[1] for r in chunk]
        records.append(
            BenchRecord(
                k,
                statistics.fmean(gen),
                statistics.pstdev(gen),
                statistics.fmean(rec),
                statistics.pstdev(rec),
                sum(1 for r in chunk if not r[2]),
            )
        )
    return records


def write_csv(records, stream) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for rec in records:
        writer.writerow(rec.csv_row())
