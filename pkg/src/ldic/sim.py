"""Seeded Monte Carlo runs of the codec."""

from __future__ import annotations

import csv
import io
import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from statistics import NormalDist

import numpy as np

from .channel import format_rational, parse_rational
from .gf2 import ParameterError
from .scheme import SchemeConfig, run_trial

CSV_COLUMNS = ("trial_count", "r1p", "r1c", "r2p", "r2c", "N", "B", "err1", "err2", "outage")


def trial_seed(master_seed: int, index: int) -> np.random.SeedSequence:
    """Seed of trial ``index``: a SeedSequence over the pair (master_seed, index)."""
    return np.random.SeedSequence([int(master_seed), int(index)])


@dataclass
class SimResult:
    config: SchemeConfig
    master_seed: int
    trials: int
    err1: int = 0
    err2: int = 0
    either: int = 0
    outage: int = 0
    inconsistent: int = 0
    tx_disagree: int = 0
    # block index -> number of trials in which that block was wrong at either receiver
    block_errors: dict = field(default_factory=dict)
    per_trial: list = field(default_factory=list)  # (err1, err2) per trial, in index order
    wall_time: float = 0.0

    @property
    def error_rate(self) -> float:
        return self.either / self.trials

    def to_dict(self) -> dict:
        # wall time is left out so that equal inputs give equal bytes
        return {
            "config": self.config.to_dict(),
            "master_seed": self.master_seed,
            "trials": self.trials,
            "err1": self.err1,
            "err2": self.err2,
            "either": self.either,
            "outage": self.outage,
            "inconsistent": self.inconsistent,
            "tx_disagree": self.tx_disagree,
            "block_errors": {str(b): self.block_errors.get(b, 0) for b in range(1, self.config.B + 1)},
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    def csv_row(self) -> dict:
        c = self.config
        return {
            "trial_count": self.trials,
            "r1p": format_rational(c.R1p),
            "r1c": format_rational(c.R1c),
            "r2p": format_rational(c.R2p),
            "r2c": format_rational(c.R2c),
            "N": c.N,
            "B": c.B,
            "err1": self.err1,
            "err2": self.err2,
            "outage": self.outage,
        }


def to_csv(results) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
    w.writeheader()
    for r in results:
        w.writerow(r.csv_row())
    return buf.getvalue()


def _one(args):
    cfg, master_seed, index, genie = args
    r = run_trial(cfg, trial_seed(master_seed, index), genie=genie)
    return index, r.err[1], r.err[2], r.outage, r.consistent, r.tx_agree, r.block_err


def run_monte_carlo(
    cfg: SchemeConfig,
    trials: int,
    master_seed: int = 0,
    workers: int = 1,
    genie: bool = False,
    order=None,
) -> SimResult:
    """Run ``trials`` independent trials and aggregate.

    Trial i always uses ``trial_seed(master_seed, i)``, so the result does not
    depend on ``workers`` or on the execution ``order`` (a permutation of
    trial indices, mostly useful for testing that claim).
    """
    if trials < 1:
        raise ParameterError(f"trials must be at least 1, got {trials}")
    indices = list(range(trials)) if order is None else list(order)
    if sorted(indices) != list(range(trials)):
        raise ParameterError("order must be a permutation of the trial indices")
    start = time.perf_counter()
    jobs = [(cfg, master_seed, i, genie) for i in indices]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_one, jobs, chunksize=max(1, trials // (4 * workers))))
    else:
        rows = [_one(j) for j in jobs]
    rows.sort(key=lambda r: r[0])
    res = SimResult(cfg, master_seed, trials)
    for _, e1, e2, out, cons, agree, blocks in rows:
        res.err1 += e1
        res.err2 += e2
        res.either += e1 or e2
        res.outage += out
        res.inconsistent += not cons
        res.tx_disagree += not agree
        res.per_trial.append((e1, e2))
        for b, (f1, f2) in enumerate(zip(blocks[1], blocks[2]), start=1):
            if f1 or f2:
                res.block_errors[b] = res.block_errors.get(b, 0) + 1
    res.wall_time = time.perf_counter() - start
    return res


def wilson_interval(errors: int, trials: int, level="95/100") -> tuple[float, float]:
    """Wilson score interval for an error probability."""
    if trials < 1 or not 0 <= errors <= trials:
        raise ParameterError(f"need 0 <= errors <= trials and trials >= 1, got {errors}/{trials}")
    level = parse_rational(level) if not isinstance(level, Fraction) else level
    if not 0 < level < 1:
        raise ParameterError(f"confidence level must lie in (0, 1), got {level}")
    z = NormalDist().inv_cdf(0.5 + float(level) / 2)
    n = trials
    phat = errors / n
    denom = 1 + z * z / n
    centre = (phat + z * z / (2 * n)) / denom
    half = z * ((phat * (1 - phat) / n + z * z / (4 * n * n)) ** 0.5) / denom
    low = 0.0 if errors == 0 else max(0.0, centre - half)
    high = 1.0 if errors == n else min(1.0, centre + half)
    return low, high
