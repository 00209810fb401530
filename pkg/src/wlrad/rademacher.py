"""Empirical Rademacher complexity of functions constant on sample classes.

The class is every function that takes one value in [-1, 1] per class. For a
fixed sign vector the supremum picks ``sign(Z_j)`` on class ``j``, where
``Z_j`` is the sum of that class's signs, so the complexity is

    R_S = (1/m) * sum_j E|Z_j|,    Z_j ~ sum of mu_j independent signs.

Three routes are offered: closed form, literal enumeration of all sign
vectors, and Monte Carlo with a Hoeffding interval.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .partition import SamplePartition

EXACT_BINOMIAL_MAX_N = 1000
BRUTE_FORCE_MAX_M = 20
MC_CHUNK = 4096

# C(2k, k) / 4^k = (pi k)^(-1/2) * sum_i coef_i / k^i
_CENTRAL_BINOMIAL_SERIES = (
    1.0,
    -1.0 / 8,
    1.0 / 128,
    5.0 / 1024,
    -21.0 / 32768,
    -399.0 / 262144,
    869.0 / 4194304,
)


@dataclass(frozen=True)
class RademacherEstimate:
    value: float
    method: str
    trials: int | None = None
    delta: float | None = None
    half_width: float | None = None

    def contains(self, x: float) -> bool:
        if self.half_width is None:
            return x == self.value
        return abs(x - self.value) <= self.half_width

    def to_json(self) -> dict:
        return {
            "method": self.method,
            "value": self.value,
            "trials": self.trials,
            "delta": self.delta,
            "half_width": self.half_width,
        }


def _central_ratio(k: int) -> float:
    """C(2k, k) / 4^k for large k."""
    s = 0.0
    kp = 1.0
    for c in _CENTRAL_BINOMIAL_SERIES:
        s += c / kp
        kp *= k
    return s / math.sqrt(math.pi * k)


def expected_abs_rademacher_sum(n: int) -> float:
    """E|sigma_1 + ... + sigma_n| = n * C(n-1, floor((n-1)/2)) / 2^(n-1).

    Exact integer arithmetic up to ``EXACT_BINOMIAL_MAX_N``; above that an
    asymptotic series for the central binomial (relative error < 1e-14).
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    if n == 0:
        return 0.0
    if n <= EXACT_BINOMIAL_MAX_N:
        # int / int is correctly rounded
        return n * math.comb(n - 1, (n - 1) // 2) / (1 << (n - 1))
    big = n - 1
    k = big // 2
    if big % 2 == 0:
        return n * _central_ratio(k)
    # C(2k+1, k) / 2^(2k+1) = C(2k, k) / 4^k * (2k+1) / (2k+2)
    return n * _central_ratio(k) * (2 * k + 1) / (2 * k + 2)


def exact_rademacher(partition: SamplePartition) -> RademacherEstimate:
    total = math.fsum(expected_abs_rademacher_sum(mu) for mu in partition.multiplicities)
    return RademacherEstimate(total / partition.m, "exact")


def brute_force_rademacher(partition: SamplePartition, max_m: int = BRUTE_FORCE_MAX_M) -> RademacherEstimate:
    """Average over all 2^m sign vectors of the best in-class correlation.

    Works on the actual member indices of every class, not on multiplicities.
    """
    m = partition.m
    if m > max_m:
        raise ValueError(f"enumeration infeasible: m={m} exceeds {max_m}")
    member = np.zeros((m, partition.p), dtype=np.int64)
    for j, cls in enumerate(partition.classes):
        member[list(cls), j] = 1
    shifts = np.arange(m, dtype=np.int64)
    total = 0
    block = 1 << 16
    for start in range(0, 1 << m, block):
        ids = np.arange(start, min(start + block, 1 << m), dtype=np.int64)
        signs = 2 * ((ids[:, None] >> shifts) & 1) - 1
        total += int(np.abs(signs @ member).sum())
    # exact integer total, one rounding
    return RademacherEstimate(total / (m << m), "brute_force")


def hoeffding_half_width(trials: int, delta: float) -> float:
    """Two-sided Hoeffding radius for the mean of ``trials`` values in [0, 1]."""
    return math.sqrt(math.log(2.0 / delta) / (2.0 * trials))


def _chunk_total(mu: np.ndarray, size: int, seed_seq: np.random.SeedSequence) -> int:
    rng = np.random.Generator(np.random.PCG64(seed_seq))
    # a sum of mu fresh signs is 2 * Binomial(mu, 1/2) - mu
    heads = rng.binomial(mu, 0.5, size=(size, mu.size))
    return int(np.abs(2 * heads - mu).sum())


def mc_rademacher(
    partition: SamplePartition,
    trials: int,
    seed: int = 0,
    delta: float = 0.05,
    workers: int = 1,
) -> RademacherEstimate:
    """Monte Carlo estimate with a Hoeffding interval.

    Trials are cut into fixed chunks, each with its own child seed spawned
    from ``seed``, and chunk totals are exact integers, so the result does
    not depend on ``workers``.
    """
    if trials < 1:
        raise ValueError("trials must be at least 1")
    if not 0.0 < delta < 1.0:
        raise ValueError("delta must lie in (0, 1)")
    mu = np.asarray(partition.multiplicities, dtype=np.int64)
    sizes = [MC_CHUNK] * (trials // MC_CHUNK)
    if trials % MC_CHUNK:
        sizes.append(trials % MC_CHUNK)
    children = np.random.SeedSequence(seed).spawn(len(sizes))
    jobs = list(zip(sizes, children))
    if workers > 1 and len(jobs) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            totals = list(pool.map(lambda job: _chunk_total(mu, *job), jobs))
    else:
        totals = [_chunk_total(mu, size, ss) for size, ss in jobs]
    value = sum(totals) / (partition.m * trials)
    return RademacherEstimate(value, "monte_carlo", trials, delta, hoeffding_half_width(trials, delta))
