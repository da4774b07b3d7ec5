"""Square minors of the prime-order character matrix and their conditioning."""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from typing import Sequence

import numpy as np

from .errors import InvalidInput, NotPrime, ResourceLimit

DEFAULT_ENUM_BUDGET = 10**6


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class MinorSpec:
    """Row shifts and column offsets selecting a square minor mod N."""

    N: int
    rows: tuple[int, ...]
    cols: tuple[int, ...]

    def __post_init__(self):
        n = len(self.rows)
        if not 1 <= n <= self.N or len(self.cols) != n:
            raise InvalidInput("rows and cols must have equal length in 1..N")
        for name, seq in (("rows", self.rows), ("cols", self.cols)):
            if any(not 0 <= v < self.N for v in seq):
                raise InvalidInput(f"{name} entries must lie in 0..N-1")
            if any(u >= v for u, v in zip(seq, seq[1:])):
                raise InvalidInput(f"{name} must be strictly increasing")

    def to_json(self) -> dict:
        return {"N": self.N, "rows": list(self.rows), "cols": list(self.cols)}


def minor_matrix(spec: MinorSpec) -> np.ndarray:
    """Entries e^{-2*pi*i*rows[l]*cols[r]/N}, with the angle reduced exactly
    mod N before trigonometric evaluation."""
    rows = np.asarray(spec.rows, dtype=np.int64)
    cols = np.asarray(spec.cols, dtype=np.int64)
    red = np.outer(rows, cols) % spec.N
    return np.exp(-2j * np.pi * red / spec.N)


def min_singular(spec: MinorSpec) -> float:
    return float(np.linalg.svd(minor_matrix(spec), compute_uv=False)[-1])


@dataclass(frozen=True)
class ChebotarevReport:
    worst_spec: MinorSpec
    worst_sigma: float
    specs_checked: int

    def to_json(self) -> dict:
        return {
            "worst_spec": self.worst_spec.to_json(),
            "worst_sigma": self.worst_sigma,
            "specs_checked": self.specs_checked,
        }


def chebotarev_check(
    N: int, max_size: int, budget: int = DEFAULT_ENUM_BUDGET
) -> ChebotarevReport:
    """Exhaust all square minors of size <= max_size and return the worst
    (smallest) minimal singular value; positive for prime N."""
    if not _is_prime(N):
        raise NotPrime(f"{N} is not prime")
    if not 1 <= max_size <= N:
        raise InvalidInput("max_size must lie in 1..N")
    total = sum(math.comb(N, n) ** 2 for n in range(1, max_size + 1))
    if total > budget:
        raise ResourceLimit(f"{total} minors exceed budget {budget}")
    worst_sigma = None
    worst_spec = None
    for n in range(1, max_size + 1):
        subsets = np.array(list(combinations(range(N), n)), dtype=np.int64)
        # batch of all row-choice x col-choice minors of size n
        prod = subsets[:, None, :, None] * subsets[None, :, None, :]
        mats = np.exp(-2j * np.pi * (prod % N) / N)
        sigmas = np.linalg.svd(mats, compute_uv=False)[..., -1]
        idx = np.unravel_index(np.argmin(sigmas), sigmas.shape)
        sigma = float(sigmas[idx])
        if worst_sigma is None or sigma < worst_sigma:
            worst_sigma = sigma
            worst_spec = MinorSpec(
                N, tuple(subsets[idx[0]].tolist()), tuple(subsets[idx[1]].tolist())
            )
    return ChebotarevReport(worst_spec=worst_spec, worst_sigma=worst_sigma, specs_checked=total)


def c_prime_bound(N: int, shifts: Sequence[int], fiber_sets: Sequence[Sequence[int]]) -> float:
    """Concrete value of the minor-conditioning constant for a construction:
    the minimum of sigma_min^2 over the supplied fiber column sets, pairing a
    fiber set of size n with the first n shifts."""
    shifts = [s % N for s in shifts]
    if len(set(shifts)) != len(shifts):
        raise InvalidInput("shifts must be distinct mod N")
    if not fiber_sets:
        raise InvalidInput("need at least one fiber set")
    best = None
    for fibers in fiber_sets:
        cols = tuple(sorted(int(k) % N for k in fibers))
        if len(set(cols)) != len(cols):
            raise InvalidInput("fiber offsets must be distinct mod N")
        n = len(cols)
        if n > len(shifts):
            raise InvalidInput("fiber set larger than the number of shifts")
        rows = tuple(sorted(shifts[:n]))
        sigma = min_singular(MinorSpec(N, rows, cols))
        val = sigma * sigma
        if best is None or val < best:
            best = val
    return best
