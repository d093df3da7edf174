"""Shared statistical machinery for the histogram estimators."""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

from .mechanisms import DomainError, Interval

DEFAULT_N_CAP = 10**12


class PlanError(ValueError):
    """Base class for sample-plan construction failures."""


class TheoremInapplicableError(PlanError):
    """The claimed Lipschitz constant violates C < 2/W^2; no guarantee exists."""

    def __init__(self, C: float, W: float, gamma: float | None = None):
        self.C, self.W = C, W
        self.hint_m = math.ceil(100 / gamma) if gamma else None
        msg = f"C={C:g} >= 2/W^2={2 / W**2:g}: the accuracy guarantee does not apply"
        if self.hint_m is not None:
            msg += f"; use practical mode with explicit m and n (e.g. m={self.hint_m})"
        super().__init__(msg)


class InfeasiblePlanError(PlanError):
    """No sample count below the search cap satisfies the requirement."""


def lipschitz_density_bounds(C: float, W: float) -> tuple[float, float]:
    """Pointwise bounds on any C-Lipschitz density over an interval of width W.

    The lower bound is vacuous (<= 0) once C >= 2/W^2.
    """
    if W <= 0:
        raise ValueError("W must be positive")
    if C < 0:
        raise ValueError("C must be non-negative")
    return 1.0 / W - C * W / 2.0, 1.0 / W + C * W / 2.0


def _check_f_args(x, y, z):
    if not x > 0:
        raise DomainError(f"x must be positive, got {x}")
    if not 0 < y <= 1:
        raise DomainError(f"y must lie in (0, 1], got {y}")
    if not z > 0:
        raise DomainError(f"z must be positive, got {z}")


def log_concentration_f(x: float, y: float, z: float) -> float:
    """Natural log of :func:`concentration_f`, evaluated without under/overflow."""
    _check_f_args(x, y, z)
    t1 = -x * y * math.expm1(z) ** 2 / (1.0 + math.exp(z))
    t2 = -x * y * math.expm1(-z) ** 2 / 2.0
    numerator = np.logaddexp(t1, t2)
    if y == 1.0:
        return float(numerator)
    # 1 - (1 - y)^x, kept accurate when x*y is tiny
    log_tail = x * math.log1p(-y)
    denominator = math.log(-math.expm1(log_tail))
    return float(numerator - denominator)


def concentration_f(x: float, y: float, z: float) -> float:
    """Tail bound for |log S_n - log np| > z given S_n > 0, S_n ~ Bin(x, y)."""
    return math.exp(log_concentration_f(x, y, z))


def min_n_satisfying(predicate: Callable[[int], bool], cap: int = DEFAULT_N_CAP) -> int:
    """Smallest positive n with ``predicate(n)`` true, for a monotone predicate.

    Doubles until the predicate holds, then bisects.
    """
    if predicate(1):
        return 1
    lo, hi = 1, 2
    while not predicate(hi):
        if hi >= cap:
            raise InfeasiblePlanError(
                f"no sample count up to {cap:.3g} meets the requirement; "
                "use practical mode with explicit m and n")
        lo, hi = hi, min(2 * hi, cap)
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if predicate(mid):
            hi = mid
        else:
            lo = mid
    return hi


def miss_probability_bound(n: int, m: int, y: float, z: float, empty_weight: float,
                           tail_weight: float) -> float:
    """``empty_weight*m*(1-y)^n + tail_weight*f(n, y, z)``.

    Covers both the LDP sample requirement (weights 2m and 4) and the LRDP
    one (weights 2m and 2m).
    """
    empty = 0.0 if y >= 1.0 else math.exp(n * math.log1p(-y))
    return empty_weight * m * empty + tail_weight * math.exp(log_concentration_f(n, y, z))


# ---------------------------------------------------------------------------
# Histograms


@dataclass(frozen=True)
class BinGrid:
    support: Interval
    m: int

    def __post_init__(self):
        if int(self.m) != self.m or self.m < 1:
            raise ValueError("bin count m must be a positive integer")

    @property
    def w(self) -> float:
        return self.support.width / self.m

    @property
    def edges(self) -> np.ndarray:
        e = self.support.lo + self.w * np.arange(self.m + 1)
        e[-1] = self.support.hi
        return e

    def bin_index(self, samples) -> np.ndarray:
        s = np.asarray(samples, dtype=float)
        if s.size and not self.support.contains(s):
            raise DomainError("sample outside the output interval: the mechanism or "
                              "the configured support is wrong")
        idx = np.searchsorted(self.edges, s, side="right") - 1
        # last bin is closed at b
        return np.minimum(idx, self.m - 1)

    def counts(self, samples) -> np.ndarray:
        return np.bincount(self.bin_index(samples), minlength=self.m).astype(np.int64)


@dataclass(frozen=True)
class HistogramPair:
    counts_p: np.ndarray
    counts_q: np.ndarray
    n: int

    def __post_init__(self):
        if self.counts_p.shape != self.counts_q.shape:
            raise ValueError("histograms must have the same number of bins")
        if int(self.counts_p.sum()) != self.n or int(self.counts_q.sum()) != self.n:
            raise ValueError("each histogram must sum to n")

    @property
    def m(self) -> int:
        return len(self.counts_p)

    @property
    def has_empty_bin(self) -> bool:
        return bool(np.any(self.counts_p == 0) or np.any(self.counts_q == 0))

    def swapped(self) -> "HistogramPair":
        return HistogramPair(self.counts_q, self.counts_p, self.n)

    def to_dict(self) -> dict:
        return {"n": self.n, "counts_p": self.counts_p.tolist(),
                "counts_q": self.counts_q.tolist()}


def count_histogram(grid: BinGrid, samples_p, samples_q) -> HistogramPair:
    samples_p = np.asarray(samples_p, dtype=float)
    samples_q = np.asarray(samples_q, dtype=float)
    if samples_p.shape != samples_q.shape:
        raise ValueError("both sample lists must have the same length")
    return HistogramPair(grid.counts(samples_p), grid.counts(samples_q), len(samples_p))


def count_categories(num_outcomes: int, samples_p, samples_q) -> HistogramPair:
    """Histogram for finite output domains {0, ..., num_outcomes - 1}."""
    samples_p = np.asarray(samples_p)
    samples_q = np.asarray(samples_q)
    if samples_p.shape != samples_q.shape:
        raise ValueError("both sample lists must have the same length")
    for s in (samples_p, samples_q):
        if s.size and (s.min() < 0 or s.max() >= num_outcomes):
            raise DomainError("sample outside the finite output domain")
    return HistogramPair(np.bincount(samples_p, minlength=num_outcomes).astype(np.int64),
                         np.bincount(samples_q, minlength=num_outcomes).astype(np.int64),
                         len(samples_p))


# ---------------------------------------------------------------------------
# Reports and scheduling


@dataclass
class EstimateReport:
    """Outcome of a grid (all-pairs) estimation run."""

    kind: str
    status: str
    estimate: float | None
    argmax_pair: tuple[float, float] | None
    plan: dict
    grid: dict
    pairs: list[dict]
    seed: object
    guarantee: str
    wall_time: float = 0.0
    meta: dict = field(default_factory=dict)

    @property
    def succeeded(self) -> bool:
        return self.status == "succeeded"

    def to_dict(self) -> dict:
        return {
            "kind": self.kind, "status": self.status, "estimate": self.estimate,
            "argmax_pair": list(self.argmax_pair) if self.argmax_pair else None,
            "plan": self.plan, "grid": self.grid, "pairs": self.pairs,
            "seed": self.seed, "guarantee": self.guarantee,
            "wall_time": self.wall_time, "meta": self.meta,
        }


def default_workers() -> int:
    return os.cpu_count() or 1


def parallel_map(fn: Callable, items: Iterable, workers: int = 1) -> list:
    """Ordered map; results never depend on ``workers``."""
    items = list(items)
    if workers <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items, chunksize=max(1, len(items) // (4 * workers))))
