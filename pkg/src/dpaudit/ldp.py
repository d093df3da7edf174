"""Histogram estimators for the epsilon of local differential privacy."""

from __future__ import annotations

import math
import time
from dataclasses import asdict, dataclass
from functools import partial
from typing import Callable, Union

import numpy as np

from .core import (
    DEFAULT_N_CAP, BinGrid, EstimateReport, HistogramPair, TheoremInapplicableError,
    count_categories, count_histogram, min_n_satisfying, miss_probability_bound, parallel_map,
)
from .mechanisms import (
    ContinuousMechanism, DiscreteMechanism, DomainError, Interval, Mechanism, Seed,
    child_seed, seed_repr,
)

THEORETICAL = "theoretical"
PRACTICAL = "practical-no-guarantee"


@dataclass(frozen=True)
class LdpPlan:
    gamma: float | None
    delta: float | None
    C: float | None
    support: Interval
    tau: float | None
    m: int
    n: int
    guarantee: str = THEORETICAL

    @property
    def w(self) -> float:
        return self.support.width / self.m

    def to_dict(self) -> dict:
        d = asdict(self)
        d["support"] = self.support.to_list()
        d["w"] = self.w
        return d


@dataclass(frozen=True)
class DiscreteLdpPlan:
    gamma: float | None
    delta: float | None
    p_min: float | None
    m: int
    n: int
    guarantee: str = THEORETICAL

    def to_dict(self) -> dict:
        return asdict(self)


def ldp_bin_count(C: float, W: float, gamma: float) -> tuple[float, int]:
    """tau = 1/W - CW/2 and m = ceil(6CW / (tau gamma)), clamped to >= 1."""
    tau = 1.0 / W - C * W / 2.0
    return tau, max(1, math.ceil(6.0 * C * W / (tau * gamma)))


def ldp_sample_requirement(m: int, y: float, gamma: float, delta: float,
                           cap: int = DEFAULT_N_CAP) -> int:
    """Minimal n with 2m(1-y)^n + 4 f(n, y, gamma/12) <= 1 - delta."""
    return min_n_satisfying(
        lambda n: miss_probability_bound(n, m, y, gamma / 12.0, 2.0, 4.0) <= 1.0 - delta, cap)


def _check_gamma_delta(gamma: float, delta: float) -> None:
    if not gamma > 0:
        raise ValueError("precision gamma must be positive")
    if not 0 < delta < 1:
        raise ValueError("confidence delta must lie in (0, 1)")


def plan_ldp(gamma: float, delta: float, C: float, support: Interval,
             cap: int = DEFAULT_N_CAP) -> LdpPlan:
    """Bin count and sample size that guarantee precision gamma w.p. >= delta."""
    _check_gamma_delta(gamma, delta)
    if C < 0:
        raise ValueError("C must be non-negative")
    W = support.width
    if C >= 2.0 / W**2:
        raise TheoremInapplicableError(C, W, gamma)
    tau, m = ldp_bin_count(C, W, gamma)
    n = ldp_sample_requirement(m, (W / m) * tau, gamma, delta, cap)
    return LdpPlan(gamma, delta, C, support, tau, m, n)


def practical_ldp_plan(support: Interval, m: int, n: int, gamma: float | None = None,
                       delta: float | None = None, C: float | None = None) -> LdpPlan:
    """User-chosen (m, n); the accuracy guarantee is void."""
    if m < 1 or n < 1:
        raise ValueError("m and n must be positive")
    return LdpPlan(gamma, delta, C, support, None, int(m), int(n), PRACTICAL)


# ---------------------------------------------------------------------------
# Pair estimation


@dataclass
class PairEstimate:
    status: str
    epsilon_hat: float | None
    direction: str
    plan: Union[LdpPlan, DiscreteLdpPlan, object]
    histogram: HistogramPair
    seed: object
    x1: object = None
    x2: object = None
    argmax_bin: int | None = None

    @property
    def succeeded(self) -> bool:
        return self.status == "succeeded"

    def to_dict(self) -> dict:
        return {"status": self.status, "epsilon_hat": self.epsilon_hat,
                "direction": self.direction, "x1": self.x1, "x2": self.x2,
                "argmax_bin": self.argmax_bin, "plan": self.plan.to_dict(),
                "histogram": self.histogram.to_dict(), "seed": self.seed}


def log_ratios(hist: HistogramPair) -> np.ndarray:
    """log(N_j) - log(M_j), exactly 0 where the counts agree."""
    N, M = hist.counts_p, hist.counts_q
    with np.errstate(divide="ignore"):
        out = np.log(N) - np.log(M)
    out[N == M] = 0.0
    return out


def ldp_from_histogram(hist: HistogramPair, symmetric: bool = True) -> tuple[float, int]:
    """max_j log(N_j/M_j) (or max_j |.| when symmetric); lowest index wins ties."""
    r = log_ratios(hist)
    if symmetric:
        r = np.abs(r)
    j = int(np.argmax(r))
    return float(r[j]), j


def side_seeds(seed) -> tuple[Seed, Seed]:
    if isinstance(seed, tuple):
        return seed
    return child_seed(seed, 0), child_seed(seed, 1)


def sample_histogram(mechanism: Mechanism, x1, x2, support: Interval | None, m: int,
                     n: int, seed) -> HistogramPair:
    s1, s2 = side_seeds(seed)
    a = mechanism.draw(x1, n, s1)
    b = mechanism.draw(x2, n, s2)
    if mechanism.discrete:
        return count_categories(m, a, b)
    return count_histogram(BinGrid(support, m), a, b)


def _check_pair(mechanism, x1, x2, allow_equal):
    mechanism.check_secret(x1)
    mechanism.check_secret(x2)
    if x1 == x2 and not allow_equal:
        raise ValueError("x1 and x2 must differ")


def _seed_out(seed):
    if isinstance(seed, tuple):
        return [seed_repr(s) for s in seed]
    return seed_repr(seed)


def estimate_pair_ldp(mechanism: Mechanism, x1, x2, plan: LdpPlan, seed, *,
                      symmetric: bool = True, allow_equal: bool = False) -> PairEstimate:
    """Histogram estimate of eps*(x1, x2).

    ``seed`` is a root seed or an explicit ``(seed_x1, seed_x2)`` pair.
    An empty bin on either side is reported as ``failed-empty-bin``.
    """
    _check_pair(mechanism, x1, x2, allow_equal)
    hist = sample_histogram(mechanism, x1, x2, plan.support, plan.m, plan.n, seed)
    direction = "symmetric" if symmetric else "directed"
    if hist.has_empty_bin:
        return PairEstimate("failed-empty-bin", None, direction, plan, hist, _seed_out(seed), x1, x2)
    eps, j = ldp_from_histogram(hist, symmetric)
    return PairEstimate("succeeded", eps, direction, plan, hist, _seed_out(seed), x1, x2, j)


def discrete_ldp_plan(m: int, gamma: float, delta: float, p_min: float,
                      cap: int = DEFAULT_N_CAP) -> DiscreteLdpPlan:
    """Categories act as bins; the bin-mass lower bound wτ becomes p_min."""
    _check_gamma_delta(gamma, delta)
    if not p_min > 0:
        raise DomainError("p_min must be positive")
    if p_min * m > 1 + 1e-12:
        raise DomainError("p_min cannot exceed 1/m")
    return DiscreteLdpPlan(gamma, delta, p_min, m,
                           ldp_sample_requirement(m, min(p_min, 1.0), gamma, delta, cap))


def estimate_discrete_ldp(mechanism: DiscreteMechanism, x1, x2, gamma: float | None,
                          delta: float | None, p_min: float | None, seed, *,
                          n: int | None = None, symmetric: bool = True,
                          allow_equal: bool = False) -> PairEstimate:
    """Estimator for finite output domains. Passing ``n`` voids the guarantee."""
    if not mechanism.discrete:
        raise TypeError("estimate_discrete_ldp needs a mechanism with a finite output domain")
    _check_pair(mechanism, x1, x2, allow_equal)
    m = mechanism.num_outcomes
    if n is None:
        plan = discrete_ldp_plan(m, gamma, delta, p_min)
    else:
        if p_min is not None and not p_min > 0:
            raise DomainError("p_min must be positive")
        plan = DiscreteLdpPlan(gamma, delta, p_min, m, int(n), PRACTICAL)
    hist = sample_histogram(mechanism, x1, x2, None, m, plan.n, seed)
    direction = "symmetric" if symmetric else "directed"
    if hist.has_empty_bin:
        return PairEstimate("failed-empty-bin", None, direction, plan, hist, _seed_out(seed), x1, x2)
    eps, j = ldp_from_histogram(hist, symmetric)
    return PairEstimate("succeeded", eps, direction, plan, hist, _seed_out(seed), x1, x2, j)


# ---------------------------------------------------------------------------
# Grid over the secret interval


@dataclass(frozen=True)
class GridPlan:
    X: Interval
    D: float
    k: int

    def __post_init__(self):
        if self.k < 2:
            raise ValueError("grid needs at least two buckets")

    @property
    def midpoints(self) -> np.ndarray:
        return self.X.midpoints(self.k)

    def to_dict(self) -> dict:
        return {"X": self.X.to_list(), "D": self.D, "k": self.k,
                "midpoints": self.midpoints.tolist()}


def ldp_grid_size(D: float, width_x: float, tau: float, gamma: float) -> int:
    return max(2, math.ceil(3.0 * D * width_x / (tau * gamma)))


def plan_grid_ldp(gamma: float, delta: float, C: float, D: float, X: Interval,
                  Z: Interval, cap: int = DEFAULT_N_CAP) -> tuple[LdpPlan, GridPlan]:
    """Inner pair plan (precision gamma/3, confidence sqrt(delta)) and bucket grid."""
    _check_gamma_delta(gamma, delta)
    if D < 0:
        raise ValueError("D must be non-negative")
    inner = plan_ldp(gamma / 3.0, math.sqrt(delta), C, Z, cap)
    return inner, GridPlan(X, D, ldp_grid_size(D, X.width, inner.tau, gamma))


def _grid_pair_job(args, *, estimator: Callable, mechanism, plan, seed, symmetric):
    i, j, xi, xj = args
    est = estimator(mechanism, xi, xj, plan, child_seed(seed, i, j), symmetric=symmetric)
    return {"i": i, "j": j, "x_i": xi, "x_j": xj, "status": est.status,
            "estimate": est.epsilon_hat}


def run_grid(estimator: Callable, kind: str, mechanism: Mechanism, plan, grid: GridPlan,
             seed: Seed, *, symmetric: bool = True, workers: int = 1,
             meta: dict | None = None) -> EstimateReport:
    """Run ``estimator`` on every pair of bucket midpoints and take the max.

    Unordered pairs when ``symmetric``, ordered pairs otherwise. Failed pairs
    are ignored; the run fails only if every pair failed. Ties go to the
    lexicographically first pair.
    """
    start = time.perf_counter()
    xs = [float(x) for x in grid.midpoints]
    # a symmetric estimate covers both orders of a pair; a directed one needs each
    jobs = [(i, j, xs[i], xs[j]) for i in range(grid.k) for j in range(grid.k)
            if (i < j if symmetric else i != j)]
    job = partial(_grid_pair_job, estimator=estimator, mechanism=mechanism, plan=plan,
                  seed=seed, symmetric=symmetric)
    pairs = parallel_map(job, jobs, workers)
    ok = [p for p in pairs if p["status"] == "succeeded"]
    if ok:
        best = max(ok, key=lambda p: p["estimate"])  # max keeps the first maximum
        status, estimate, argmax = "succeeded", best["estimate"], (best["x_i"], best["x_j"])
    else:
        status, estimate, argmax = "failed", None, None
    info = {"failed_pairs": len(pairs) - len(ok), "direction":
            "symmetric" if symmetric else "directed"}
    info.update(meta or {})
    return EstimateReport(kind, status, estimate, argmax, plan.to_dict(), grid.to_dict(),
                          pairs, seed_repr(seed), plan.guarantee,
                          time.perf_counter() - start, info)


def estimate_grid_ldp(mechanism: ContinuousMechanism, plan: LdpPlan, grid: GridPlan,
                      seed: Seed, *, symmetric: bool = True, workers: int = 1) -> EstimateReport:
    """Max of pair estimates over bucket midpoints; ``plan`` is the inner plan."""
    return run_grid(estimate_pair_ldp, "ldp-grid", mechanism, plan, grid, seed,
                    symmetric=symmetric, workers=workers)
