"""Histogram estimators for local Renyi differential privacy of order alpha."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np
from scipy.special import logsumexp

from .core import (
    DEFAULT_N_CAP, EstimateReport, HistogramPair, TheoremInapplicableError,
    min_n_satisfying, miss_probability_bound,
)
from .ldp import (
    PRACTICAL, THEORETICAL, GridPlan, PairEstimate, _check_gamma_delta, _check_pair,
    _seed_out, run_grid, sample_histogram,
)
from .mechanisms import ContinuousMechanism, Interval, Mechanism, Seed


@dataclass(frozen=True)
class LrdpConstants:
    tau0: float
    tau1: float
    K: float
    Kprime: float


def lrdp_constants(alpha: float, C: float, W: float) -> LrdpConstants:
    tau0 = 1.0 / W - C * W / 2.0
    tau1 = 1.0 / W + C * W / 2.0
    K = 2.0 * tau1**alpha / tau0 ** (alpha - 1.0)
    Kp = tau0**alpha / tau1 ** (alpha - 1.0)
    return LrdpConstants(tau0, tau1, K, Kp)


def lrdp_gamma_prime(alpha: float, gamma: float, K: float, Kp: float) -> float:
    return min(gamma * Kp * (alpha - 1.0) / (2.0 * K * (2.0 * alpha - 1.0)),
               math.log(2.0) / (2.0 * alpha - 1.0))


def lrdp_bin_width_ok(alpha, gamma, C, w, c: LrdpConstants) -> bool:
    """C w K (2a-1) / (2 tau0 K' (a-1)) <= gamma/2."""
    return C * w * c.K * (2 * alpha - 1) / (2 * c.tau0 * c.Kprime * (alpha - 1)) <= gamma / 2


def lrdp_success_bound(n: int, m: int, y: float, gamma_prime: float) -> float:
    """1 - 2m(1-y)^n - 2m f(n, y, gamma')."""
    return 1.0 - miss_probability_bound(n, m, y, gamma_prime, 2.0, 2.0 * m)


@dataclass(frozen=True)
class LrdpPlan:
    alpha: float
    gamma: float | None
    delta: float | None
    C: float | None
    support: Interval
    tau0: float | None
    tau1: float | None
    K: float | None
    Kprime: float | None
    gamma_prime: float | None
    m: int
    n: int
    guarantee: str = THEORETICAL

    @property
    def w(self) -> float:
        return self.support.width / self.m

    def satisfies_bin_condition(self) -> bool:
        c = LrdpConstants(self.tau0, self.tau1, self.K, self.Kprime)
        return lrdp_bin_width_ok(self.alpha, self.gamma, self.C, self.w, c)

    def satisfies_sample_condition(self) -> bool:
        return lrdp_success_bound(self.n, self.m, self.w * self.tau0, self.gamma_prime) >= self.delta

    def to_dict(self) -> dict:
        d = asdict(self)
        d["support"] = self.support.to_list()
        d["w"] = self.w
        return d


def plan_lrdp(alpha: float, gamma: float, delta: float, C: float, support: Interval,
              cap: int = DEFAULT_N_CAP) -> LrdpPlan:
    _check_gamma_delta(gamma, delta)
    if not alpha > 1:
        raise ValueError("alpha must exceed 1")
    if C < 0:
        raise ValueError("C must be non-negative")
    W = support.width
    if C >= 2.0 / W**2:
        raise TheoremInapplicableError(C, W, gamma)
    c = lrdp_constants(alpha, C, W)
    gp = lrdp_gamma_prime(alpha, gamma, c.K, c.Kprime)

    raw = W * C * c.K * (2 * alpha - 1) / (gamma * c.tau0 * c.Kprime * (alpha - 1))
    m = max(1, math.ceil(raw))
    # guard the ceiling against rounding either way
    while not lrdp_bin_width_ok(alpha, gamma, C, W / m, c):
        m += 1
    while m > 1 and lrdp_bin_width_ok(alpha, gamma, C, W / (m - 1), c):
        m -= 1

    y = (W / m) * c.tau0
    n = min_n_satisfying(lambda k: lrdp_success_bound(k, m, y, gp) >= delta, cap)
    plan = LrdpPlan(alpha, gamma, delta, C, support, c.tau0, c.tau1, c.K, c.Kprime, gp, m, n)
    if not (plan.satisfies_bin_condition() and plan.satisfies_sample_condition()):
        raise RuntimeError("constructed LRDP plan fails its own constraints")
    return plan


def practical_lrdp_plan(alpha: float, support: Interval, m: int, n: int,
                        gamma: float | None = None, delta: float | None = None) -> LrdpPlan:
    if not alpha > 1:
        raise ValueError("alpha must exceed 1")
    if m < 1 or n < 1:
        raise ValueError("m and n must be positive")
    return LrdpPlan(alpha, gamma, delta, None, support, None, None, None, None, None,
                    int(m), int(n), PRACTICAL)


# ---------------------------------------------------------------------------
# Plug-in divergence


def renyi_plugin(counts_p, counts_q, n: int, alpha: float) -> float:
    """(1/(a-1)) log sum_j (N_j/M_j)^a M_j/n, summed in log space."""
    N = np.asarray(counts_p, dtype=float)
    M = np.asarray(counts_q, dtype=float)
    if np.any(N <= 0) or np.any(M <= 0):
        raise ValueError("plug-in needs strictly positive counts")
    logN, logM = np.log(N), np.log(M)
    terms = alpha * (logN - logM) + logM - math.log(n)
    return float(logsumexp(terms) / (alpha - 1.0))


def renyi_plugin_direct(counts_p, counts_q, n: int, alpha: float) -> float:
    """Same quantity in plain arithmetic; only safe for small alpha."""
    total = sum((Nj / Mj) ** alpha * Mj / n for Nj, Mj in zip(counts_p, counts_q))
    return math.log(total) / (alpha - 1.0)


def lrdp_from_histogram(hist: HistogramPair, alpha: float,
                        symmetric: bool = True) -> tuple[float, int]:
    """Plug-in estimate; with ``symmetric`` the max of both directions.

    The second value is 0 for the p||q direction and 1 for q||p.
    """
    forward = renyi_plugin(hist.counts_p, hist.counts_q, hist.n, alpha)
    if not symmetric:
        return forward, 0
    backward = renyi_plugin(hist.counts_q, hist.counts_p, hist.n, alpha)
    return (forward, 0) if forward >= backward else (backward, 1)


def estimate_pair_lrdp(mechanism: Mechanism, x1, x2, plan: LrdpPlan, seed, *,
                       symmetric: bool = True, allow_equal: bool = False) -> PairEstimate:
    """Histogram estimate of D_alpha(p(.|x1) || p(.|x2))."""
    _check_pair(mechanism, x1, x2, allow_equal)
    m = mechanism.num_outcomes if mechanism.discrete else plan.m
    hist = sample_histogram(mechanism, x1, x2, plan.support, m, plan.n, seed)
    direction = "symmetric" if symmetric else "directed"
    if hist.has_empty_bin:
        return PairEstimate("failed-empty-bin", None, direction, plan, hist, _seed_out(seed), x1, x2)
    eps, side = lrdp_from_histogram(hist, plan.alpha, symmetric)
    return PairEstimate("succeeded", eps, direction, plan, hist, _seed_out(seed), x1, x2, side)


# ---------------------------------------------------------------------------
# Grid


def lrdp_grid_size(alpha: float, c: LrdpConstants, D: float, width_x: float,
                   gamma: float) -> int:
    """k >= 3(2a-1) K D (d-c) / (2(a-1) K' tau0 gamma), clamped to >= 2."""
    k = 3 * (2 * alpha - 1) * c.K * D * width_x / (2 * (alpha - 1) * c.Kprime * c.tau0 * gamma)
    return max(2, math.ceil(k))


def plan_grid_lrdp(alpha: float, gamma: float, delta: float, C: float, D: float,
                   X: Interval, Z: Interval, cap: int = DEFAULT_N_CAP) -> tuple[LrdpPlan, GridPlan]:
    """Inner pair plan at (gamma/3, sqrt(delta)) plus the bucket grid.

    The inner precision/confidence split mirrors the LDP grid estimator.
    """
    _check_gamma_delta(gamma, delta)
    if D < 0:
        raise ValueError("D must be non-negative")
    inner = plan_lrdp(alpha, gamma / 3.0, math.sqrt(delta), C, Z, cap)
    c = lrdp_constants(alpha, C, Z.width)
    return inner, GridPlan(X, D, lrdp_grid_size(alpha, c, D, X.width, gamma))


def estimate_grid_lrdp(mechanism: ContinuousMechanism, plan: LrdpPlan, grid: GridPlan,
                       seed: Seed, *, symmetric: bool = True, workers: int = 1) -> EstimateReport:
    return run_grid(estimate_pair_lrdp, "lrdp-grid", mechanism, plan, grid, seed,
                    symmetric=symmetric, workers=workers,
                    meta={"inner_call": "precision gamma/3, confidence sqrt(delta)"})
