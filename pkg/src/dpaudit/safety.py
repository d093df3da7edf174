"""Empirical check of a provider's claimed Lipschitz constant.

Under a C-Lipschitz mechanism, adjacent histogram bins cannot differ by more
than 2c + Cw^2 (as a fraction of n) except with probability at most
8m exp(-n c^2 / 3). Running the estimator many times and counting how often
the event holds gives a frequency that should not fall far below that bound.
The check is necessary-only: passing it never certifies honesty.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import partial

import numpy as np

from .core import HistogramPair, parallel_map
from .ldp import LdpPlan, sample_histogram
from .mechanisms import ContinuousMechanism, Seed, child_seed, seed_repr


class NotApplicableError(ValueError):
    pass


def event_threshold(w: float, claimed_C: float, c: float) -> float:
    return 2.0 * c + claimed_C * w * w


def check_event(histogram: HistogramPair, w: float, claimed_C: float, c: float) -> bool:
    """True iff every adjacent-bin difference, divided by n, stays within 2c + Cw^2."""
    if histogram.m < 2:
        raise NotApplicableError("the adjacent-bin check needs at least two bins")
    if not c > 0:
        raise ValueError("slack c must be positive")
    limit = event_threshold(w, claimed_C, c)
    n = histogram.n
    for counts in (histogram.counts_p, histogram.counts_q):
        if np.any(np.abs(np.diff(counts)) / n > limit):
            return False
    return True


def theoretical_bound(n: int, m: int, c: float) -> float:
    """1 - 8m exp(-n c^2 / 3)."""
    return 1.0 - 8.0 * m * math.exp(-n * c * c / 3.0)


def samples_for_bound(m: int, c: float, required_probability: float) -> int:
    """Smallest n whose theoretical bound reaches ``required_probability``."""
    n = math.ceil(3.0 * math.log(8.0 * m / (1.0 - required_probability)) / (c * c))
    while theoretical_bound(n, m, c) < required_probability:
        n += 1
    return max(n, 1)


@dataclass(frozen=True)
class SafetyConfig:
    claimed_C: float
    c: float | None = None  # default claimed_C * w^2 / 2
    required_probability: float = 0.9
    runs: int = 1000
    sigmas: float = 3.0

    def __post_init__(self):
        if self.claimed_C < 0:
            raise ValueError("claimed C must be non-negative")
        if self.c is not None and not self.c > 0:
            raise ValueError("slack c must be positive")
        if not 0 < self.required_probability < 1:
            raise ValueError("required probability must lie in (0, 1)")
        if self.runs < 1:
            raise ValueError("runs must be positive")

    def slack(self, w: float) -> float:
        if self.c is not None:
            return self.c
        c = self.claimed_C * w * w / 2.0
        if not c > 0:
            raise ValueError("claimed C = 0 gives zero default slack; pass c explicitly")
        return c


@dataclass
class SafetyVerdict:
    events: np.ndarray
    empirical_frequency: float
    theoretical_bound: float
    decision_threshold: float
    suspicious: bool
    n: int
    m: int
    c: float
    claimed_C: float
    seed: object = None
    rule: str = field(default="")

    def to_dict(self) -> dict:
        return {
            "events": self.events.astype(int).tolist(),
            "empirical_frequency": self.empirical_frequency,
            "theoretical_bound": self.theoretical_bound,
            "decision_threshold": self.decision_threshold,
            "suspicious": self.suspicious, "n": self.n, "m": self.m, "c": self.c,
            "claimed_C": self.claimed_C, "seed": self.seed, "rule": self.rule,
        }


def _safety_run(r, *, mechanism, x1, x2, support, m, n, w, claimed_C, c, seed):
    hist = sample_histogram(mechanism, x1, x2, support, m, n, child_seed(seed, r))
    return check_event(hist, w, claimed_C, c)


def run_safety_protocol(mechanism: ContinuousMechanism, x1, x2, config: SafetyConfig,
                        base_plan: LdpPlan, seed: Seed, workers: int = 1) -> SafetyVerdict:
    """Repeat the estimator's sampling ``config.runs`` times and test the event.

    n is raised above the base plan's when needed so that the theoretical
    bound meets ``config.required_probability``. The verdict is suspicious
    when the observed frequency is more than ``config.sigmas`` binomial
    standard errors below the bound.
    """
    m, w = base_plan.m, base_plan.w
    if m < 2:
        raise NotApplicableError("the adjacent-bin check needs at least two bins")
    c = config.slack(w)
    n = max(base_plan.n, samples_for_bound(m, c, config.required_probability))
    bound = theoretical_bound(n, m, c)
    job = partial(_safety_run, mechanism=mechanism, x1=x1, x2=x2, support=base_plan.support,
                  m=m, n=n, w=w, claimed_C=config.claimed_C, c=c, seed=seed)
    events = np.array(parallel_map(job, range(config.runs), workers), dtype=bool)
    freq = float(events.mean())
    p = min(max(bound, 0.0), 1.0)
    threshold = bound - config.sigmas * math.sqrt(p * (1 - p) / config.runs)
    return SafetyVerdict(
        events, freq, bound, threshold, freq < threshold, n, m, c, config.claimed_C,
        seed_repr(seed),
        rule=f"suspicious if frequency < bound - {config.sigmas:g} binomial standard errors",
    )
