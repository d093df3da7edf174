"""Reference obfuscation mechanisms with a black-box sampling interface.

Every mechanism exposes ``draw(x, count, seed)``. Continuous mechanisms also
expose their exact ``density``/``cdf``/``inv_cdf`` so that the oracle and the
tests can check the estimators against ground truth; the estimators
themselves only ever call ``draw``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence, Union

import numpy as np
from scipy import special, stats

Seed = Union[int, np.random.SeedSequence]


class DomainError(ValueError):
    """A value falls outside the domain a mechanism or routine is defined on."""


# ---------------------------------------------------------------------------
# Seeds


def as_seed_sequence(seed: Seed) -> np.random.SeedSequence:
    if isinstance(seed, np.random.SeedSequence):
        return seed
    if isinstance(seed, (int, np.integer)) and not isinstance(seed, bool):
        if seed < 0:
            raise ValueError(f"seed must be non-negative, got {seed}")
        return np.random.SeedSequence(int(seed))
    raise TypeError(f"unsupported seed type {type(seed).__name__}")


def child_seed(seed: Seed, *key: int) -> np.random.SeedSequence:
    """Derive a child seed by appending ``key`` to the parent's spawn key.

    The scheme is a pure counter: run ``r`` of a root seed ``s`` is always
    ``SeedSequence(s, spawn_key=(r,))`` and side ``k`` of that run is
    ``spawn_key=(r, k)``, so results never depend on scheduling order.
    """
    parent = as_seed_sequence(seed)
    return np.random.SeedSequence(
        entropy=parent.entropy, spawn_key=tuple(parent.spawn_key) + tuple(int(k) for k in key)
    )


def seed_repr(seed: Seed) -> dict | int:
    """JSON-friendly description of a seed."""
    if isinstance(seed, np.random.SeedSequence):
        return {"entropy": int(seed.entropy), "spawn_key": list(seed.spawn_key)}
    return int(seed)


def open_uniform(rng: np.random.Generator, count: int) -> np.ndarray:
    # rng.random() is k * 2**-53 with k in [0, 2**53); shifting by half a step
    # keeps every draw strictly inside (0, 1).
    return rng.random(count) + 2.0**-54


# ---------------------------------------------------------------------------
# Domains


@dataclass(frozen=True)
class Interval:
    lo: float
    hi: float

    def __post_init__(self):
        if not (math.isfinite(self.lo) and math.isfinite(self.hi)):
            raise ValueError("interval endpoints must be finite")
        if not self.lo < self.hi:
            raise ValueError(f"interval needs lo < hi, got [{self.lo}, {self.hi}]")

    @property
    def width(self) -> float:
        return self.hi - self.lo

    def contains(self, values) -> bool:
        v = np.asarray(values, dtype=float)
        return bool(np.all((v >= self.lo) & (v <= self.hi)))

    def check(self, values, name: str = "value") -> None:
        if not self.contains(values):
            raise DomainError(f"{name} outside [{self.lo}, {self.hi}]")

    def midpoints(self, k: int) -> np.ndarray:
        return self.lo + (np.arange(1, k + 1) - 0.5) * self.width / k

    def to_list(self) -> list[float]:
        return [self.lo, self.hi]


UNIT = Interval(0.0, 1.0)


# ---------------------------------------------------------------------------
# Truncated Laplace closed forms


def laplace_normalizer(x, B: float, support: Interval):
    """K_{x,B} = 1 / (B (2 - e^{-(x-a)/B} - e^{-(b-x)/B}))."""
    x = np.asarray(x, dtype=float)
    a, b = support.lo, support.hi
    return 1.0 / (B * (2.0 - np.exp(-(x - a) / B) - np.exp(-(b - x) / B)))


def trunc_laplace_density(z, x, B: float, support: Interval = UNIT):
    if B <= 0:
        raise ValueError("scale B must be positive")
    support.check(z, "z")
    support.check(x, "x")
    z = np.asarray(z, dtype=float)
    return laplace_normalizer(x, B, support) * np.exp(-np.abs(z - x) / B)


def trunc_laplace_cdf(z, x, B: float, support: Interval = UNIT):
    if B <= 0:
        raise ValueError("scale B must be positive")
    support.check(z, "z")
    support.check(x, "x")
    z = np.asarray(z, dtype=float)
    x = np.asarray(x, dtype=float)
    bk = B * laplace_normalizer(x, B, support)
    left_mass = -np.expm1(-(x - support.lo) / B)
    out = bk * (np.sign(z - x) * -np.expm1(-np.abs(z - x) / B) + left_mass)
    return np.clip(out, 0.0, 1.0)


def trunc_laplace_inv_cdf(p, x: float, B: float, support: Interval = UNIT):
    """Closed-form inverse of :func:`trunc_laplace_cdf` in ``z``."""
    if B <= 0:
        raise ValueError("scale B must be positive")
    support.check(x, "x")
    p = np.asarray(p, dtype=float)
    if np.any((p < 0) | (p > 1)) or np.any(np.isnan(p)):
        raise DomainError("p outside [0, 1]")
    bk = B * float(laplace_normalizer(x, B, support))
    left_mass = -math.expm1(-(x - support.lo) / B)
    cdf_at_mode = bk * left_mass
    s = np.sign(p - cdf_at_mode)
    z = x - s * B * np.log1p(s * (left_mass - p / bk))
    return np.clip(z, support.lo, support.hi)


def trunc_laplace_exact_c(B: float, secrets: Interval, support: Interval = UNIT) -> float:
    """Exact Lipschitz constant in z: the slope K_{x,B}/B at the mode.

    K_{x,B} is largest where the truncated mass is smallest, which (by
    concavity of the mass in x) is at an endpoint of the secret interval.
    """
    k = laplace_normalizer(np.array([secrets.lo, secrets.hi]), B, support)
    return float(np.max(k) / B)


def trunc_laplace_eps_pair(x1: float, x2: float, B: float, support: Interval = UNIT) -> float:
    """Closed-form sup_z log f(z|x1)/f(z|x2) for the truncated Laplace."""
    k1, k2 = laplace_normalizer(np.array([x1, x2]), B, support)
    return float(math.log(k1 / k2) + abs(x1 - x2) / B)


# ---------------------------------------------------------------------------
# Mechanisms


class Mechanism:
    """Black-box sampler S(x). Subclasses implement ``_draw``."""

    discrete = False

    @property
    def domain_x(self):
        raise NotImplementedError

    @property
    def domain_z(self):
        raise NotImplementedError

    def check_secret(self, x) -> None:
        dom = self.domain_x
        if isinstance(dom, Interval):
            dom.check(x, "secret x")
        elif x not in dom:
            raise DomainError(f"secret {x!r} not in {dom}")

    def draw(self, x, count: int, seed: Seed) -> np.ndarray:
        if int(count) != count or count < 1:
            raise ValueError(f"count must be a positive integer, got {count}")
        self.check_secret(x)
        rng = np.random.default_rng(as_seed_sequence(seed))
        return self._draw(x, int(count), rng)

    def _draw(self, x, count: int, rng: np.random.Generator) -> np.ndarray:
        raise NotImplementedError

    def config(self) -> dict:
        raise NotImplementedError


class ContinuousMechanism(Mechanism):
    support: Interval
    secrets: Interval | None

    @property
    def domain_z(self) -> Interval:
        return self.support

    @property
    def domain_x(self) -> Interval:
        return self.secrets if self.secrets is not None else self.support

    def density(self, z, x):
        raise NotImplementedError

    def log_density(self, z, x):
        return np.log(self.density(z, x))

    def inv_cdf(self, p, x):
        raise NotImplementedError

    def _draw(self, x, count, rng):
        return self.inv_cdf(open_uniform(rng, count), x)


@dataclass(frozen=True)
class TruncatedLaplace(ContinuousMechanism):
    B: float
    support: Interval = UNIT
    secrets: Interval | None = None

    def __post_init__(self):
        if not self.B > 0:
            raise ValueError("scale B must be positive")
        if self.secrets is not None and not (self.support.lo <= self.secrets.lo
                                             and self.secrets.hi <= self.support.hi):
            raise ValueError("truncated Laplace secrets must lie inside the output support")

    def density(self, z, x):
        return trunc_laplace_density(z, x, self.B, self.support)

    def log_density(self, z, x):
        self.support.check(z, "z")
        z = np.asarray(z, dtype=float)
        return np.log(laplace_normalizer(x, self.B, self.support)) - np.abs(z - x) / self.B

    def cdf(self, z, x):
        return trunc_laplace_cdf(z, x, self.B, self.support)

    def inv_cdf(self, p, x):
        return trunc_laplace_inv_cdf(p, x, self.B, self.support)

    def exact_c(self) -> float:
        return trunc_laplace_exact_c(self.B, self.domain_x, self.support)

    def eps_pair(self, x1: float, x2: float) -> float:
        return trunc_laplace_eps_pair(x1, x2, self.B, self.support)

    def kinks(self, *xs: float) -> list[float]:
        return [x for x in xs if self.support.lo < x < self.support.hi]

    def config(self) -> dict:
        cfg = {"kind": "trunc-laplace", "B": self.B, "support": self.support.to_list()}
        if self.secrets is not None:
            cfg["secrets"] = self.secrets.to_list()
        return cfg


@dataclass(frozen=True)
class TruncatedGaussian(ContinuousMechanism):
    sigma: float
    support: Interval = UNIT
    secrets: Interval | None = None

    def __post_init__(self):
        if not self.sigma > 0:
            raise ValueError("sigma must be positive")

    def _mass(self, x):
        x = np.asarray(x, dtype=float)
        s = self.sigma
        return special.ndtr((self.support.hi - x) / s) - special.ndtr((self.support.lo - x) / s)

    def density(self, z, x):
        self.support.check(z, "z")
        self.support.check(x, "x")
        z = np.asarray(z, dtype=float)
        s = self.sigma
        kernel = np.exp(-((z - x) ** 2) / (2 * s * s)) / (s * math.sqrt(2 * math.pi))
        return kernel / self._mass(x)

    def log_density(self, z, x):
        self.support.check(z, "z")
        z = np.asarray(z, dtype=float)
        s = self.sigma
        return (-((z - x) ** 2) / (2 * s * s) - math.log(s * math.sqrt(2 * math.pi))
                - np.log(self._mass(x)))

    def cdf(self, z, x):
        self.support.check(z, "z")
        s = self.sigma
        z = np.asarray(z, dtype=float)
        lower = special.ndtr((self.support.lo - x) / s)
        return np.clip((special.ndtr((z - x) / s) - lower) / self._mass(x), 0.0, 1.0)

    def inv_cdf(self, p, x):
        p = np.asarray(p, dtype=float)
        if np.any((p < 0) | (p > 1)) or np.any(np.isnan(p)):
            raise DomainError("p outside [0, 1]")
        s = self.sigma
        a, b = (self.support.lo - x) / s, (self.support.hi - x) / s
        z = stats.truncnorm.ppf(p, a, b, loc=x, scale=s)
        return np.clip(z, self.support.lo, self.support.hi)

    def kinks(self, *xs: float) -> list[float]:
        return []

    def config(self) -> dict:
        cfg = {"kind": "trunc-gaussian", "sigma": self.sigma, "support": self.support.to_list()}
        if self.secrets is not None:
            cfg["secrets"] = self.secrets.to_list()
        return cfg


class DiscreteMechanism(Mechanism):
    discrete = True

    def pmf(self, x) -> np.ndarray:
        raise NotImplementedError

    @property
    def num_outcomes(self) -> int:
        return len(self.domain_z)


@dataclass(frozen=True)
class KRandomizedResponse(DiscreteMechanism):
    k: int
    epsilon: float

    def __post_init__(self):
        if int(self.k) != self.k or self.k < 2:
            raise ValueError("k must be an integer >= 2")
        if not self.epsilon >= 0:
            raise ValueError("epsilon must be non-negative")

    @property
    def domain_x(self) -> tuple[int, ...]:
        return tuple(range(self.k))

    @property
    def domain_z(self) -> tuple[int, ...]:
        return tuple(range(self.k))

    @property
    def p_true(self) -> float:
        e = math.exp(self.epsilon)
        return e / (e + self.k - 1)

    def pmf(self, x) -> np.ndarray:
        self.check_secret(x)
        other = 1.0 / (math.exp(self.epsilon) + self.k - 1)
        p = np.full(self.k, other)
        p[x] = self.p_true
        return p

    def _draw(self, x, count, rng):
        keep = rng.random(count) < self.p_true
        other = rng.integers(0, self.k - 1, size=count)
        other = other + (other >= x)
        return np.where(keep, x, other).astype(np.int64)

    def config(self) -> dict:
        return {"kind": "krr", "k": self.k, "epsilon": self.epsilon}


@dataclass(frozen=True)
class AdversarialBernoulliPair(DiscreteMechanism):
    """Two Bernoulli outputs whose log-ratio peak hides behind a rare outcome.

    With ``alpha = inf`` secret 0 maps to Bernoulli(d) and secret 1 to
    Bernoulli(d/h), so eps*(0, 1) = log h even though an outcome of 1 is
    almost never observed. With finite ``alpha`` the parameters are
    Bernoulli(d^(1/alpha)) and Bernoulli((d / h^(alpha-1))^(1/(alpha-1))).
    """

    d: float
    h: float
    alpha: float = math.inf
    params: tuple[float, float] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not 0 < self.d < 1:
            raise ValueError("d must lie in (0, 1)")
        if not self.h > 1:
            raise ValueError("h must exceed 1")
        if math.isinf(self.alpha):
            p0, p1 = self.d, self.d / self.h
        else:
            if not self.alpha > 1:
                raise ValueError("alpha must exceed 1")
            p0 = self.d ** (1.0 / self.alpha)
            p1 = (self.d / self.h ** (self.alpha - 1)) ** (1.0 / (self.alpha - 1))
        for p in (p0, p1):
            if not 0.0 <= p <= 1.0:
                raise ValueError(f"(d, h, alpha) gives Bernoulli parameter {p} outside [0, 1]")
        object.__setattr__(self, "params", (min(max(p0, 0.0), 1.0), min(max(p1, 0.0), 1.0)))

    @property
    def domain_x(self) -> tuple[int, ...]:
        return (0, 1)

    @property
    def domain_z(self) -> tuple[int, ...]:
        return (0, 1)

    def pmf(self, x) -> np.ndarray:
        self.check_secret(x)
        p = self.params[x]
        return np.array([1.0 - p, p])

    def _draw(self, x, count, rng):
        return (rng.random(count) < self.params[x]).astype(np.int64)

    def config(self) -> dict:
        return {"kind": "adversarial-bernoulli", "d": self.d, "h": self.h,
                "alpha": "inf" if math.isinf(self.alpha) else self.alpha}


def sample(mechanism: Mechanism, x, n: int, seed: Seed) -> np.ndarray:
    """Draw ``n`` i.i.d. outputs of ``mechanism`` on secret ``x``."""
    return mechanism.draw(x, n, seed)


def mechanism_from_config(cfg: dict) -> Mechanism:
    """Build a mechanism from its declarative description."""
    cfg = dict(cfg)
    kind = cfg.pop("kind", None)
    support = Interval(*cfg.pop("support", (0.0, 1.0)))
    secrets = cfg.pop("secrets", None)
    secrets = Interval(*secrets) if secrets is not None else None
    try:
        if kind == "trunc-laplace":
            return TruncatedLaplace(float(cfg.pop("B")), support, secrets)
        if kind == "trunc-gaussian":
            return TruncatedGaussian(float(cfg.pop("sigma")), support, secrets)
        if kind == "krr":
            return KRandomizedResponse(int(cfg.pop("k")), float(cfg.pop("epsilon")))
        if kind == "adversarial-bernoulli":
            alpha = cfg.pop("alpha", "inf")
            alpha = math.inf if str(alpha).lower() in ("inf", "infinity") else float(alpha)
            return AdversarialBernoulliPair(float(cfg.pop("d")), float(cfg.pop("h")), alpha)
    except KeyError as exc:
        raise ValueError(f"mechanism {kind!r} is missing parameter {exc.args[0]!r}") from None
    raise ValueError(f"unknown mechanism kind {kind!r}")


def parse_mechanism_spec(spec: str) -> dict:
    """Parse ``kind:key=value,key=value`` into a mechanism config dict."""
    kind, _, rest = spec.partition(":")
    cfg: dict = {"kind": kind.strip()}
    for item in filter(None, (s.strip() for s in rest.split(","))):
        key, sep, value = item.partition("=")
        if not sep:
            raise ValueError(f"bad mechanism parameter {item!r}")
        cfg[key.strip()] = value.strip()
    return cfg


# ---------------------------------------------------------------------------
# Lipschitz constants


@dataclass(frozen=True)
class LipschitzConstants:
    C: float
    D: float
    theorem_applicable: bool


def lipschitz_constants(mechanism: ContinuousMechanism, grid_points: int = 100_000,
                        cross_points: int = 101, inflation: float = 1e-3) -> LipschitzConstants:
    """Numerically bound |df/dz| (C) and |df/dx| (D) over secrets x outputs.

    The differentiated axis uses ``grid_points`` samples and central
    differences; the other axis is scanned on ``cross_points`` points
    including both endpoints. Results are inflated by ``1 + inflation`` so
    they can serve as upper bounds.
    """
    zs_fine = np.linspace(mechanism.support.lo, mechanism.support.hi, grid_points)
    xs_fine = np.linspace(mechanism.domain_x.lo, mechanism.domain_x.hi, grid_points)
    xs_cross = np.linspace(mechanism.domain_x.lo, mechanism.domain_x.hi, cross_points)
    zs_cross = np.linspace(mechanism.support.lo, mechanism.support.hi, cross_points)

    C = 0.0
    for x in xs_cross:
        vals = mechanism.density(zs_fine, x)
        C = max(C, float(np.max(np.abs(np.gradient(vals, zs_fine)))))
    D = 0.0
    for z in zs_cross:
        vals = mechanism.density(z, xs_fine)
        D = max(D, float(np.max(np.abs(np.gradient(vals, xs_fine)))))
    C *= 1.0 + inflation
    D *= 1.0 + inflation
    W = mechanism.support.width
    return LipschitzConstants(C=C, D=D, theorem_applicable=C < 2.0 / W**2)


def theorem_applicable(C: float, W: float) -> bool:
    return C < 2.0 / W**2


__all__ = [
    "AdversarialBernoulliPair", "ContinuousMechanism", "DiscreteMechanism", "DomainError",
    "Interval", "KRandomizedResponse", "LipschitzConstants", "Mechanism", "Seed",
    "TruncatedGaussian", "TruncatedLaplace", "UNIT", "as_seed_sequence", "child_seed",
    "laplace_normalizer", "lipschitz_constants", "mechanism_from_config",
    "parse_mechanism_spec", "sample", "seed_repr", "theorem_applicable",
    "trunc_laplace_cdf", "trunc_laplace_density", "trunc_laplace_eps_pair",
    "trunc_laplace_exact_c", "trunc_laplace_inv_cdf",
]
