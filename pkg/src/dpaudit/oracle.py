"""Ground-truth privacy quantities from analytic densities.

Used by tests, the acceptance suite and ``--with-oracle`` reports. Nothing
in the estimators imports this module.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy import integrate

from .mechanisms import (
    ContinuousMechanism, DiscreteMechanism, Interval, Mechanism, TruncatedLaplace,
)

DEFAULT_RESOLUTION = 1_000_000


class ResolutionError(RuntimeError):
    """Quadrature did not reach the requested tolerance."""


@dataclass(frozen=True)
class OracleResult:
    value: float
    method: str  # "closed-form" | "grid-sup" | "quadrature" | "exact-sum"
    resolution: float | None = None


def _grid(support: Interval, resolution: int) -> np.ndarray:
    return np.linspace(support.lo, support.hi, int(resolution))


def sup_log_ratio(log_p: np.ndarray, log_q: np.ndarray) -> float:
    """sup of log p - log q over the points where both densities are positive."""
    ok = np.isfinite(log_p) & np.isfinite(log_q)
    if not ok.any():
        raise ValueError("densities have disjoint support")
    return float(np.max(log_p[ok] - log_q[ok]))


def oracle_eps_pair(density_p: Callable, density_q: Callable, support: Interval, *,
                    resolution: int = DEFAULT_RESOLUTION) -> OracleResult:
    """Grid sup of log(p/q), endpoints included, restricted to p, q > 0."""
    z = _grid(support, resolution)
    with np.errstate(divide="ignore"):
        lp = np.log(density_p(z))
        lq = np.log(density_q(z))
    return OracleResult(sup_log_ratio(lp, lq), "grid-sup", resolution)


def mechanism_eps_pair(mechanism: Mechanism, x1, x2, *,
                       resolution: int = DEFAULT_RESOLUTION) -> OracleResult:
    """eps*(x1, x2), in closed form where the mechanism provides one."""
    if isinstance(mechanism, DiscreteMechanism):
        p, q = mechanism.pmf(x1), mechanism.pmf(x2)
        with np.errstate(divide="ignore"):
            return OracleResult(sup_log_ratio(np.log(p), np.log(q)), "exact-sum")
    if isinstance(mechanism, TruncatedLaplace):
        return OracleResult(mechanism.eps_pair(x1, x2), "closed-form")
    z = _grid(mechanism.support, resolution)
    return OracleResult(sup_log_ratio(mechanism.log_density(z, x1), mechanism.log_density(z, x2)),
                        "grid-sup", resolution)


@dataclass(frozen=True)
class GlobalOracleResult(OracleResult):
    argmax: tuple[float, float] | None = None
    extremes_value: float | None = None


def oracle_eps_global(mechanism: ContinuousMechanism, *, x_points: int = 101,
                      z_points: int = 4001) -> GlobalOracleResult:
    """sup over a (x1, x2) grid of eps*(x1, x2); also reports the extremes pair."""
    X = mechanism.domain_x
    xs = np.linspace(X.lo, X.hi, x_points) if x_points > 1 else np.array([X.lo])
    z = _grid(mechanism.support, z_points)
    L = np.stack([mechanism.log_density(z, x) for x in xs])
    best, arg = -math.inf, None
    for i in range(len(xs)):
        row = np.max(L[i] - L, axis=1)
        j = int(np.argmax(row))
        if row[j] > best:
            best, arg = float(row[j]), (float(xs[i]), float(xs[j]))
    extremes = float(max(np.max(L[0] - L[-1]), np.max(L[-1] - L[0])))
    return GlobalOracleResult(max(best, 0.0), "grid-sup", z_points, arg, extremes)


def renyi_discrete(p: Sequence[float], q: Sequence[float], alpha: float) -> OracleResult:
    """(1/(a-1)) log sum p^a q^(1-a) for probability vectors."""
    if not alpha > 1:
        raise ValueError("alpha must exceed 1")
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    if np.any((p > 0) & (q == 0)):
        return OracleResult(math.inf, "exact-sum")
    keep = p > 0
    total = float(np.sum(p[keep] ** alpha * q[keep] ** (1 - alpha)))
    return OracleResult(math.log(total) / (alpha - 1), "exact-sum")


def oracle_renyi(log_density_p: Callable, log_density_q: Callable, support: Interval,
                 alpha: float, *, breakpoints: Sequence[float] = (),
                 tol: float = 1e-10) -> OracleResult:
    """(1/(a-1)) log integral of p^a q^(1-a), by adaptive quadrature.

    The integral is split at ``breakpoints`` (density kinks) and the
    integrand is shifted by its grid maximum so large alpha cannot overflow.
    """
    if not alpha > 1:
        raise ValueError("alpha must exceed 1")

    def log_integrand(z):
        return alpha * log_density_p(z) + (1 - alpha) * log_density_q(z)

    cuts = sorted({support.lo, support.hi, *[b for b in breakpoints
                                             if support.lo < b < support.hi]})
    probe = np.linspace(support.lo, support.hi, 2001)
    shift = float(np.max(log_integrand(probe)))
    total, err = 0.0, 0.0
    for lo, hi in zip(cuts[:-1], cuts[1:]):
        val, e = integrate.quad(lambda t: math.exp(float(log_integrand(t)) - shift), lo, hi,
                                epsabs=0.0, epsrel=tol, limit=500)
        total += val
        err += e
    if not total > 0 or err > 100 * tol * total:
        raise ResolutionError(f"quadrature error {err:g} too large for integral {total:g}")
    return OracleResult((math.log(total) + shift) / (alpha - 1), "quadrature", tol)


def mechanism_renyi(mechanism: Mechanism, x1, x2, alpha: float,
                    tol: float = 1e-10) -> OracleResult:
    """D_alpha(p(.|x1) || p(.|x2)) for a reference mechanism."""
    if isinstance(mechanism, DiscreteMechanism):
        return renyi_discrete(mechanism.pmf(x1), mechanism.pmf(x2), alpha)
    return oracle_renyi(lambda z: mechanism.log_density(z, x1),
                        lambda z: mechanism.log_density(z, x2),
                        mechanism.support, alpha, breakpoints=mechanism.kinks(x1, x2), tol=tol)
