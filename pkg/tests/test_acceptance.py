"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v``; the collected verdict lines
are also repeated in the terminal summary.
"""

import math
import time

import numpy as np
import pytest
from scipy import integrate

from dpaudit import experiments as ex
from dpaudit import reference_values as ref
from dpaudit.core import concentration_f, lipschitz_density_bounds, min_n_satisfying
from dpaudit.ldp import (
    estimate_discrete_ldp, ldp_bin_count, ldp_grid_size, plan_ldp,
)
from dpaudit.lrdp import (
    estimate_pair_lrdp, lrdp_constants, lrdp_grid_size, plan_lrdp, practical_lrdp_plan,
    renyi_plugin, renyi_plugin_direct,
)
from dpaudit.mechanisms import (
    KRandomizedResponse, TruncatedGaussian, TruncatedLaplace, UNIT, child_seed,
    lipschitz_constants, trunc_laplace_exact_c,
)
from dpaudit.oracle import mechanism_renyi
from dpaudit.safety import SafetyConfig, run_safety_protocol

VERDICTS: list[str] = []

DEFINED_CELLS = {key: cell for key, cell in ref.TABLE_III["cells"].items() if cell[0] is not None}


def record(number: int, ok: bool, detail: str) -> None:
    line = f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}"
    VERDICTS.append(line)
    print(line)


def _exact_c(eps: float) -> float:
    return trunc_laplace_exact_c(1.0 / eps, UNIT)


# ---------------------------------------------------------------------------


def test_criterion_1_bin_counts():
    wrong = []
    for (gamma, eps), (_, _, m_ref, _) in DEFINED_CELLS.items():
        _, m = ldp_bin_count(_exact_c(eps), 1.0, gamma)
        if m != m_ref:
            wrong.append((gamma, eps, m, m_ref))
    record(1, not wrong and len(DEFINED_CELLS) == 12,
           f"m exact on {12 - len(wrong)}/12 cells" + (f"; mismatches {wrong}" if wrong else ""))
    assert not wrong


def test_criterion_2_sample_requirement():
    start = time.perf_counter()
    failures, strict_misses = [], []
    for (gamma, eps), (n_ref, _, _, digits) in DEFINED_CELLS.items():
        n = plan_ldp(gamma, 0.8, _exact_c(eps), UNIT).n
        if abs(n - n_ref) > 0.01 * n_ref:
            strict_misses.append((gamma, eps, n, n_ref))
        if not ex.n_matches(n, n_ref, digits):
            failures.append((gamma, eps, n, n_ref))
    # the value quoted in full for the gamma=.5, C=1.58 grid run
    quoted = ref.LDP_GRID_RUN
    n_quoted = plan_ldp(quoted["gamma"], quoted["delta"], quoted["C"], UNIT).n
    quoted_ok = abs(n_quoted - quoted["n"]) <= 0.01 * quoted["n"]
    elapsed = time.perf_counter() - start
    ok = not failures and quoted_ok and elapsed < 1.0
    detail = (f"12 cells within 1% or equal at printed precision: {not failures}; "
              f"n(.5, 1.58)={n_quoted} vs {quoted['n']}; {elapsed:.2f}s")
    if strict_misses:
        detail += (f"; cells printed to 2 figures that sit >1% from the rounded print "
                   f"(computed, printed): {[(c[2], c[3]) for c in strict_misses]}")
    record(2, ok, detail)
    assert ok


def test_criterion_3_grid_sizes():
    tau, _ = ldp_bin_count(1.58, 1.0, 0.5)
    k_ldp = ldp_grid_size(3.16, 1.0, tau, 0.5)
    k_lrdp = lrdp_grid_size(2.0, lrdp_constants(2.0, 0.33, 1.0), 0.66, 1.0, 0.5)
    ok = (k_ldp, k_lrdp) == (91, 39)
    record(3, ok, f"k_ldp={k_ldp} (91), k_lrdp={k_lrdp} (39)")
    assert ok


def test_criterion_4_table_i():
    rows = ex.table_i()
    bad = [(r["family"], r["parameter"]) for r in rows if not r["match"]]
    worst = max(max(abs(r["C"] - r["C_published"]), abs(r["D"] - r["D_published"]),
                    abs(r["eps"] - r["eps_published"])) for r in rows)
    record(4, not bad, f"{len(rows) - len(bad)}/10 rows within 0.02 with matching flags; "
                       f"largest deviation {worst:.4f}")
    assert not bad


def test_criterion_5_ldp_end_to_end():
    start = time.perf_counter()
    cfg = ex.AuditConfig(mode="ldp-pair", mechanism={"kind": "trunc-laplace", "B": 1.0},
                         pair=(0.0, 1.0), gamma=0.5, delta=0.8, m=91, n=4000, reps=100,
                         seed=0, symmetric=False)
    report = ex.run_audit(cfg)
    summary = report["summary"]
    freq = summary["success_within_gamma"]
    elapsed = time.perf_counter() - start
    ok = freq >= 0.8 and math.isclose(summary["truth"], 1.0) and elapsed < 60
    record(5, ok, f"success within 0.5 of eps*={summary['truth']:.4f}: {freq:.2f} "
                  f"over 100 runs ({elapsed:.1f}s)")
    assert ok


def test_criterion_6_lrdp_end_to_end():
    mech = TruncatedLaplace(3.5)
    oracle = mechanism_renyi(mech, 0.0, 1.0, 2.0).value
    plan = plan_lrdp(2.0, 0.5, 0.9, 0.33, UNIT)
    practical = practical_lrdp_plan(2.0, UNIT, plan.m, 10**6)
    hits = 0
    for r in range(100):
        est = estimate_pair_lrdp(mech, 0.0, 1.0, practical, child_seed(6, r), symmetric=False)
        hits += est.succeeded and abs(est.epsilon_hat - oracle) <= 0.01
    # back-substitution over a spread of plans, including the reference LRDP grid
    settings = [(2.0, g, 0.9, c) for g in (1.0, 0.5, 0.1) for _, c in ref.TABLE_V["columns"]]
    settings += [(a, 0.5, d, c) for a in (1.5, 3.0) for d in (0.5, 0.9) for c in (0.1, 0.33)]
    invalid = []
    for alpha, g, d, c in settings:
        p = plan_lrdp(alpha, g, d, c, UNIT)
        if not (p.satisfies_bin_condition() and p.satisfies_sample_condition()):
            invalid.append((alpha, g, d, c))
    ok = abs(oracle - 0.027) < 5e-4 and hits >= 90 and not invalid
    record(6, ok, f"oracle {oracle:.5f}; m={plan.m}; {hits}/100 runs within 0.01; "
                  f"{len(settings) - len(invalid)}/{len(settings)} plans pass back-substitution")
    assert ok


def test_criterion_7_safety():
    base = ex.practical_ldp_plan(UNIT, 6, 1, 2.0, 0.8)
    honest = run_safety_protocol(TruncatedLaplace(1.0), 0.0, 1.0,
                                 SafetyConfig(trunc_laplace_exact_c(1.0, UNIT), runs=1000),
                                 base, seed=71)
    liar = run_safety_protocol(TruncatedLaplace(0.5), 0.0, 1.0, SafetyConfig(1.0, runs=1000),
                               base, seed=72)
    ok = (honest.empirical_frequency >= honest.decision_threshold and not honest.suspicious
          and liar.suspicious)
    record(7, ok, f"honest: frequency {honest.empirical_frequency:.3f} vs bound "
                  f"{honest.theoretical_bound:.3f} - 3 s.e. = {honest.decision_threshold:.3f}; "
                  f"lying: frequency {liar.empirical_frequency:.3f}, suspicious={liar.suspicious}")
    assert ok


def test_criterion_8_property_suites():
    rng = np.random.default_rng(8)
    checks = {}

    # inverse CDF round trip
    worst = 0.0
    for B in (0.1, 0.5, 1.0, 5.0):
        mech = TruncatedLaplace(B)
        for x in (0.0, 0.4, 1.0):
            p = rng.uniform(1e-12, 1 - 1e-12, 500)
            worst = max(worst, float(np.max(np.abs(mech.cdf(mech.inv_cdf(p, x), x) - p))))
    for s in (0.3, 1.0):
        mech = TruncatedGaussian(s)
        for x in (0.0, 0.5, 1.0):
            p = rng.uniform(1e-9, 1 - 1e-9, 500)
            worst = max(worst, float(np.max(np.abs(mech.cdf(mech.inv_cdf(p, x), x) - p))))
    checks["cdf round trip"] = worst <= 1e-9

    # normalization by quadrature
    mechs = [TruncatedLaplace(0.5), TruncatedLaplace(2.0), TruncatedGaussian(0.3),
             TruncatedGaussian(2.0)]
    worst = 0.0
    for mech in mechs:
        for x in (0.0, 0.37, 1.0):
            pts = [x] if 0 < x < 1 else None
            total, _ = integrate.quad(lambda z: float(mech.density(z, x)), 0, 1, points=pts,
                                      epsabs=1e-13, epsrel=1e-13, limit=200)
            worst = max(worst, abs(total - 1))
    checks["normalization"] = worst <= 1e-9

    # pointwise density bounds from the Lipschitz constant
    ok = True
    z = np.linspace(0, 1, 1001)
    for mech in mechs + [TruncatedLaplace(1.0), TruncatedGaussian(1.0)]:
        lo, hi = lipschitz_density_bounds(lipschitz_constants(mech, 20_000).C * 1.01, 1.0)
        for x in np.linspace(0, 1, 5):
            d = mech.density(z, x)
            ok &= bool(d.max() <= hi + 1e-9 and d.min() >= lo - 1e-9)
    checks["density bounds"] = ok

    # concentration tail bound monotone in x and y
    xs = np.unique(np.logspace(0, 12, 60).astype(np.int64))
    ys = np.linspace(1e-4, 1, 60)
    mono = all(concentration_f(int(a), 0.01, 0.1) >= concentration_f(int(b), 0.01, 0.1)
               for a, b in zip(xs, xs[1:]))
    mono &= all(concentration_f(5000, a, 0.1) >= concentration_f(5000, b, 0.1)
                for a, b in zip(ys, ys[1:]))
    checks["f monotone"] = mono

    # minimality of the monotone search
    targets = rng.integers(1, 10**12, 50)
    checks["min_n minimal"] = all(min_n_satisfying(lambda k, t=int(t): k >= t) == t
                                  for t in targets)

    # log-space plug-in equals the direct sum
    worst = 0.0
    for _ in range(200):
        m = int(rng.integers(2, 8))
        n = int(rng.integers(m * 5, 400))
        p = rng.multinomial(n - m, np.ones(m) / m) + 1
        q = rng.multinomial(n - m, np.ones(m) / m) + 1
        a = float(rng.uniform(1.1, 5))
        worst = max(worst, abs(renyi_plugin(p, q, n, a) - renyi_plugin_direct(p, q, n, a)))
    checks["plug-in log path"] = worst <= 1e-12

    # monotone in alpha: plug-in and oracle
    alphas = [1.2, 1.5, 2, 3, 5, 10, 50]
    p, q = np.array([30, 50, 20]), np.array([45, 35, 20])
    plug = [renyi_plugin(p, q, 100, a) for a in alphas]
    orc = [mechanism_renyi(TruncatedLaplace(1.0), 0.1, 0.8, a).value for a in alphas]
    checks["alpha monotone"] = (all(b >= a - 1e-12 for a, b in zip(plug, plug[1:]))
                                and all(b >= a - 1e-12 for a, b in zip(orc, orc[1:])))

    # discrete estimator on k-ary randomized response
    krr = KRandomizedResponse(3, 1.0)
    p_min = float(krr.pmf(0).min())
    hits = 0
    for r in range(100):
        est = estimate_discrete_ldp(krr, 0, 1, 0.3, 0.8, p_min, child_seed(88, r))
        hits += est.succeeded and abs(est.epsilon_hat - 1.0) <= 0.3
    checks["k-RR recovery"] = hits >= 80

    ok = all(checks.values())
    record(8, ok, "; ".join(f"{k}={'ok' if v else 'FAIL'}" for k, v in checks.items())
           + f" (k-RR {hits}/100)")
    assert ok


def test_criterion_9_impossibility_demo():
    cfg = ex.AuditConfig(mode="impossibility-demo",
                         mechanism={"kind": "adversarial-bernoulli", "d": 1e-6, "h": 1e3},
                         pair=(0, 1), n=1000, gamma=1.0, reps=100, seed=9)
    demo = ex.run_audit(cfg)["demo"]
    ok = demo["missed"] >= 95 and abs(demo["truth"] - math.log(1e3)) < 1e-12
    record(9, ok, f"{demo['missed']}/100 runs failed or fell more than 1 below "
                  f"log h = {demo['truth']:.3f}")
    assert ok
