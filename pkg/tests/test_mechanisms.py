import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy import integrate, stats

from dpaudit.mechanisms import (
    AdversarialBernoulliPair, DomainError, Interval, KRandomizedResponse, TruncatedGaussian,
    TruncatedLaplace, UNIT, child_seed, lipschitz_constants, mechanism_from_config,
    parse_mechanism_spec, trunc_laplace_cdf, trunc_laplace_density, trunc_laplace_exact_c,
    trunc_laplace_inv_cdf,
)

from .conftest import REFERENCE_CONTINUOUS

scales = st.floats(0.05, 20.0)
unit = st.floats(0.0, 1.0)


@given(B=scales, x=unit, p=st.floats(1e-12, 1 - 1e-12))
def test_laplace_inverse_cdf_round_trip(B, x, p):
    z = trunc_laplace_inv_cdf(p, x, B)
    assert 0.0 <= z <= 1.0
    assert abs(trunc_laplace_cdf(z, x, B) - p) <= 1e-9


@given(B=scales, x=unit, z=unit)
def test_laplace_cdf_inverse_round_trip(B, x, z):
    p = trunc_laplace_cdf(z, x, B)
    assert abs(trunc_laplace_inv_cdf(p, x, B) - z) <= 1e-9 / max(trunc_laplace_density(z, x, B), 1e-3)


@given(sigma=st.floats(0.1, 10.0), x=unit, p=st.floats(1e-9, 1 - 1e-9))
def test_gaussian_inverse_cdf_round_trip(sigma, x, p):
    mech = TruncatedGaussian(sigma)
    z = mech.inv_cdf(p, x)
    assert abs(mech.cdf(z, x) - p) <= 1e-9


@pytest.mark.parametrize("mech", REFERENCE_CONTINUOUS, ids=repr)
@pytest.mark.parametrize("x", [0.0, 0.37, 1.0])
def test_density_integrates_to_one(mech, x):
    support = mech.support
    pts = [x] if support.lo < x < support.hi else None
    total, _ = integrate.quad(lambda z: float(mech.density(z, x)), support.lo, support.hi,
                              points=pts, epsabs=1e-13, epsrel=1e-13, limit=200)
    assert abs(total - 1.0) <= 1e-9


def test_laplace_cdf_endpoints():
    assert trunc_laplace_cdf(0.0, 0.3, 1.0) == pytest.approx(0.0, abs=1e-15)
    assert trunc_laplace_cdf(1.0, 0.3, 1.0) == pytest.approx(1.0, abs=1e-15)


def test_exact_c_matches_endpoint_slope():
    B = 1.0
    # slope of the density at z = x = 0, from the right
    h = 1e-7
    slope = (trunc_laplace_density(0.0, 0.0, B) - trunc_laplace_density(h, 0.0, B)) / h
    assert trunc_laplace_exact_c(B, UNIT) == pytest.approx(slope, rel=1e-5)
    assert trunc_laplace_exact_c(B, UNIT) == pytest.approx(1.5820, abs=1e-4)


def test_eps_pair_extremes_is_inverse_scale():
    for B in (0.5, 1.0, 3.5):
        mech = TruncatedLaplace(B)
        assert mech.eps_pair(0.0, 1.0) == pytest.approx(1.0 / B, rel=1e-12)


def test_draw_is_seeded_and_in_support(laplace1):
    a = laplace1.draw(0.2, 1000, 7)
    b = laplace1.draw(0.2, 1000, 7)
    c = laplace1.draw(0.2, 1000, 8)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)
    assert a.min() >= 0.0 and a.max() <= 1.0


def test_child_seeds_are_independent_streams():
    a = TruncatedLaplace(1.0).draw(0.5, 100, child_seed(3, 0))
    b = TruncatedLaplace(1.0).draw(0.5, 100, child_seed(3, 1))
    assert not np.array_equal(a, b)


@pytest.mark.parametrize("mech", [TruncatedLaplace(0.7), TruncatedGaussian(0.4)], ids=repr)
def test_samples_follow_the_density(mech):
    x = 0.3
    z = mech.draw(x, 20000, 11)
    res = stats.kstest(z, lambda t: mech.cdf(np.clip(t, 0, 1), x))
    assert res.pvalue > 1e-3


def test_secret_outside_domain_rejected(laplace1):
    with pytest.raises(DomainError):
        laplace1.draw(1.5, 10, 0)


def test_laplace_secret_interval_must_sit_inside_support():
    with pytest.raises(ValueError):
        TruncatedLaplace(1.0, UNIT, Interval(-0.5, 0.5))


def test_krr_pmf_and_sampling():
    mech = KRandomizedResponse(4, math.log(3))
    pmf = mech.pmf(2)
    assert pmf.sum() == pytest.approx(1.0)
    assert pmf[2] == pytest.approx(3 / (3 + 3))
    counts = np.bincount(mech.draw(2, 60000, 1), minlength=4) / 60000
    assert np.allclose(counts, pmf, atol=0.01)


def test_adversarial_pair_parameters():
    mech = AdversarialBernoulliPair(1e-6, 1e3)
    assert mech.params == pytest.approx((1e-6, 1e-9))
    renyi = AdversarialBernoulliPair(0.25, 4.0, alpha=2.0)
    assert renyi.params == pytest.approx((0.5, 0.0625))


def test_adversarial_pair_rejects_bad_d():
    with pytest.raises(ValueError):
        AdversarialBernoulliPair(1.5, 10.0)


def test_mechanism_spec_round_trip():
    cfg = parse_mechanism_spec("trunc-laplace:B=0.5")
    mech = mechanism_from_config(cfg)
    assert isinstance(mech, TruncatedLaplace) and mech.B == 0.5
    assert mechanism_from_config(mech.config()) == mech
    with pytest.raises(ValueError):
        mechanism_from_config({"kind": "unknown"})
    with pytest.raises(ValueError):
        mechanism_from_config({"kind": "krr", "k": 3})


@pytest.mark.parametrize("B, C_ref, D_ref", [(1.0, 1.58, 3.16), (2.0, 0.64, 1.27), (5.0, 0.22, 0.44)])
def test_numeric_lipschitz_constants_laplace(B, C_ref, D_ref):
    lc = lipschitz_constants(TruncatedLaplace(B), grid_points=20_000)
    assert lc.C == pytest.approx(C_ref, abs=0.02)
    assert lc.D == pytest.approx(D_ref, abs=0.02)


def test_numeric_c_close_to_closed_form():
    lc = lipschitz_constants(TruncatedLaplace(1.0))
    assert lc.C == pytest.approx(trunc_laplace_exact_c(1.0, UNIT), rel=2e-3)
