"""Tests for the log-domain arithmetic and special functions."""

import math
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dispbound.errors import ConfigurationError, DomainError
from dispbound.numerics import (
    DECODE_LIMIT,
    BinetConfig,
    LogReal,
    bernoulli_numbers,
    log_double_factorial,
    log_gamma,
    log_gamma_array,
    log_unit_ball_volume,
    log_unit_ball_volume_array,
    log_unit_sphere_area,
    log_unit_sphere_area_array,
)

# ---------------------------------------------------------------------------
# log_gamma
# ---------------------------------------------------------------------------


def test_log_gamma_integer_factorial():
    assert log_gamma(5.0) == pytest.approx(math.log(24.0), rel=1e-14)


def test_log_gamma_half():
    assert log_gamma(0.5) == pytest.approx(0.5 * math.log(math.pi), rel=1e-14)


def test_log_gamma_large_against_log_factorial_sum():
    oracle = math.fsum(math.log(k) for k in range(1, 1001))  # ln 1000!
    assert abs(log_gamma(1001.0) - oracle) <= 1e-12 * abs(oracle)


@pytest.mark.parametrize("z", [10.0, 50.0, 100.0, 1000.0])
def test_binet_error_decreases_with_series_terms(z):
    oracle = math.lgamma(z)
    errors = [
        abs(log_gamma(z, BinetConfig(series_terms=k)) - oracle) / abs(oracle)
        for k in range(2, 7)
    ]
    for prev, cur in zip(errors, errors[1:]):
        if prev <= 1e-13:
            break
        assert cur < prev
    assert errors[-1] <= 1e-13


def test_log_gamma_matches_stdlib_on_grid():
    for z in np.geomspace(0.05, 5e5, 200):
        assert log_gamma(float(z)) == pytest.approx(math.lgamma(z), abs=1e-10, rel=1e-12)


def test_log_gamma_array_matches_scalar():
    zs = np.geomspace(0.1, 1e6, 50)
    vec = log_gamma_array(zs)
    for z, v in zip(zs, vec):
        assert v == pytest.approx(log_gamma(float(z)), rel=1e-14, abs=1e-14)


@pytest.mark.parametrize("bad", [0.0, -1.0, math.inf, math.nan, "x"])
def test_log_gamma_domain_errors(bad):
    with pytest.raises(DomainError):
        log_gamma(bad)


def test_binet_config_validation():
    with pytest.raises(ConfigurationError):
        BinetConfig(series_terms=0)
    with pytest.raises(ConfigurationError):
        BinetConfig(shift_threshold=7.9)
    cfg = BinetConfig(series_terms=3, shift_threshold=12.0)
    assert cfg.series_terms == 3


# ---------------------------------------------------------------------------
# Bernoulli numbers
# ---------------------------------------------------------------------------


def test_bernoulli_first_values():
    assert bernoulli_numbers(1) == [Fraction(1, 6)]
    assert bernoulli_numbers(2) == [Fraction(1, 6), Fraction(-1, 30)]


def test_bernoulli_eighth_is_minus_one_thirtieth():
    assert bernoulli_numbers(4)[3] == Fraction(-1, 30)


def test_bernoulli_twelfth():
    assert bernoulli_numbers(6)[5] == Fraction(-691, 2730)


def test_bernoulli_count_validation():
    for bad in (0, -1, 31, 2.0, "3"):
        with pytest.raises(ConfigurationError):
            bernoulli_numbers(bad)


def test_bernoulli_thread_safety():
    with ThreadPoolExecutor(max_workers=8) as pool:
        results = list(pool.map(bernoulli_numbers, [30] * 16))
    assert all(r == results[0] for r in results)


# ---------------------------------------------------------------------------
# Balls, spheres, double factorials
# ---------------------------------------------------------------------------


def test_unit_ball_volumes_small_dimensions():
    assert log_unit_ball_volume(0) == 0.0
    assert log_unit_ball_volume(1) == pytest.approx(math.log(2.0), rel=1e-14)
    assert log_unit_ball_volume(2) == pytest.approx(math.log(math.pi), rel=1e-14)
    assert log_unit_ball_volume(3) == pytest.approx(math.log(4 * math.pi / 3), rel=1e-14)


def test_unit_sphere_areas_small_dimensions():
    assert log_unit_sphere_area(1) == pytest.approx(math.log(2 * math.pi), rel=1e-14)
    assert log_unit_sphere_area(2) == pytest.approx(math.log(4 * math.pi), rel=1e-14)
    assert log_unit_sphere_area(3) == pytest.approx(math.log(2 * math.pi**2), rel=1e-14)


def test_dimension_validation():
    with pytest.raises(DomainError):
        log_unit_ball_volume(-1)
    with pytest.raises(DomainError):
        log_unit_sphere_area(0)
    with pytest.raises(DomainError):
        log_double_factorial(0)


def test_sphere_ball_identity_to_one_million():
    # area(n+1-sphere) = 2 pi * volume(n-ball), on the log scale
    n = np.arange(1, 1_000_001, dtype=np.int64)
    lhs = log_unit_sphere_area_array(n + 1)
    rhs = math.log(2 * math.pi) + log_unit_ball_volume_array(n)
    assert float(np.max(np.abs(lhs - rhs))) <= 1e-10


def test_sphere_area_matches_direct_gamma_formula():
    # ln 2 + ((n+1)/2) ln pi - ln Gamma((n+1)/2), assembled independently
    for n in (1, 2, 3, 10, 101, 10_000, 1_000_000):
        direct = (
            math.log(2.0)
            + 0.5 * (n + 1) * math.log(math.pi)
            - math.lgamma(0.5 * (n + 1))
        )
        assert log_unit_sphere_area(n) == pytest.approx(direct, abs=2e-9, rel=1e-12)


def test_ball_volume_ratio_bound_to_one_million():
    # 2 w_{n-1} <= n w_n for every n >= 1
    n = np.arange(1, 1_000_001, dtype=np.int64)
    lhs = math.log(2.0) + log_unit_ball_volume_array(n - 1)
    rhs = np.log(n.astype(float)) + log_unit_ball_volume_array(n)
    assert float(np.max(lhs - rhs)) <= 1e-12


def test_consecutive_ball_volume_recurrence():
    # w_n = (2 pi / n) w_{n-2}
    for n in (2, 3, 10, 101, 1000):
        lhs = log_unit_ball_volume(n)
        rhs = math.log(2 * math.pi / n) + log_unit_ball_volume(n - 2)
        assert lhs == pytest.approx(rhs, abs=1e-12)


def test_double_factorial_small():
    assert log_double_factorial(1) == 0.0
    assert log_double_factorial(5) == pytest.approx(math.log(15.0), rel=1e-14)
    assert log_double_factorial(6) == pytest.approx(math.log(48.0), rel=1e-14)


def test_double_factorial_identity_at_101():
    # 100!! = 2^50 * 50!, and 101!! = 101!/100!!
    log_100_dfact = 50 * math.log(2.0) + math.fsum(math.log(k) for k in range(1, 51))
    log_101_fact = math.fsum(math.log(k) for k in range(1, 102))
    assert abs(log_double_factorial(100) - log_100_dfact) <= 1e-12 * log_100_dfact
    oracle = log_101_fact - log_100_dfact
    assert abs(log_double_factorial(101) - oracle) <= 1e-12 * oracle


# ---------------------------------------------------------------------------
# LogReal
# ---------------------------------------------------------------------------

signed_floats = st.tuples(
    st.sampled_from([-1.0, 1.0]),
    st.floats(min_value=1e-300, max_value=1e300, allow_nan=False, allow_infinity=False),
).map(lambda t: t[0] * t[1])

moderate_logs = st.floats(min_value=-230.0, max_value=230.0)  # spans 200 orders


def test_logreal_zero_and_one():
    assert LogReal.zero().is_zero
    assert LogReal.from_float(0.0).to_float() == 0.0
    assert LogReal.one().to_float() == 1.0


def test_logreal_sign_validation():
    with pytest.raises(DomainError):
        LogReal(2, 0.0)
    with pytest.raises(DomainError):
        LogReal(1, math.inf)
    with pytest.raises(DomainError):
        LogReal.from_float(math.nan)


def test_logreal_decode_guard():
    ok = LogReal.from_log(DECODE_LIMIT - 1.0)
    assert math.isfinite(ok.to_float())
    for mag in (DECODE_LIMIT, 1200.0, -DECODE_LIMIT, -1200.0):
        val = LogReal.from_log(mag)
        assert not val.decodable()
        with pytest.raises(DomainError):
            val.to_float()


@given(x=signed_floats)
@settings(max_examples=300)
def test_logreal_roundtrip_full_range(x):
    decoded = LogReal.from_float(x).to_float()
    # one float64 log field carries ~|ln x| * eps/2 of round-trip error,
    # so the achievable full-range bound is ~1.5e-13 (see decisions ledger)
    assert abs(decoded - x) <= 1.5e-13 * abs(x)


@given(
    x=st.tuples(
        st.sampled_from([-1.0, 1.0]),
        st.floats(min_value=math.exp(-60.0), max_value=math.exp(60.0)),
    ).map(lambda t: t[0] * t[1])
)
@settings(max_examples=300)
def test_logreal_roundtrip_moderate_range(x):
    decoded = LogReal.from_float(x).to_float()
    assert abs(decoded - x) <= 1e-14 * abs(x)


@given(a=signed_floats, b=signed_floats)
@settings(max_examples=200)
def test_logreal_multiplication_is_exact_log_addition(a, b):
    prod = LogReal.from_float(a) * LogReal.from_float(b)
    assert prod.sign == int(math.copysign(1, a)) * int(math.copysign(1, b))
    assert prod.log_magnitude == math.log(abs(a)) + math.log(abs(b))


@given(la=moderate_logs, lb=moderate_logs, sign=st.sampled_from([-1, 1]))
@settings(max_examples=200)
def test_logreal_same_sign_addition_grows_magnitude(la, lb, sign):
    total = LogReal(sign, la) + LogReal(sign, lb)
    assert total.sign == sign
    assert total.log_magnitude >= max(la, lb)


@given(la=moderate_logs, lb=moderate_logs, sa=st.sampled_from([-1, 1]), sb=st.sampled_from([-1, 1]))
@settings(max_examples=200)
def test_logreal_addition_commutes_exactly(la, lb, sa, sb):
    x, y = LogReal(sa, la), LogReal(sb, lb)
    assert (x + y) == (y + x)  # same magnitude ordering internally, bit-equal


@given(la=moderate_logs, lb=moderate_logs, lc=moderate_logs,
       sa=st.sampled_from([-1, 1]), sb=st.sampled_from([-1, 1]), sc=st.sampled_from([-1, 1]))
@settings(max_examples=200)
def test_logreal_addition_associates_up_to_conditioning(la, lb, lc, sa, sb, sc):
    # near-total cancellation amplifies log-domain rounding like any other
    # floating-point sum, so the discrepancy bound carries the usual
    # conditioning factor sum|x_i| / |result|
    x, y, z = LogReal(sa, la), LogReal(sb, lb), LogReal(sc, lc)
    scale = max(la, lb, lc)
    p, q = (x + y) + z, x + (y + z)
    if p.is_zero or q.is_zero:
        for v in (p, q):
            assert v.is_zero or v.log_magnitude <= scale + math.log(1e-12)
        return
    assert p.sign == q.sign
    kappa_log = min(scale - min(p.log_magnitude, q.log_magnitude), 60.0)
    assert abs(p.log_magnitude - q.log_magnitude) <= 1e-12 * math.exp(max(kappa_log, 0.0))


def test_logreal_addition_laws_on_random_triples():
    # well-conditioned random triples spanning 200 orders of magnitude
    rng = np.random.default_rng(20240817)
    logs = rng.uniform(-230.0, 230.0, size=(3000, 3))
    signs = rng.choice([-1, 1], size=(3000, 3))
    for (la, lb, lc), (sa, sb, sc) in zip(logs, signs):
        x, y, z = LogReal(int(sa), la), LogReal(int(sb), lb), LogReal(int(sc), lc)
        left, right = (x + y) + z, x + (y + z)
        assert (x + y) == (y + x)
        assert left.sign == right.sign
        if not left.is_zero:
            assert abs(left.log_magnitude - right.log_magnitude) <= 1e-12


def test_logreal_subtraction_and_opposite_signs():
    three = LogReal.from_float(3.0)
    five = LogReal.from_float(5.0)
    assert (five - three).to_float() == pytest.approx(2.0, rel=1e-14)
    assert (three - five).to_float() == pytest.approx(-2.0, rel=1e-14)
    assert (three - three).is_zero
    assert (three + (-three)).is_zero


def test_logreal_division():
    x = LogReal.from_float(10.0) / LogReal.from_float(-4.0)
    assert x.to_float() == pytest.approx(-2.5, rel=1e-14)
    with pytest.raises(DomainError):
        LogReal.one() / LogReal.zero()


def test_logreal_powers():
    x = LogReal.from_float(2.0) ** 10
    assert x.to_float() == pytest.approx(1024.0, rel=1e-13)
    neg = LogReal.from_float(-2.0) ** 3
    assert neg.to_float() == pytest.approx(-8.0, rel=1e-13)
    with pytest.raises(DomainError):
        LogReal.from_float(-2.0) ** 0.5
    frac = LogReal.from_float(9.0) ** 0.5
    assert frac.to_float() == pytest.approx(3.0, rel=1e-13)


def test_logreal_comparisons():
    values = [-3.0, -0.5, 0.0, 0.25, 7.0]
    encoded = [LogReal.from_float(v) for v in values]
    for i, x in enumerate(encoded):
        for j, y in enumerate(encoded):
            assert (x < y) == (values[i] < values[j])
            assert (x >= y) == (values[i] >= values[j])


def test_logreal_coerces_plain_numbers():
    assert (LogReal.from_float(2.0) * 3).to_float() == pytest.approx(6.0, rel=1e-14)
    assert (1 + LogReal.from_float(2.0)).to_float() == pytest.approx(3.0, rel=1e-14)
