"""Tests for the closed-form constants and the crossing solver."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dispbound import constants as cmod
from dispbound.constants import (
    AbScan,
    a_n,
    b_n,
    c_n,
    constants_row,
    envelope_b_n,
    h_n,
    i_bar_n,
    i_n,
    i_star_n,
    j_n,
    mean_curvature_constant,
    pal_constant,
    quoted_closed_form_h2,
    rho_n,
    rho_star,
    scan_ab,
    solve_crossing,
    sphere_reference,
    suboptimality_factor,
)
from dispbound.errors import ConfigurationError, DomainError

TWO_SQRT_E = 2.0 * math.sqrt(math.e)

# ---------------------------------------------------------------------------
# Branch point rho_n
# ---------------------------------------------------------------------------


def test_rho_n_small_dimensions():
    assert rho_n(2) == pytest.approx(2.0, rel=1e-14)
    assert rho_n(3) == pytest.approx(math.pi / (math.pi - 1.0), rel=1e-13)


def test_rho_n_decreases_toward_one():
    values = [rho_n(n) for n in range(2, 501)]
    assert all(b < a for a, b in zip(values, values[1:]))
    assert values[-1] < 1.1
    assert all(v > 1.0 for v in values)


# ---------------------------------------------------------------------------
# The piecewise envelope i_n and its relatives
# ---------------------------------------------------------------------------


def test_i_n_infinite_rho_limit_n2():
    # second branch tends to w_0 / (2 * 1 * 2^0) = 1/2
    assert i_n(2, 1e9).to_float() == pytest.approx(0.5, abs=1e-8)


def test_i_n_branch_value_at_rho_two_dim_three():
    # rho_3 = pi/(pi-1) ~ 1.467 < 2, so the second branch applies:
    # w_1 / (3 * 2 * 2) * (1/2)^2 = 1/24
    assert i_n(3, 2.0).to_float() == pytest.approx(1.0 / 24.0, rel=1e-13)


def test_i_n_branches_continuous_at_branch_point():
    for n in range(2, 51):
        rho = rho_n(n)
        log_q = math.log(rho - 1.0) - math.log(rho)
        b1 = cmod._log_i_branch1(n, log_q)
        b2 = cmod._log_i_branch2(n, log_q)
        tol = 1e-14 if n == 2 else 1e-13
        assert abs(b1 - b2) <= tol


def test_i_n_domain_errors():
    for bad in (1.0, 0.5, -2.0, math.inf, math.nan):
        with pytest.raises(DomainError):
            i_n(2, bad)
    with pytest.raises(DomainError):
        i_n(1, 2.0)


def test_i_n_nondecreasing_j_n_strictly_decreasing():
    grid = np.geomspace(1.0 + 1e-6, 1e4, 160)
    for n in range(2, 51):
        i_vals = [i_n(n, float(r)).log_magnitude for r in grid]
        j_vals = [j_n(n, float(r)).log_magnitude for r in grid]
        assert all(b >= a - 1e-12 for a, b in zip(i_vals, i_vals[1:]))
        assert all(b < a for a, b in zip(j_vals, j_vals[1:]))


def test_i_n_range_bound():
    # i_n stays strictly below w_n / 2^(n-1)
    from dispbound.numerics import LOG_2, log_unit_ball_volume

    grid = np.geomspace(1.0 + 1e-6, 1e4, 60)
    for n in range(2, 51):
        cap = log_unit_ball_volume(n) - (n - 1) * LOG_2
        assert all(i_n(n, float(r)).log_magnitude < cap for r in grid)


def test_i_bar_value_and_limit():
    assert i_bar_n(2, 2.0).to_float() == pytest.approx(3 * math.pi / 8, rel=1e-13)
    from dispbound.numerics import LOG_2, log_unit_ball_volume

    for n in (2, 3, 5):
        limit = log_unit_ball_volume(n) - (n - 1) * LOG_2
        assert i_bar_n(n, 1e12).log_magnitude == pytest.approx(limit, abs=1e-10)


@pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
@pytest.mark.parametrize("rho", [1.5, 2.0, 5.0, 20.0])
def test_cylinder_ratio_identity(n, rho):
    # for rho on the outer branch, i_bar/i = (n-1) pi + (n-1)^2 pi / rho;
    # at n = 2 this reads pi + pi/rho
    if rho < rho_n(n):
        pytest.skip("identity only holds past the branch point")
    ratio = math.exp(i_bar_n(n, rho).log_magnitude - i_n(n, rho).log_magnitude)
    expected = (n - 1) * math.pi + (n - 1) ** 2 * math.pi / rho
    assert ratio == pytest.approx(expected, rel=1e-12)


def test_i_star_value_and_vanishing():
    assert i_star_n(2, 2.0).to_float() == pytest.approx(math.pi / 8, rel=1e-13)
    assert i_star_n(2, 1.0 + 1e-12).log_magnitude < -25.0


def test_i_star_over_i_on_first_branch():
    # the quotient on branch 1 is n w_n / (2 w_{n-1}) >= 1
    from dispbound.numerics import log_unit_ball_volume

    for n in (2, 3, 7, 20):
        rho = 1.0 + 0.25 * (rho_n(n) - 1.0)
        got = i_star_n(n, rho).log_magnitude - i_n(n, rho).log_magnitude
        expected = (
            math.log(n) + log_unit_ball_volume(n) - math.log(2.0) - log_unit_ball_volume(n - 1)
        )
        assert got == pytest.approx(expected, abs=1e-12)
        assert got >= -1e-12


# ---------------------------------------------------------------------------
# Width-volume constants
# ---------------------------------------------------------------------------


def test_pal_firey_constants():
    assert pal_constant(2).to_float() == pytest.approx(1 / math.sqrt(3), rel=1e-13)
    assert pal_constant(3).to_float() == pytest.approx(1 / (3 * math.sqrt(3)), rel=1e-13)


def test_bezdek_small_dimensions():
    # odd d = 3: sqrt(3 * 4!! / (2 * (3!!)^5)) = sqrt(24/486) = 2/9
    assert pal_constant(3, "bezdek").to_float() == pytest.approx(2.0 / 9.0, rel=1e-13)
    # even d = 4: sqrt(3 pi 6!! / (5^2 (4!!)^2 (3!!)^3))
    direct = math.sqrt(3 * math.pi * 48 / (25 * 64 * 27))
    assert pal_constant(4, "bezdek").to_float() == pytest.approx(direct, rel=1e-13)


def test_bezdek_beats_pal_firey():
    for d in range(3, 21):
        assert pal_constant(d, "bezdek") > pal_constant(d, "pal_firey")


def test_pal_constant_validation():
    with pytest.raises(DomainError):
        pal_constant(2, "bezdek")
    with pytest.raises(ConfigurationError):
        pal_constant(3, "improved")
    with pytest.raises(DomainError):
        pal_constant(1)


# ---------------------------------------------------------------------------
# j_n
# ---------------------------------------------------------------------------


def test_j_n_at_rho_one_dim_two():
    # 4 pi (K_3 / w_3)^(2/3) with K_3/w_3 = 1/(4 sqrt(3) pi)
    expected = 4 * math.pi * (1.0 / (4 * math.sqrt(3) * math.pi)) ** (2.0 / 3.0)
    assert j_n(2, 1.0).to_float() == pytest.approx(expected, rel=1e-13)
    assert j_n(2, 1.0).to_float() == pytest.approx(1.6119919540164696, rel=1e-12)


@given(rho=st.floats(min_value=1.0, max_value=1e8), n=st.integers(min_value=2, max_value=40))
@settings(max_examples=150)
def test_j_n_scaling_homogeneity(rho, n):
    doubled = j_n(n, 2.0 * rho).log_magnitude
    base = j_n(n, rho).log_magnitude - n * math.log(2.0)
    assert doubled == pytest.approx(base, abs=1e-12)


def test_j_n_bezdek_dominates_for_n3():
    for rho in (1.0, 1.3, 2.0, 10.0, 1e4):
        assert j_n(3, rho, "bezdek") > j_n(3, rho, "pal_firey")


def test_j_n_validation():
    with pytest.raises(DomainError):
        j_n(2, 0.999)


# ---------------------------------------------------------------------------
# a_n, b_n, c_n
# ---------------------------------------------------------------------------


def test_a_b_small_values():
    assert a_n(2).to_float() == pytest.approx(1.2696424512501422, rel=1e-12)
    assert b_n(2).to_float() == pytest.approx(1.0, rel=1e-12)
    assert b_n(3).to_float() == pytest.approx(1.0 / (math.pi - 1.0), rel=1e-12)


def test_ab_ratio_trend_toward_limit():
    # approach is from below and (past n ~ 10^3) the gap shrinks steadily;
    # between 10^2 and 10^3 a log-term hump makes the gap grow briefly
    ratios = [
        math.exp(a_n(n).log_magnitude - b_n(n).log_magnitude)
        for n in (1_000, 10_000, 100_000)
    ]
    assert all(r < TWO_SQRT_E for r in ratios)
    gaps = [TWO_SQRT_E - r for r in ratios]
    assert all(b < a for a, b in zip(gaps, gaps[1:]))
    assert gaps[-1] < 0.005


def test_c_n_solves_crossing_equation_dim2():
    # at n = 2, c_2 equals the right-hand side rho(rho-1) itself
    k3_over_w3 = 1.0 / (4 * math.sqrt(3) * math.pi)
    rhs = 8 * math.pi * k3_over_w3 ** (2.0 / 3.0)
    assert c_n(2).to_float() == pytest.approx(rhs, rel=1e-12)


# ---------------------------------------------------------------------------
# rho_star / h_n
# ---------------------------------------------------------------------------


def test_rho_star_dim2_residual_oracle():
    rho, branch = rho_star(2)
    k3_over_w3 = 1.0 / (4 * math.sqrt(3) * math.pi)
    rhs = 8 * math.pi * k3_over_w3 ** (2.0 / 3.0)
    assert branch == "second"
    assert rho * (rho - 1.0) == pytest.approx(rhs, rel=1e-10)
    assert rho == pytest.approx(2.3638626312131855, rel=1e-12)


def test_crossing_equality_within_tol():
    for n in (2, 3, 5, 17, 101, 1000):
        for kind in ("pal_firey", "bezdek"):
            result = solve_crossing(n, kind, tol=1e-12)
            gap = abs(
                i_n(n, result.rho_star).log_magnitude
                - j_n(n, result.rho_star, kind).log_magnitude
            )
            assert gap <= 1e-10


def test_branch_flag_matches_coefficient_comparison():
    for n in range(2, 1001):
        result = solve_crossing(n)
        expects_second = a_n(n).log_magnitude > b_n(n).log_magnitude
        assert (result.branch == "second") == expects_second
        # equivalent characterization: past the branch point iff second branch
        assert (result.rho_star > rho_n(n)) == expects_second


def test_rho_star_bracketed_by_c_n():
    for n in (50, 500, 5000):
        c = c_n(n).to_float()
        rho, _ = rho_star(n)
        assert 1.0 + c - c * c / (n - 1.0) <= rho <= 1.0 + c + 1e-15


def test_h2_pipeline_value():
    assert h_n(2).log_magnitude == pytest.approx(-1.2431233256961722, abs=1e-12)
    assert h_n(2).to_float() == pytest.approx(0.28848178680188825, rel=1e-12)


def test_h_n_decreasing():
    values = [h_n(n).log_magnitude for n in range(2, 51)]
    assert all(b < a for a, b in zip(values, values[1:]))


def test_quoted_closed_form_differs_from_pipeline():
    quoted = quoted_closed_form_h2()
    assert quoted == pytest.approx(0.22379194175891923, rel=1e-15)
    pipeline = h_n(2).to_float()
    # the two are genuinely different quantities; neither overrides the other
    assert abs(quoted - pipeline) > 0.06


def test_quoted_display_table():
    assert set(cmod.QUOTED_DISPLAY_VALUES) == {2, 3, 4}


def test_deep_dimension_log_value():
    assert solve_crossing(150).log_h == pytest.approx(-617.8318009855368, abs=1e-8)


def test_solver_tol_validation():
    with pytest.raises(ConfigurationError):
        solve_crossing(5, tol=0.0)


# ---------------------------------------------------------------------------
# envelope
# ---------------------------------------------------------------------------


def test_envelope_matches_j_at_one():
    for n in (2, 3, 10):
        assert envelope_b_n(n, 1.0).log_magnitude == j_n(n, 1.0).log_magnitude


def test_envelope_at_crossing_equals_h():
    for n in (2, 3, 10, 50):
        result = solve_crossing(n)
        env = envelope_b_n(n, result.rho_star).log_magnitude
        assert env == pytest.approx(result.log_h, abs=1e-10)


def test_envelope_large_rho_limit():
    # i_n's outer branch tends to w_{n-2} / (n (n-1) 2^(n-2))
    from dispbound.numerics import LOG_2, log_unit_ball_volume

    for n in (2, 3, 6):
        limit = (
            log_unit_ball_volume(n - 2)
            - math.log(n)
            - math.log(n - 1)
            - (n - 2) * LOG_2
        )
        assert envelope_b_n(n, 1e9).log_magnitude == pytest.approx(limit, abs=1e-8)


def test_single_sign_change_of_crossing_gap():
    grid = np.geomspace(1.0 + 1e-9, 1e6, 4000)
    for n in (2, 3, 10, 50):
        signs = np.sign(
            [i_n(n, float(r)).log_magnitude - j_n(n, float(r)).log_magnitude for r in grid]
        )
        flips = int(np.count_nonzero(np.diff(signs) != 0))
        assert flips == 1


def test_envelope_minimum_is_h():
    # the envelope is the max of an increasing and a decreasing curve, so
    # its global minimum sits exactly at the crossing
    for n in (2, 5):
        result = solve_crossing(n)
        grid = np.concatenate([np.geomspace(1.0 + 1e-9, 1e5, 3000), [result.rho_star]])
        env = np.array([envelope_b_n(n, float(r)).log_magnitude for r in grid])
        assert float(env.min()) >= result.log_h - 1e-9
        assert int(env.argmin()) == len(grid) - 1


# ---------------------------------------------------------------------------
# reference constants
# ---------------------------------------------------------------------------


def test_sphere_reference_dim2():
    assert sphere_reference(2).to_float() == pytest.approx(4.0 / math.pi, rel=1e-13)


def test_mean_curvature_constant_identity():
    # P_n * pi = n^(n-1) sigma_n
    from dispbound.numerics import log_unit_sphere_area

    for n in (1, 2, 3, 10, 40):
        lhs = mean_curvature_constant(n).log_magnitude + math.log(math.pi)
        rhs = (n - 1) * math.log(n) + log_unit_sphere_area(n)
        assert lhs == pytest.approx(rhs, abs=1e-12)


def test_suboptimality_times_sqrt_factorial_bounded_on_window():
    from dispbound.numerics import log_gamma

    for n in range(2, 61):
        value = math.exp(
            suboptimality_factor(n).log_magnitude + 0.5 * log_gamma(n + 1.0)
        )
        assert 0.0 < value <= 100.0


# ---------------------------------------------------------------------------
# rows and scans
# ---------------------------------------------------------------------------


def test_constants_row_invariants():
    for n in (2, 3, 10, 30):
        for kind in ("pal_firey", "bezdek"):
            row = constants_row(n, kind)
            assert row.rho_star > 1.0
            assert (row.branch == "second") == (row.a_n > row.b_n)
            gap = abs(
                i_n(n, row.rho_star).log_magnitude
                - j_n(n, row.rho_star, kind).log_magnitude
            )
            assert gap <= 1e-10
            assert math.exp(row.log_h_n) == pytest.approx(
                j_n(n, row.rho_star, kind).to_float(), rel=1e-10
            )


def test_scan_ab_no_violations_and_min_at_two():
    scan = scan_ab(2, 2000)
    assert isinstance(scan, AbScan)
    assert scan.violations == 0
    assert scan.argmin_n == 2
    assert scan.min_ratio == pytest.approx(1.2696424512501422, rel=1e-10)
    assert scan.ratios is not None and len(scan.ratios) == 1999
    assert scan.ratios.min() > 1.0


def test_scan_ab_matches_scalar_endpoints():
    scan = scan_ab(2, 5000)
    scalar = math.exp(a_n(5000).log_magnitude - b_n(5000).log_magnitude)
    assert scan.ratio_at_max == pytest.approx(scalar, rel=1e-12)
    assert scan.ratios is None  # range too large to retain


def test_scan_branch_criterion_sampled_to_1e5():
    scan = scan_ab(2, 100_000)
    assert scan.violations == 0
    for n in (2, 3, 17, 1_000, 31_623, 100_000):
        _, branch = rho_star(n)
        ratio_positive = a_n(n).log_magnitude > b_n(n).log_magnitude
        assert (branch == "second") == ratio_positive


def test_scan_validation():
    with pytest.raises(ConfigurationError):
        scan_ab(5, 4)
    with pytest.raises(ConfigurationError):
        scan_ab(2, 10**6 + 1)
