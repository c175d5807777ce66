"""Closed-form constants and the crossing equation behind the area bounds.

This module evaluates, entirely in the log domain, every constant of the
displacement/area machinery: the branch point ``rho_n`` of the piecewise area
envelope ``i_n``, the cylinder-area form ``i_bar_n``, the supported-slab form
``i_star_n``, the width-volume constants (Pal-Firey ``2/(sqrt(3) d!)`` and the
Bezdek double-factorial improvements), the isoperimetric comparison ``j_n``,
the crossing coefficients ``a_n``/``b_n``/``c_n``, and the crossing point
``rho_star`` whose common value ``h_n = i_n(rho*) = j_n(rho*)`` is the
dimensional constant of the main area bound.

The crossing is solved on ``u = ln(rho - 1)`` where the defining equation
``rho (rho-1)^(n-1) = RHS`` becomes ``log1p(e^u) + (n-1) (u - ln c_n) = 0``,
a strictly increasing function with a guaranteed analytic bracket, so plain
bisection plus a Newton polish is exact to the last bit regardless of n.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np

from .errors import ConfigurationError, DomainError, NumericalError
from .numerics import (
    LOG_2,
    LOG_PI,
    LogReal,
    log_double_factorial,
    log_gamma,
    log_gamma_array,
    log_unit_ball_volume,
    log_unit_ball_volume_array,
    log_unit_sphere_area,
)

Kind = Literal["pal_firey", "bezdek"]
KINDS: tuple[str, ...] = ("pal_firey", "bezdek")
DEFAULT_KIND: Kind = "pal_firey"

#: Linear-scale values quoted in the source literature for small dimensions.
#: These are display values only; the crossing pipeline computes its own h_n
#: and the two are reported side by side, never merged (see README).
QUOTED_DISPLAY_VALUES = {2: 0.2237, 3: 0.0443, 4: 0.0080}


def _check_kind(kind: str) -> str:
    if kind not in KINDS:
        raise ConfigurationError(f"kind must be one of {KINDS}, got {kind!r}")
    return kind


def _check_dim(n: int, minimum: int = 2) -> int:
    if not isinstance(n, (int, np.integer)) or isinstance(n, bool) or n < minimum:
        raise DomainError(f"dimension must be an integer >= {minimum}, got {n!r}")
    return int(n)


def _check_rho(rho: float, allow_one: bool = False) -> float:
    try:
        rho = float(rho)
    except (TypeError, ValueError):
        raise DomainError(f"rho must be a real number, got {rho!r}") from None
    if not math.isfinite(rho):
        raise DomainError(f"rho must be finite, got {rho!r}")
    if allow_one:
        if rho < 1.0:
            raise DomainError(f"rho must be >= 1, got {rho!r}")
    elif rho <= 1.0:
        raise DomainError(f"rho must be > 1, got {rho!r}")
    return rho


def _log_gap_ratio(rho: float) -> float:
    """ln((rho - 1)/rho).

    Written as log(rho - 1) - log(rho): for 1 < rho < 2 the subtraction
    rho - 1 is exact (Sterbenz), so there is no cancellation for rho near 1.
    """
    return math.log(rho - 1.0) - math.log(rho)


# ---------------------------------------------------------------------------
# Branch point and the piecewise envelope
# ---------------------------------------------------------------------------


def rho_n(n: int) -> float:
    """Branch point (n-1) w_{n-1} / ((n-1) w_{n-1} - w_{n-2}) of the envelope.

    Computed as 1/(1 - t) with t = w_{n-2} / ((n-1) w_{n-1}) evaluated in the
    log domain (w_k = unit k-ball volume); t < 1 for every n >= 2.
    """
    n = _check_dim(n)
    log_t = (
        log_unit_ball_volume(n - 2)
        - math.log(n - 1)
        - log_unit_ball_volume(n - 1)
    )
    return 1.0 / (1.0 - math.exp(log_t))


def _log_i_branch1(n: int, log_q: float) -> float:
    # w_{n-1} / (n 2^(n-2)) * q^n   with q = (rho-1)/rho
    return log_unit_ball_volume(n - 1) - math.log(n) - (n - 2) * LOG_2 + n * log_q


def _log_i_branch2(n: int, log_q: float) -> float:
    # w_{n-2} / (n (n-1) 2^(n-2)) * q^(n-1)
    return (
        log_unit_ball_volume(n - 2)
        - math.log(n)
        - math.log(n - 1)
        - (n - 2) * LOG_2
        + (n - 1) * log_q
    )


def i_n(n: int, rho: float) -> LogReal:
    """Piecewise area envelope: branch 1 for rho <= rho_n, branch 2 above.

    Branch 1 is w_{n-1}/(n 2^(n-2)) ((rho-1)/rho)^n; branch 2 is
    w_{n-2}/(n (n-1) 2^(n-2)) ((rho-1)/rho)^(n-1).  The two branches agree at
    rho_n by construction of the branch point.
    """
    n = _check_dim(n)
    rho = _check_rho(rho)
    log_q = _log_gap_ratio(rho)
    if rho <= rho_n(n):
        return LogReal.from_log(_log_i_branch1(n, log_q))
    return LogReal.from_log(_log_i_branch2(n, log_q))


def i_bar_n(n: int, rho: float) -> LogReal:
    """Cylinder-boundary area form: w_n/2^(n-1) q^(n-1) (1 + (n-1)/rho)."""
    n = _check_dim(n)
    rho = _check_rho(rho)
    log_q = _log_gap_ratio(rho)
    return LogReal.from_log(
        log_unit_ball_volume(n)
        - (n - 1) * LOG_2
        + (n - 1) * log_q
        + math.log1p((n - 1) / rho)
    )


def i_star_n(n: int, rho: float) -> LogReal:
    """Supported-pair envelope: w_n/2^(n-1) ((rho-1)/rho)^n."""
    n = _check_dim(n)
    rho = _check_rho(rho)
    log_q = _log_gap_ratio(rho)
    return LogReal.from_log(
        log_unit_ball_volume(n) - (n - 1) * LOG_2 + n * log_q
    )


# ---------------------------------------------------------------------------
# Width-volume constants
# ---------------------------------------------------------------------------


def pal_constant(d: int, kind: Kind = DEFAULT_KIND) -> LogReal:
    """Width-volume constant in dimension d.

    kind="pal_firey": 2 / (sqrt(3) d!), valid for d >= 2.
    kind="bezdek": the double-factorial improvement, valid for d >= 3 —
    sqrt(3 pi^(d-3) (d+2)!! / ((d+1)^2 (d!!)^2 ((d-1)!!)^3)) for even d and
    sqrt(3 pi^(d-3) (d+1)!! / (2^(d-2) (d!!)^5)) for odd d.
    """
    d = _check_dim(d)
    _check_kind(kind)
    if kind == "pal_firey":
        return LogReal.from_log(LOG_2 - 0.5 * math.log(3.0) - log_gamma(d + 1.0))
    if d < 3:
        raise DomainError(f"bezdek constant needs d >= 3, got {d}")
    log3 = math.log(3.0)
    if d % 2 == 0:
        inner = (
            log3
            + (d - 3) * LOG_PI
            + log_double_factorial(d + 2)
            - 2.0 * math.log(d + 1)
            - 2.0 * log_double_factorial(d)
            - 3.0 * log_double_factorial(d - 1)
        )
    else:
        inner = (
            log3
            + (d - 3) * LOG_PI
            + log_double_factorial(d + 1)
            - (d - 2) * LOG_2
            - 5.0 * log_double_factorial(d)
        )
    return LogReal.from_log(0.5 * inner)


def _log_sphere_area(n: int) -> float:
    # sigma_n = 2 pi w_{n-1}
    return log_unit_sphere_area(n)


def _log_kind_ratio(n: int, kind: Kind) -> float:
    """(n/(n+1)) * (ln constant_{n+1} - ln w_{n+1}) — the recurring exponent."""
    c = pal_constant(n + 1, kind)
    return (n / (n + 1.0)) * (c.log_magnitude - log_unit_ball_volume(n + 1))


def j_n(n: int, rho: float, kind: Kind = DEFAULT_KIND) -> LogReal:
    """Isoperimetric comparison: sigma_n (C_{n+1}/w_{n+1})^(n/(n+1)) rho^-n."""
    n = _check_dim(n)
    rho = _check_rho(rho, allow_one=True)
    _check_kind(kind)
    return LogReal.from_log(
        _log_sphere_area(n) + _log_kind_ratio(n, kind) - n * math.log(rho)
    )


# ---------------------------------------------------------------------------
# Crossing coefficients a_n, b_n, c_n
# ---------------------------------------------------------------------------


def a_n(n: int, kind: Kind = DEFAULT_KIND) -> LogReal:
    """(2^(n-1) pi n)^(1/n) * (C_{n+1}/w_{n+1})^(1/(n+1))."""
    n = _check_dim(n)
    _check_kind(kind)
    c = pal_constant(n + 1, kind)
    log_a = ((n - 1) * LOG_2 + LOG_PI + math.log(n)) / n + (
        c.log_magnitude - log_unit_ball_volume(n + 1)
    ) / (n + 1.0)
    return LogReal.from_log(log_a)


def b_n(n: int) -> LogReal:
    """1 / ((n-1) w_{n-1}/w_{n-2} - 1), evaluated as 1/expm1 of the log."""
    n = _check_dim(n)
    g = (
        math.log(n - 1)
        + log_unit_ball_volume(n - 1)
        - log_unit_ball_volume(n - 2)
    )
    # g > 0 for n >= 2, so ln expm1(g) = g + log1p(-exp(-g)) is stable
    return LogReal.from_log(-(g + math.log1p(-math.exp(-g))))


def _log_crossing_rhs(n: int, kind: Kind) -> float:
    """ln of the right side of rho (rho-1)^(n-1) = pi n (n-1) 2^(n-1)
    (w_{n-1}/w_{n-2}) (C_{n+1}/w_{n+1})^(n/(n+1))."""
    return (
        LOG_PI
        + math.log(n)
        + math.log(n - 1)
        + (n - 1) * LOG_2
        + log_unit_ball_volume(n - 1)
        - log_unit_ball_volume(n - 2)
        + _log_kind_ratio(n, kind)
    )


def c_n(n: int, kind: Kind = DEFAULT_KIND) -> LogReal:
    """(n-1)-st root of the crossing equation's right-hand side."""
    n = _check_dim(n)
    _check_kind(kind)
    if n == 2:
        return LogReal.from_log(_log_crossing_rhs(2, kind))
    return LogReal.from_log(_log_crossing_rhs(n, kind) / (n - 1.0))


# ---------------------------------------------------------------------------
# The crossing point rho_star and its value h_n
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CrossingResult:
    """Solution of i_n(rho) = j_n(rho): location, branch, value, residual."""

    n: int
    kind: str
    rho_star: float
    branch: str  # "first" (rho* <= rho_n) or "second" (rho* > rho_n)
    log_delta: float  # ln(rho_star - 1), the solver's native variable
    log_h: float  # ln of the common crossing value
    residual: float  # log-scale defect |ln i_n - ln j_n| at the solution


def solve_crossing(
    n: int, kind: Kind = DEFAULT_KIND, tol: float = 1e-10
) -> CrossingResult:
    """Locate the unique rho > 1 with i_n(rho) = j_n(rho).

    If a_n <= b_n the crossing lies on the first branch and is the closed
    form rho* = 1 + a_n.  Otherwise it lies past the branch point and solves
    rho (rho-1)^(n-1) = RHS, handled in v = ln(rho-1) - ln c_n where the
    equation reads g(v) = log1p(c_n e^v) + (n-1) v = 0: strictly increasing,
    with sign change guaranteed on [-log1p(c_n), 0].
    """
    n = _check_dim(n)
    _check_kind(kind)
    if not (tol > 0.0):
        raise ConfigurationError(f"tol must be positive, got {tol!r}")

    log_a = a_n(n, kind).log_magnitude
    log_b = b_n(n).log_magnitude
    if log_a <= log_b:
        log_delta = log_a
        branch = "first"
        delta = math.exp(log_delta)
        log_h = (
            _log_sphere_area(n) + _log_kind_ratio(n, kind) - n * math.log1p(delta)
        )
        residual = abs(
            _log_i_branch1(n, log_delta - math.log1p(delta)) - log_h
        )
    else:
        log_c = c_n(n, kind).log_magnitude
        log_rhs = _log_crossing_rhs(n, kind)

        def g(v: float) -> float:
            return math.log1p(math.exp(v + log_c)) + (n - 1.0) * v

        lo = -math.log1p(math.exp(log_c))
        hi = 0.0
        g_lo, g_hi = g(lo), g(hi)
        if not (g_lo <= 0.0 <= g_hi):
            raise NumericalError(
                "failed to bracket the crossing equation",
                diagnostics={
                    "n": n,
                    "kind": kind,
                    "log_c": log_c,
                    "g_lo": g_lo,
                    "g_hi": g_hi,
                    "rho_window": (1.0 + 1e-12, 1e6),
                },
            )
        for _ in range(120):
            mid = 0.5 * (lo + hi)
            if g(mid) <= 0.0:
                lo = mid
            else:
                hi = mid
            if hi - lo <= 1e-15 * max(1.0, abs(lo)):
                break
        v = 0.5 * (lo + hi)
        for _ in range(2):  # Newton polish: g' = w/(1+w) + (n-1), w = c e^v
            w = math.exp(v + log_c)
            v -= g(v) / (w / (1.0 + w) + (n - 1.0))
        log_delta = v + log_c
        branch = "second"
        delta = math.exp(log_delta)
        log_h = (
            _log_sphere_area(n) + _log_kind_ratio(n, kind) - n * math.log1p(delta)
        )
        # ln i_n - ln j_n at the solution collapses to g(v) exactly
        residual = abs((n - 1.0) * log_delta + math.log1p(delta) - log_rhs)

    if residual > tol:
        raise NumericalError(
            "crossing residual exceeds tolerance",
            diagnostics={"n": n, "kind": kind, "residual": residual, "tol": tol},
        )
    return CrossingResult(
        n=n,
        kind=kind,
        rho_star=1.0 + math.exp(log_delta),
        branch=branch,
        log_delta=log_delta,
        log_h=log_h,
        residual=residual,
    )


def rho_star(
    n: int, kind: Kind = DEFAULT_KIND, tol: float = 1e-10
) -> tuple[float, str]:
    """Crossing location and branch flag ("first" iff a_n <= b_n)."""
    result = solve_crossing(n, kind, tol)
    return result.rho_star, result.branch


def h_n(n: int, kind: Kind = DEFAULT_KIND) -> LogReal:
    """The common crossing value i_n(rho*) = j_n(rho*), as a LogReal."""
    return LogReal.from_log(solve_crossing(n, kind).log_h)


def envelope_b_n(n: int, rho: float, kind: Kind = DEFAULT_KIND) -> LogReal:
    """max(i_n(rho), j_n(rho)) with i_n extended by 0 at rho = 1."""
    n = _check_dim(n)
    rho = _check_rho(rho, allow_one=True)
    _check_kind(kind)
    j_val = j_n(n, rho, kind)
    if rho == 1.0:
        return j_val
    i_val = i_n(n, rho)
    return i_val if i_val > j_val else j_val


# ---------------------------------------------------------------------------
# Reference constants
# ---------------------------------------------------------------------------


def sphere_reference(n: int) -> LogReal:
    """sigma_n / pi^n — the value the round sphere's antipodal map attains."""
    n = _check_dim(n, minimum=1)
    return LogReal.from_log(_log_sphere_area(n) - n * LOG_PI)


def mean_curvature_constant(n: int) -> LogReal:
    """P_n = n^(n-1) sigma_n / pi."""
    n = _check_dim(n, minimum=1)
    return LogReal.from_log((n - 1) * math.log(n) + _log_sphere_area(n) - LOG_PI)


def suboptimality_factor(n: int, kind: Kind = DEFAULT_KIND) -> LogReal:
    """h_n / (sigma_n / pi^n): how far the pipeline constant sits below the
    sphere-optimal one."""
    n = _check_dim(n)
    return LogReal.from_log(
        solve_crossing(n, kind).log_h - sphere_reference(n).log_magnitude
    )


def quoted_closed_form_h2() -> float:
    """The quoted radical closed form for n = 2: (pi/6)^(1/3) / (1 + (pi/6)^(1/6))^2.

    Computed independently of the crossing pipeline; the two disagree (this
    expression equals the first-branch crossing against a halved j_2) and are
    always reported side by side.  See README for the comparison.
    """
    r = (math.pi / 6.0) ** (1.0 / 6.0)
    return r * r / (1.0 + r) ** 2


# ---------------------------------------------------------------------------
# Row assembly and the a/b scan
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ConstantsRow:
    """One dimension's worth of crossing data (linear scale where safe)."""

    n: int
    rho_n: float
    a_n: float
    b_n: float
    c_n: float
    rho_star: float
    log_h_n: float
    branch: str
    pal_constant_kind: str


def constants_row(n: int, kind: Kind = DEFAULT_KIND) -> ConstantsRow:
    result = solve_crossing(n, kind)
    return ConstantsRow(
        n=int(n),
        rho_n=rho_n(n),
        a_n=a_n(n, kind).to_float(),
        b_n=b_n(n).to_float(),
        c_n=c_n(n, kind).to_float(),
        rho_star=result.rho_star,
        log_h_n=result.log_h,
        branch=result.branch,
        pal_constant_kind=kind,
    )


@dataclass(frozen=True)
class AbScan:
    """Summary of an a_n > b_n scan over a contiguous dimension range."""

    n_min: int
    n_max: int
    violations: int
    min_ratio: float
    argmin_n: int
    ratio_at_max: float
    ratios: np.ndarray | None  # per-n a/b, kept only for small ranges

    @property
    def limit_gap_at_max(self) -> float:
        """|ratio(n_max) - 2 sqrt(e)|, the distance to the limiting value."""
        return abs(self.ratio_at_max - 2.0 * math.sqrt(math.e))


def scan_ab(
    n_min: int = 2,
    n_max: int = 100_000,
    keep_ratios_below: int = 2_001,
    chunk: int = 250_000,
) -> AbScan:
    """Vectorized scan of the ratio a_n/b_n over n = n_min..n_max.

    Work proceeds in fixed-size chunks so results are independent of any
    parallel split.  Per-n ratios are retained only when the range is small
    enough to be worth printing.
    """
    n_min, n_max = _check_dim(n_min), _check_dim(n_max)
    if n_max < n_min:
        raise ConfigurationError(f"empty scan range [{n_min}, {n_max}]")
    if n_max > 10**6:
        raise ConfigurationError(f"scan range capped at 1e6, got n_max={n_max}")

    keep = (n_max - n_min + 1) < keep_ratios_below
    kept: list[np.ndarray] = []
    violations = 0
    min_ratio = math.inf
    argmin_n = n_min
    ratio_at_max = math.nan
    for start in range(n_min, n_max + 1, chunk):
        stop = min(start + chunk - 1, n_max)
        ns = np.arange(start, stop + 1, dtype=np.int64)
        nf = ns.astype(float)
        lv_nm1 = log_unit_ball_volume_array(ns - 1)
        lv_nm2 = log_unit_ball_volume_array(ns - 2)
        lv_np1 = log_unit_ball_volume_array(ns + 1)
        # pal-firey constant in dimension n+1: ln(2/(sqrt(3) (n+1)!))
        log_k = LOG_2 - 0.5 * math.log(3.0) - log_gamma_array(nf + 2.0)
        log_a = ((nf - 1.0) * LOG_2 + LOG_PI + np.log(nf)) / nf + (
            log_k - lv_np1
        ) / (nf + 1.0)
        g = np.log(nf - 1.0) + lv_nm1 - lv_nm2
        log_b = -(g + np.log1p(-np.exp(-g)))
        ratios = np.exp(log_a - log_b)
        violations += int(np.count_nonzero(ratios <= 1.0))
        idx = int(np.argmin(ratios))
        if ratios[idx] < min_ratio:
            min_ratio = float(ratios[idx])
            argmin_n = int(ns[idx])
        if stop == n_max:
            ratio_at_max = float(ratios[-1])
        if keep:
            kept.append(ratios)
    return AbScan(
        n_min=n_min,
        n_max=n_max,
        violations=violations,
        min_ratio=min_ratio,
        argmin_n=argmin_n,
        ratio_at_max=ratio_at_max,
        ratios=np.concatenate(kept) if keep else None,
    )
