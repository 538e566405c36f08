"""A priori bounds on the positive eigenfunction v_s.

Every quantity here bounds a ratio ``D^p v_s / v_s`` (or a log-slope) over
the whole domain; the collocation module turns these into interpolation
error corrections.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError, InputError
from .maps import PerturbedCantor

__all__ = [
    "BoundProfile1D",
    "BoundProfile2D",
    "EpsilonSeries",
    "cf_derivative_bound",
    "cf_lipschitz_factor",
    "cf_profile",
    "perturbed_constants",
    "perturbed_epsilon_series",
    "perturbed_profile",
    "BOUND_CONVENTIONS",
    "LOG2_OVER_LOG5",
    "general_profile_1d",
    "convexity_condition_holds",
    "profile_2d",
    "tail_constant",
]


@dataclass(frozen=True)
class BoundProfile1D:
    """Bounds for the 1D eigenfunction.

    ``d2_lower <= D^2 v / v <= d2_upper``, ``|D v| / v <= d1_abs`` and
    ``v(x2) <= v(x1) exp(log_slope |x2 - x1|)``.
    """

    d1_abs: float
    d2_lower: float
    d2_upper: float
    log_slope: float
    convexity_certified: bool

    def __post_init__(self):
        if not (self.d2_lower <= 0.0 <= self.d2_upper):
            raise InputError("need d2_lower <= 0 <= d2_upper")
        if self.log_slope < 0.0 or self.d1_abs < 0.0:
            raise InputError("d1_abs and log_slope must be nonnegative")
        if self.convexity_certified and self.d2_lower != 0.0:
            raise InputError("a convexity certificate forces d2_lower = 0")


@dataclass(frozen=True)
class BoundProfile2D:
    dxx_lower: float
    dxx_upper: float
    dyy_lower: float
    dyy_upper: float
    log_slope: float
    # (lower, upper) for D_x^p v / v and D_y^p v / v, p = 1..4
    derivative_bounds: dict = field(default_factory=dict, compare=False)


@dataclass(frozen=True)
class EpsilonSeries:
    """Sums of the contraction sequence eps_k (eps_0 = 1)."""

    sum_eps: float
    sum_eps_sq: float

    def __post_init__(self):
        if not (math.isfinite(self.sum_eps) and math.isfinite(self.sum_eps_sq)):
            raise InputError("epsilon sums must be finite")
        if self.sum_eps < 1.0 or self.sum_eps_sq < 1.0:
            raise InputError("epsilon sums include eps_0 = 1 and cannot be < 1")

    @classmethod
    def geometric(cls, kappa: float) -> "EpsilonSeries":
        """eps_k = kappa**k."""
        if not 0.0 <= kappa < 1.0:
            raise InputError(f"geometric ratio must lie in [0, 1), got {kappa!r}")
        return cls(1.0 / (1.0 - kappa), 1.0 / (1.0 - kappa * kappa))


# -- continued fractions ------------------------------------------------------


def _rising(s: float, p: int) -> float:
    out = 1.0
    for k in range(p):
        out *= 2.0 * s + k
    return out


def cf_derivative_bound(s: float, gamma: float, p: int) -> float:
    """Bound on ``|D^p v_s| / v_s`` for continued-fraction maps with min digit gamma:
    ``(2s)(2s+1)...(2s+p-1) / gamma**p``.  The sign of ``D^p v_s`` is ``(-1)**p``.
    """
    if p not in (1, 2, 3, 4):
        raise InputError(f"derivative order must be 1..4, got {p!r}")
    if s <= 0.0:
        raise InputError("s must be positive")
    if gamma < 1.0:
        raise InputError("gamma must be >= 1")
    return _rising(s, p) / gamma**p


def cf_lipschitz_factor(s: float, gamma: float, dist: float) -> float:
    """exp(2 s dist / gamma), the log-Lipschitz growth of v_s over ``dist``."""
    if dist < 0.0:
        raise InputError("distance must be nonnegative")
    return math.exp(2.0 * s * dist / gamma)


def cf_profile(s: float, gamma: float) -> BoundProfile1D:
    d1 = cf_derivative_bound(s, gamma, 1)
    return BoundProfile1D(
        d1_abs=d1,
        d2_lower=0.0,
        d2_upper=cf_derivative_bound(s, gamma, 2),
        log_slope=d1,
        convexity_certified=True,
    )


# -- perturbed Cantor family ---------------------------------------------------


def perturbed_constants(lam: float) -> tuple[float, float, float, float]:
    """(C1, C2, M0, kappa) for the perturbed middle-thirds maps.

    C1 = sup |b'|/b, C2 = sup |b''|/b, M0 = sup |theta''| where b = theta'
    on [0, 1]; kappa = sup b.
    """
    if not 0.0 <= lam <= 1.0:
        raise InputError(f"lambda must lie in [0, 1], got {lam!r}")
    a = 3.5 * lam
    if lam <= 3.0 / 7.0:
        c1 = 2.5 * a / (1.0 + a)
    else:
        c1 = a * (3.0 / (7.0 * lam)) ** 0.6
    if lam <= 1.0 / 14.0:
        c2 = 3.75 * a / (1.0 + a)
    else:
        c2 = 3.0 * 0.25**0.2 * a**0.8
    m0 = 35.0 * lam / (4.0 * (3.0 + 2.0 * lam))
    kappa = (2.0 + 7.0 * lam) / (6.0 + 4.0 * lam)
    return c1, c2, m0, kappa


def perturbed_epsilon_series(lam: float) -> EpsilonSeries:
    """Closed forms (6+4l)/(4-3l) and (6+4l)^2/((4-3l)(8+11l))."""
    return EpsilonSeries(
        (6.0 + 4.0 * lam) / (4.0 - 3.0 * lam),
        (6.0 + 4.0 * lam) ** 2 / ((4.0 - 3.0 * lam) * (8.0 + 11.0 * lam)),
    )


def general_profile_1d(c1, c2, m0, eps: EpsilonSeries, s: float,
                       convexity_certified: bool = False) -> BoundProfile1D:
    """First- and second-derivative bounds from the generic contraction constants.

    With ``convexity_certified`` the lower second-derivative bound is
    replaced by 0 (sign information from elsewhere).
    """
    se, se2 = eps.sum_eps, eps.sum_eps_sq
    d1 = s * c1 * se
    d2_upper = (s * c1 * se) ** 2 + s * se2 * (c2 + c1 * m0 * se)
    d2_lower = -s * se2 * ((c2 + c1 * c1) + c1 * m0 * se)
    if convexity_certified:
        d2_lower = 0.0
    return BoundProfile1D(
        d1_abs=d1,
        d2_lower=d2_lower + 0.0,
        d2_upper=d2_upper,
        log_slope=d1,
        convexity_certified=convexity_certified,
    )


def convexity_condition_holds(lam: float, s: float, n_grid: int = 10_000,
                              slack: float = 1e-12) -> bool:
    """Grid check of b'' b - (1 - s) b'^2 >= 0 together with b', b'', theta'' >= 0.

    The family satisfies this analytically; the grid check guards against
    misuse outside the proven parameter range.
    """
    x = np.linspace(0.0, 1.0, n_grid)
    th = PerturbedCantor(1, lam)
    b = th.derivative(x)
    db = th.second_derivative(x)
    d2b = th.third_derivative(x)
    cond = d2b * b - (1.0 - s) * db**2
    return bool(np.all(cond >= -slack) and np.all(db >= -slack) and np.all(d2b >= -slack))


LOG2_OVER_LOG5 = math.log(2.0) / math.log(5.0)


BOUND_CONVENTIONS = ("rigorous", "published")


def perturbed_profile(s: float, lam: float, convention: str = "rigorous") -> BoundProfile1D:
    """Bounds for the perturbed Cantor eigenfunction at exponent ``s``.

    ``convention="rigorous"`` takes the general second-derivative bound with
    the squared sum of the epsilon series.  ``"published"`` reproduces the
    historical table computation: the first term uses the unsquared sum and
    the whole bound (not half of it) multiplies the interpolation factor
    ``(xr-u)(u-xl)``; it is stored doubled so that the usual ``d2_upper/2``
    recovers it.  At lambda near 1 the published coefficient is smaller than
    the rigorous one, so only the default certifies.
    """
    if s < LOG2_OVER_LOG5 - 1e-15:
        raise InputError(f"perturbed family bounds need s >= log2/log5, got {s!r}")
    if convention not in BOUND_CONVENTIONS:
        raise ConfigurationError(f"unknown bound convention {convention!r}")
    c1, c2, m0, _ = perturbed_constants(lam)
    eps = perturbed_epsilon_series(lam)
    certified = convexity_condition_holds(lam, s)
    prof = general_profile_1d(c1, c2, m0, eps, s, convexity_certified=certified)
    if convention == "published":
        se, se2 = eps.sum_eps, eps.sum_eps_sq
        printed = s * s * c1 * c1 * se + s * se2 * (c2 + c1 * m0 * se)
        prof = BoundProfile1D(prof.d1_abs, prof.d2_lower, 2.0 * printed, prof.log_slope,
                              prof.convexity_certified)
    return prof


# -- Moebius maps in the plane -------------------------------------------------


def profile_2d(s: float, gamma: float = 1.0) -> BoundProfile2D:
    """Bounds on unmixed partial derivatives of v_s for digits with Re(b) >= gamma."""
    if s <= 0.0:
        raise InputError("s must be positive")
    if gamma < 1.0:
        raise InputError("gamma must be >= 1")
    g = gamma
    dx = {
        1: (-2.0 * s / g, 0.0),
        2: (-s / (4.0 * g**2 * (s + 1.0)), 2.0 * s * (2.0 * s + 1.0) / g**2),
        3: (-2.0 * s * (2.0 * s + 1.0) * (2.0 * s + 2.0) / g**3,
            2.0 * s * (2.0 * s + 2.0) / (g**3 * (s + 2.0) ** 2)),
        4: (-2.0 * s * (2.0 * s + 2.0) * (3.0 * s + 3.0) / g**4, _rising(s, 4) / g**4),
    }
    y3 = 2.0 * s * (2.0 * s + 2.0) / g**3 * max(25.0 * math.sqrt(5.0) / 72.0,
                                                   (2.0 * s + 1.0) / 8.0)
    dy = {
        1: (-s / g, s / g),
        2: (-2.0 * s / g**2, 2.0 * s * (2.0 * s + 1.0) / (4.0 * g**2)),
        3: (-y3, y3),
        4: (-2.0 * s * (2.0 * s + 2.0) * (3.0 * s + 3.0) / g**4, _rising(s, 4) / g**4),
    }
    return BoundProfile2D(
        dxx_lower=dx[2][0],
        dxx_upper=dx[2][1],
        dyy_lower=dy[2][0],
        dyy_upper=dy[2][1],
        log_slope=math.sqrt(5.0) * s / g,
        derivative_bounds={"x": dx, "y": dy},
    )


def tail_constant(kind: str, s: float, R: float) -> float:
    """Upper bound c_{R,s} on the digit tail sum over |b| > R, in units of v_s(0)."""
    if kind == "I1":
        k = math.pi / 2.0
    elif kind == "I2":
        k = math.pi / 4.0
    else:
        raise ConfigurationError(f"tail constant defined for I1/I2 only, got {kind!r}")
    if not s > 1.0:
        raise InputError(f"tail constant requires s > 1, got {s!r}")
    if not R >= 3.0:
        raise ConfigurationError(f"tail constant requires R >= 3, got {R!r}")
    pref = math.exp(2.0 * s / math.sqrt(R * R - R)) * (R / (R - 1.0)) ** s
    bracket = (1.0 / (2.0 * s - 1.0)) * (1.0 / (R - 1.0)) ** (2.0 * s - 1.0) + k * (
        1.0 / (s - 1.0)) * (1.0 / (R - math.sqrt(2.0))) ** (2.0 * s - 2.0)
    return pref * bracket
