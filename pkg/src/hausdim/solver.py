"""Certified brackets for the Hausdorff dimension.

The dimension s* is the unique zero of s -> log lambda_s.  Roots of the
estimated log-radii of B_s and A_s are located with Brent's method, then each
is nudged outward until a Collatz-Wielandt certificate proves
r(B_{s_upper}) <= 1 and r(A_{s_lower}) >= 1.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.optimize import brentq

from .collocation import DEFAULT_SAFETY_FACTOR
from .errors import CertificationError, InputError
from .spectral import power_iterate

__all__ = ["DimensionBracket", "Evaluator", "certify", "find_bracket"]

MAX_DOUBLINGS = 40


@dataclass(frozen=True)
class DimensionBracket:
    """Certified enclosure ``s_lower <= s* <= s_upper``.

    ``cert_lower = (s, cw)`` with cw the lower Collatz-Wielandt ratio of
    A_s (>= 1); ``cert_upper = (s, cw)`` with cw the upper ratio of B_s (<= 1).
    """

    s_lower: float
    s_upper: float
    cert_lower: tuple
    cert_upper: tuple
    h: float
    R: Optional[float] = None
    runtime: float = 0.0
    evaluations: int = 0
    history: tuple = field(default=(), compare=False, repr=False)

    def __post_init__(self):
        if not self.s_lower <= self.s_upper:
            raise InputError("s_lower must not exceed s_upper")

    @property
    def width(self) -> float:
        return self.s_upper - self.s_lower

    def contains(self, s: float) -> bool:
        return self.s_lower <= s <= self.s_upper


class Evaluator:
    """Assembles and solves the bracket matrices at given exponents.

    Keeps the last Perron vector of each matrix to warm-start the next
    power iteration; records every (s, lambda_B, lambda_A) evaluated.
    """

    def __init__(self, problem, mesh, tol_eig: float = 1e-13, max_iter: int = 100_000,
                 safety_factor: float = DEFAULT_SAFETY_FACTOR):
        self.problem = problem
        self.mesh = mesh
        self.tol_eig = tol_eig
        self.max_iter = max_iter
        self.safety_factor = safety_factor
        self._seed = {"A": None, "B": None}
        self._cache = {}
        self.history = []

    def spectral(self, s: float, side: str):
        """SpectralResult for ``side`` in {'A', 'B'} at exponent ``s``."""
        key = (float(s), side)
        if key in self._cache:
            return self._cache[key]
        mats = self.problem.assemble(self.mesh, s, self.safety_factor)
        out = {}
        for name, M in (("A", mats.A), ("B", mats.B)):
            res = power_iterate(M, self.tol_eig, self.max_iter, self._seed[name])
            self._seed[name] = res.witness
            out[name] = res
            self._cache[(float(s), name)] = res
        self.history.append((float(s), out["B"].lambda_est, out["A"].lambda_est))
        if len(self._cache) > 64:
            for k in list(self._cache)[:-8]:
                del self._cache[k]
        return out[side]

    def log_radius(self, s: float, side: str) -> float:
        return math.log(self.spectral(s, side).lambda_est)


def certify(s: float, side: str, problem, mesh, profile=None, evaluator: Evaluator | None = None):
    """Check ``cw_upper(B_s) <= 1`` (side 'upper') or ``cw_lower(A_s) >= 1`` ('lower').

    Returns ``(ok, certificate_value)``.  ``profile`` is accepted for
    symmetry with the assembly API; the problem supplies its own bounds.
    """
    ev = evaluator or Evaluator(problem, mesh)
    if side == "upper":
        cw = ev.spectral(s, "B").cw_upper
        return cw <= 1.0, cw
    if side == "lower":
        cw = ev.spectral(s, "A").cw_lower
        return cw >= 1.0, cw
    raise InputError(f"side must be 'lower' or 'upper', got {side!r}")


def _straddle(ev: Evaluator, side: str, a: float, b: float, lo_lim: float, hi_lim: float):
    """Grow [a, b] until log-radius changes sign (positive at a)."""
    fa, fb = ev.log_radius(a, side), ev.log_radius(b, side)
    for _ in range(60):
        if fa >= 0.0 >= fb:
            return a, b, fa, fb
        width = b - a
        if fa < 0.0:
            if a <= lo_lim:
                break
            a, b, fb = max(lo_lim, a - width), a, fa
            fa = ev.log_radius(a, side)
        else:
            if b >= hi_lim:
                break
            a, b, fa = b, min(hi_lim, b + width), fb
            fb = ev.log_radius(b, side)
    raise CertificationError(f"could not bracket the root of log r({side}_s) "
                             f"within [{lo_lim}, {hi_lim}]", estimate=None)


def _root(ev, side, a, b, fa, fb, tol):
    if fa == 0.0:
        return a
    if fb == 0.0:
        return b
    return brentq(lambda s: ev.log_radius(s, side), a, b, xtol=tol, rtol=4 * np.finfo(float).eps,
                  maxiter=200)


def _slope(ev, side, s, ds):
    f1 = ev.log_radius(s, side)
    f2 = ev.log_radius(s + ds, side)
    return (f2 - f1) / ds


def _nudge(ev: Evaluator, s0: float, direction: int, slope: float, lo_lim, hi_lim):
    """Move from ``s0`` in ``direction`` until the endpoint certifies."""
    side = "upper" if direction > 0 else "lower"
    mat = "B" if direction > 0 else "A"
    ok, cw = certify(s0, side, ev.problem, ev.mesh, evaluator=ev)
    if ok:
        return s0, cw
    # first step predicted from the certificate excess, then doubled
    excess = abs(math.log(cw))
    step = max(excess / max(abs(slope), 1e-300), 4.0 * math.ulp(s0))
    last = (s0, cw)
    for _ in range(MAX_DOUBLINGS):
        s = s0 + direction * step
        if not lo_lim <= s <= hi_lim:
            break
        ok, cw = certify(s, side, ev.problem, ev.mesh, evaluator=ev)
        last = (s, cw)
        if ok:
            return s, cw
        step *= 2.0
    raise CertificationError(
        f"mesh too coarse for requested tolerance: {mat}_s not certified "
        f"(last s={last[0]!r}, ratio={last[1]!r})", estimate=s0)


def find_bracket(problem, h: float, tol_s: float = 1e-12, s_init=None, mesh=None,
                 tol_eig: float = 1e-13, safety_factor: float = DEFAULT_SAFETY_FACTOR,
                 evaluator: Evaluator | None = None) -> DimensionBracket:
    """Certified bracket for the dimension of ``problem`` on a mesh of size ``h``.

    Parameters
    ----------
    problem : IfsProblem or ComplexProblem
    h : float
        Mesh size.
    tol_s : float
        Root-finding tolerance in s.
    s_init : (float, float), optional
        Initial search interval; expanded geometrically if it does not
        straddle the root.
    """
    if not tol_s > 0.0:
        raise InputError("tol_s must be positive")
    t0 = time.perf_counter()
    if mesh is None:
        mesh = problem.build_mesh(h)
    ev = evaluator or Evaluator(problem, mesh, tol_eig=tol_eig, safety_factor=safety_factor)
    a, b = s_init if s_init is not None else problem.s_init
    lo_lim, hi_lim = problem.s_min, problem.s_max
    a, b = max(a, lo_lim), min(b, hi_lim)
    # B first: it has the larger radius, so its root is the upper estimate
    aB, bB, faB, fbB = _straddle(ev, "B", a, b, lo_lim, hi_lim)
    s_b = _root(ev, "B", aB, bB, faB, fbB, tol_s * 1e-2)
    aA, bA = aB, max(s_b, aB + tol_s)
    aA, bA, faA, fbA = _straddle(ev, "A", aA, bA, lo_lim, hi_lim)
    s_a = _root(ev, "A", aA, bA, faA, fbA, tol_s * 1e-2)
    ds = max(1e-7, 1e3 * tol_s)
    slope_b = _slope(ev, "B", s_b, -ds)
    slope_a = _slope(ev, "A", s_a, ds)
    s_up, cw_up = _nudge(ev, s_b, +1, slope_b, lo_lim, hi_lim)
    s_lo, cw_lo = _nudge(ev, s_a, -1, slope_a, lo_lim, hi_lim)
    if s_lo > s_up:
        # both certified: the interval between them is empty only through rounding
        s_lo = s_up
    return DimensionBracket(
        s_lower=s_lo, s_upper=s_up, cert_lower=(s_lo, cw_lo), cert_upper=(s_up, cw_up),
        h=float(h), R=getattr(problem, "R", None), runtime=time.perf_counter() - t0,
        evaluations=len(ev.history), history=tuple(ev.history))
