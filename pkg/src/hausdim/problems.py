"""Ready-made problem descriptions tying maps, meshes, bounds and assembly together."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

from .bounds import LOG2_OVER_LOG5, cf_profile, perturbed_profile, profile_2d
from .collocation import DEFAULT_SAFETY_FACTOR, BracketMatrices, assemble_1d, assemble_2d
from .errors import ConfigurationError, InputError
from .maps import DigitSetSpec, moebius_maps, perturbed_maps
from .mesh import build_mesh_1d, build_mesh_2d, refine_domain_1d

__all__ = [
    "IfsProblem",
    "ComplexProblem",
    "continued_fraction_problem",
    "perturbed_cantor_problem",
    "complex_problem",
]


@dataclass(frozen=True)
class IfsProblem:
    """A one-dimensional system of contractions.

    ``profile(s)`` returns the eigenfunction bounds at exponent ``s``;
    ``s_min`` is the smallest exponent for which they are valid.
    """

    name: str
    maps: tuple
    profile: Callable
    depth: int = 2
    s_init: tuple = (0.01, 1.0)
    s_min: float = 0.0
    s_max: float = 1.0

    @property
    def dimension(self) -> int:
        return 1

    def domain(self):
        return refine_domain_1d(self.maps, self.depth)

    def build_mesh(self, h: float):
        return build_mesh_1d(self.domain(), h)

    def assemble(self, mesh, s: float,
                 safety_factor: float = DEFAULT_SAFETY_FACTOR) -> BracketMatrices:
        return assemble_1d(self, mesh, s, self.profile(s), safety_factor)

    def profile_log_slope(self, s: float) -> float:
        return self.profile(s).log_slope


@dataclass(frozen=True)
class ComplexProblem:
    """Complex continued fractions with digits from ``digit_set``."""

    name: str
    digit_set: DigitSetSpec
    R: Optional[float] = None
    margin_rings: int = 1
    s_init: tuple = (1.0, 2.0)
    full_disk: Optional[bool] = None
    fold_asymmetric: bool = False
    s_min: float = field(default=0.0)
    s_max: float = 2.0

    @property
    def dimension(self) -> int:
        return 2

    @property
    def uses_full_disk(self) -> bool:
        if self.fold_asymmetric:
            return False
        if self.full_disk is None:
            return not self.digit_set.symmetric
        return self.full_disk

    def build_mesh(self, h: float):
        return build_mesh_2d(h, self.margin_rings, full_disk=self.uses_full_disk)

    def profile(self, s: float):
        return profile_2d(s, self.digit_set.gamma)

    def assemble(self, mesh, s: float,
                 safety_factor: float = DEFAULT_SAFETY_FACTOR) -> BracketMatrices:
        return assemble_2d(self, mesh, s, self.profile(s), self.R, safety_factor)

    def profile_log_slope(self, s: float) -> float:
        return self.profile(s).log_slope


def continued_fraction_problem(digits, depth: int = 2) -> IfsProblem:
    """Real continued fractions with partial quotients in ``digits``."""
    digits = [int(d) for d in digits]
    if not digits:
        raise InputError("digit list is empty")
    if len(set(digits)) != len(digits):
        raise InputError("digits must be distinct")
    digits = sorted(digits)
    maps = moebius_maps(digits)  # validates positivity
    gamma = float(digits[0])
    name = "E[" + ",".join(str(d) for d in digits) + "]"
    return IfsProblem(name, maps, lambda s: cf_profile(s, gamma), depth=depth,
                      s_init=(0.01, 1.0), s_min=1e-6, s_max=1.0)


def perturbed_cantor_problem(lam: float, depth: int = 0,
                             convention: str = "rigorous") -> IfsProblem:
    """Perturbed middle-thirds maps with parameter ``lam`` in [0, 1].

    ``convention`` selects the second-derivative bound, see
    :func:`hausdim.bounds.perturbed_profile`.
    """
    maps = perturbed_maps(lam)
    lam = float(lam)
    perturbed_profile(0.7, lam, convention)  # fail fast on a bad convention
    return IfsProblem(f"cantor(lambda={lam:g})", maps,
                      lambda s: perturbed_profile(s, lam, convention),
                      depth=depth, s_init=(LOG2_OVER_LOG5, 1.0), s_min=LOG2_OVER_LOG5,
                      s_max=1.0)


_S_HINTS = {"I1": (1.80, 1.90), "I2": (1.55, 1.70), "I3": (1.45, 1.65)}


def complex_problem(kind: str, R: float | None = None, margin_rings: int = 1,
                    full_disk: bool | None = None, digits=(),
                    fold_asymmetric: bool = False) -> ComplexProblem:
    """One of the digit sets I1, I2, I3, or an explicit finite set.

    Sets that are not closed under conjugation are solved on the full disk.
    ``fold_asymmetric=True`` folds them onto the half disk anyway; this
    reproduces the published I2 numbers but is not a valid enclosure.
    """
    spec = DigitSetSpec(kind, tuple(complex(d) for d in digits))
    if spec.infinite:
        if R is None:
            raise ConfigurationError(f"{kind} is infinite and needs a truncation radius R")
        s_min = 1.0 + 1e-9
    else:
        s_min = 1e-6
    hint = _S_HINTS.get(kind, (1.0, 1.99))
    return ComplexProblem(kind, spec, None if R is None else float(R), margin_rings, hint,
                          full_disk, fold_asymmetric, s_min=s_min, s_max=2.0)
