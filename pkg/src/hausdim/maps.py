"""Contraction-map families: real continued-fraction digits, perturbed
Cantor branches, and complex continued-fraction digits."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from .errors import ConfigurationError, InputError

__all__ = [
    "MoebiusDigit",
    "PerturbedCantor",
    "ContractionMap1D",
    "DigitSetSpec",
    "eval_map_1d",
    "weight_1d",
    "eval_map_2d",
    "enumerate_digits",
]

# Exponent of the smooth perturbation; fixes the C^3-but-not-C^4 family.
PERTURBATION_EXPONENT = 3.5


@dataclass(frozen=True)
class MoebiusDigit:
    """theta_m(x) = 1/(x + m) on [0, 1]."""

    m: int

    def __post_init__(self):
        if int(self.m) != self.m or self.m < 1:
            raise InputError(f"digit must be a positive integer, got {self.m!r}")

    def __call__(self, x):
        return 1.0 / (x + self.m)

    def derivative(self, x):
        return -1.0 / (x + self.m) ** 2

    def weight(self, x, s):
        return (x + self.m) ** (-2.0 * s)

    def image(self, a=0.0, b=1.0):
        """Image of [a, b] as an ordered pair (the map is decreasing)."""
        return (1.0 / (b + self.m), 1.0 / (a + self.m))


@dataclass(frozen=True)
class PerturbedCantor:
    """Branch of the perturbed middle-thirds system.

    ``theta_1(x) = (x + lam x^{7/2}) / (3 + 2 lam)`` and ``theta_2`` is
    ``theta_1`` shifted by ``(2 + lam) / (3 + 2 lam)``; both are increasing
    maps of [0, 1] into itself.
    """

    branch: int
    lam: float

    def __post_init__(self):
        if self.branch not in (1, 2):
            raise InputError(f"branch must be 1 or 2, got {self.branch!r}")
        if not 0.0 <= self.lam <= 1.0:
            raise InputError(f"lambda must lie in [0, 1], got {self.lam!r}")

    @property
    def shift(self) -> float:
        if self.branch == 1:
            return 0.0
        return (2.0 + self.lam) / (3.0 + 2.0 * self.lam)

    def __call__(self, x):
        lam = self.lam
        return (x + lam * x**PERTURBATION_EXPONENT) / (3.0 + 2.0 * lam) + self.shift

    def derivative(self, x):
        lam = self.lam
        return (1.0 + 3.5 * lam * x**2.5) / (3.0 + 2.0 * lam)

    def second_derivative(self, x):
        return 3.5 * 2.5 * self.lam * x**1.5 / (3.0 + 2.0 * self.lam)

    def third_derivative(self, x):
        return 3.5 * 2.5 * 1.5 * self.lam * np.sqrt(x) / (3.0 + 2.0 * self.lam)

    def weight(self, x, s):
        return self.derivative(x) ** s

    def image(self, a=0.0, b=1.0):
        return (self(a), self(b))


ContractionMap1D = Union[MoebiusDigit, PerturbedCantor]


def _check_unit(x):
    arr = np.asarray(x, dtype=float)
    if np.any(~np.isfinite(arr)) or np.any(arr < 0.0) or np.any(arr > 1.0):
        raise InputError("x must lie in [0, 1]")


def eval_map_1d(cmap: ContractionMap1D, x):
    """Evaluate a one-dimensional branch map at ``x`` in [0, 1]."""
    _check_unit(x)
    return cmap(x)


def weight_1d(cmap: ContractionMap1D, x, s: float):
    """Return ``|theta'(x)|**s``."""
    _check_unit(x)
    if s < 0:
        raise InputError(f"s must be nonnegative, got {s!r}")
    return cmap.weight(x, s)


def eval_map_2d(b: complex, z: complex) -> complex:
    """theta_b(z) = 1/(z + b) for Re(b) >= 1 and z in the disk |z - 1/2| <= 1/2."""
    b = complex(b)
    z = complex(z)
    if b.real < 1.0:
        raise InputError(f"Re(b) must be >= 1, got {b!r}")
    if abs(z - 0.5) > 0.5 + 1e-12:
        raise InputError(f"z = {z!r} lies outside the closed disk |z - 1/2| <= 1/2")
    w = z + b
    assert w != 0
    return 1.0 / w


_DIGIT_KINDS = ("explicit", "I1", "I2", "I3")


@dataclass(frozen=True)
class DigitSetSpec:
    """A set of complex digits, possibly infinite and truncated at ``|b| <= radius``."""

    kind: str
    digits: tuple = ()
    radius: float | None = None

    def __post_init__(self):
        if self.kind not in _DIGIT_KINDS:
            raise ConfigurationError(f"unknown digit set {self.kind!r}")
        if self.kind == "explicit":
            if not self.digits:
                raise ConfigurationError("explicit digit set is empty")
            ds = tuple(complex(b) for b in self.digits)
            if any(b.real < 1.0 for b in ds):
                raise ConfigurationError("explicit digits need Re(b) >= 1")
            object.__setattr__(self, "digits", ds)

    @property
    def infinite(self) -> bool:
        return self.kind in ("I1", "I2")

    @property
    def gamma(self) -> float:
        if self.kind == "explicit":
            return min(b.real for b in self.digits)
        return 1.0

    @property
    def symmetric(self) -> bool:
        """True when the set is closed under complex conjugation."""
        if self.kind == "explicit":
            return set(self.digits) == {b.conjugate() for b in self.digits}
        return self.kind in ("I1", "I3")


def enumerate_digits(spec: DigitSetSpec, radius: float | None = None) -> list[complex]:
    """All digits of ``spec`` with ``|b| <= R``, sorted by (Re b, Im b).

    ``radius`` overrides ``spec.radius``; it is ignored for finite sets.
    """
    if spec.kind == "explicit":
        return sorted(set(spec.digits), key=lambda b: (b.real, b.imag))
    if spec.kind == "I3":
        return [complex(m, n) for m in (1, 2) for n in (-2, -1, 0, 1, 2)]
    R = spec.radius if radius is None else radius
    if R is None or not R >= 2.0:
        raise ConfigurationError(f"{spec.kind} needs a truncation radius R >= 2, got {R!r}")
    R2 = R * R
    out = []
    for m in range(1, int(math.floor(R)) + 1):
        nmax = int(math.floor(math.sqrt(max(R2 - m * m, 0.0))))
        while m * m + (nmax + 1) ** 2 <= R2:
            nmax += 1
        while nmax >= 0 and m * m + nmax * nmax > R2:
            nmax -= 1
        nmin = 0 if spec.kind == "I2" else -nmax
        out.extend(complex(m, n) for n in range(nmin, nmax + 1))
    return out


def digits_array(spec: DigitSetSpec, radius: float | None = None) -> np.ndarray:
    return np.asarray(enumerate_digits(spec, radius), dtype=complex)


def moebius_maps(digits: Sequence[int]) -> tuple[MoebiusDigit, ...]:
    return tuple(MoebiusDigit(int(m)) for m in digits)


def perturbed_maps(lam: float) -> tuple[PerturbedCantor, PerturbedCantor]:
    return (PerturbedCantor(1, lam), PerturbedCantor(2, lam))
