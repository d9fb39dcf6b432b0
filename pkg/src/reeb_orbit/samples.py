"""Small catalogue of sampled test functions with exact rational values."""
from __future__ import annotations

import math
from fractions import Fraction

from .torus_pl import CircleFunction, build_function, build_grid_torus

__all__ = ["rational", "torus_height", "two_peak", "bump_function", "doubled_bump",
           "fibration_like", "perturbation_rows"]

DENOMINATOR = 10**6


def rational(x: float, den: int = DENOMINATOR) -> Fraction:
    return Fraction(round(x * den), den)


def _bump(t: float, concentration: float) -> float:
    # von Mises profile: periodic, peak 1 at t = 0
    return math.exp(concentration * (math.cos(2 * math.pi * t) - 1.0))


def perturbation_rows(N: int, M: int, fn) -> list[list[Fraction]]:
    return [[rational(fn(i / N, j / M)) for i in range(N)] for j in range(M)]


def torus_height(N: int = 8, M: int = 8, scale: float = 0.125) -> CircleFunction:
    """Null-homotopic ``scale*(cos 2pi x + 2 cos 2pi y)``: one max, one min, two saddles."""
    rows = perturbation_rows(
        N, M, lambda x, y: scale * (math.cos(2 * math.pi * x) + 2 * math.cos(2 * math.pi * y)))
    return build_function(build_grid_torus(N, M), (0, 0), rows)


def bump_function(N: int = 16, M: int = 8, cls=(1, 0), centers=(0.0,),
                  amplitude: float = 0.25, concentration: float = 8.0,
                  floor: float = 0.05) -> CircleFunction:
    """Linear part ``a*x + b*y`` plus bump pairs ``A*bump(x - x_c)*cos(2 pi y)``.

    Each bump pair contributes one maximum, one minimum and two saddles when
    the amplitude beats the slope.  ``floor`` keeps the profile away from zero
    so that no vertical edge is flat after rounding.
    """
    def profile(x):
        return floor + sum(_bump(x - xc, concentration) for xc in centers)

    rows = perturbation_rows(
        N, M, lambda x, y: amplitude * profile(x) * math.cos(2 * math.pi * y))
    return build_function(build_grid_torus(N, M), cls, rows)


def fibration_like(N: int = 6, M: int = 5, cls=(1, 0)) -> CircleFunction:
    """Class-``(a, 0)`` function with a tiny row tilt: no critical vertex at all."""
    eps = Fraction(1, 4 * N * M * max(1, abs(cls[0])))
    rows = [[eps * j for _ in range(N)] for j in range(M)]
    return build_function(build_grid_torus(N, M), cls, rows)


def two_peak(N: int = 8, M: int = 8) -> CircleFunction:
    """The classical torus height function in null-homotopic form (alias of :func:`torus_height`)."""
    return torus_height(N, M)


def doubled_bump(cls=(1, 0), N: int = 16, M: int = 8, amplitude: float = 0.3) -> CircleFunction:
    """Two identical bump pairs at x-offsets 0 and 1/2."""
    return bump_function(N, M, cls, centers=(0.0, 0.5), amplitude=amplitude)
