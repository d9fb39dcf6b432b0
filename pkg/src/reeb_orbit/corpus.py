"""Seeded random circle functions for property tests and the self-test."""
from __future__ import annotations

import random
from fractions import Fraction
from typing import Iterator, Sequence

from .torus_pl import CircleFunction, FlatEdge, build_function, build_grid_torus

__all__ = ["CLASSES", "DEFAULT_SEED", "random_function", "random_corpus"]

CLASSES = ((0, 0), (1, 0), (2, 1))
DEFAULT_SEED = 20240611


def random_function(rng: random.Random, sizes=(4, 16), classes: Sequence = CLASSES,
                    den: int = 10**6) -> CircleFunction:
    """Rational function on a random grid; perturbation amplitude 1, 1/10 or 1/100.

    Draws again until no edge is flat.
    """
    while True:
        N, M = rng.randint(*sizes), rng.randint(*sizes)
        cls = rng.choice(list(classes))
        amp = rng.choice([1, 10, 100])
        rows = [[Fraction(rng.randint(-den, den), den * amp) for _ in range(N)]
                for _ in range(M)]
        try:
            return build_function(build_grid_torus(N, M), cls, rows)
        except FlatEdge:
            continue


def random_corpus(seed: int, count: int, **kw) -> Iterator[CircleFunction]:
    rng = random.Random(seed)
    for _ in range(count):
        yield random_function(rng, **kw)
