from __future__ import annotations

import random

import pytest
from hypothesis import HealthCheck, settings

from tensortorsion.algebra import Poly, Ring
from tensortorsion.corpus import maximal_ideal, random_form

settings.register_profile(
    "default", deadline=None, max_examples=40, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


@pytest.fixture
def R2() -> Ring:
    return Ring(2, 32003, ("x", "y"))


@pytest.fixture
def R3() -> Ring:
    return Ring(3, 32003, ("x", "y", "z"))


@pytest.fixture
def m2():
    return maximal_ideal(2)


def random_poly(rng: random.Random, ring: Ring, max_deg: int = 3, homogeneous: bool = False) -> Poly:
    if homogeneous:
        return random_form(rng, ring, rng.randint(0, max_deg), density_percent=60)
    out = ring.zero()
    for t in range(max_deg + 1):
        if rng.random() < 0.6:
            out = out + random_form(rng, ring, t, density_percent=50)
    return out


def truncation_bound(*regs) -> int:
    vals = [r for r in regs if r is not None]
    return 1 + (max(vals) if vals else 0) + 2
