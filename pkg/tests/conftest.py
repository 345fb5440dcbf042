"""Shared fixtures and small random-instance generators."""

from __future__ import annotations

from pathlib import Path

import pytest

from polyqubo import PolynomialSystem, from_range

REPO_ROOT = Path(__file__).resolve().parent.parent
FIXTURE_DIR = REPO_ROOT / "fixtures"
GOLDEN_DIR = Path(__file__).resolve().parent / "golden"

# the two-equation second-order system with integer root (2, 3):
#   2 x0^2 + 3 x0 x1 +   x1^2 + 2 x0 + 4 x1 = 51
#     x0^2 + 2 x0 x1 + 2 x1^2 + 3 x0 + 2 x1 = 46
QUAD_P0 = [-51.0, -46.0]
QUAD_P1 = [[2.0, 4.0], [3.0, 2.0]]
QUAD_P2 = [[[2.0, 3.0], [0.0, 1.0]], [[1.0, 2.0], [0.0, 2.0]]]


@pytest.fixture
def quad_system() -> PolynomialSystem:
    return PolynomialSystem([QUAD_P0, QUAD_P1, QUAD_P2])


@pytest.fixture
def quad_encoding():
    # 2 bits per variable over [0, 3]: unit grid containing the root (2, 3)
    return from_range([0.0, 0.0], [3.0, 3.0], 2)


def random_system(rng, num_eq, num_vars, degree, scale=1.0) -> PolynomialSystem:
    coeffs = [
        rng.uniform(-scale, scale, size=(num_eq,) + (num_vars,) * order)
        for order in range(degree + 1)
    ]
    return PolynomialSystem(coeffs)


def random_encoding(rng, num_vars, bits):
    lo = rng.uniform(-2.0, -0.1, size=num_vars)
    hi = rng.uniform(0.1, 2.0, size=num_vars)
    return from_range(lo, hi, bits)
