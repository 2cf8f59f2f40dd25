"""Seeded test corpora shared by the test suite and the CLI."""
from __future__ import annotations

import numpy as np

from .series import BiDegreeSeries, PowerSeries, VectorSeries
from .solver import WolffInstance

DEFAULT_SEED = 20260808


def multiplier_corpus(seed=DEFAULT_SEED, count=12, max_degree=8):
    """Real polynomials of degree <= 8 with coefficients in [-1, 1]."""
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        deg = int(rng.integers(1, max_degree + 1))
        coeffs = rng.uniform(-1.0, 1.0, deg + 1)
        out.append(PowerSeries(coeffs))
    return out


def bidegree_corpus(seed=DEFAULT_SEED, count=50, max_j=4, max_k=4, terms=6):
    """Random sparse bi-degree polynomials with complex coefficients."""
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        coeffs = {}
        for _ in range(terms):
            j = int(rng.integers(0, max_j + 1))
            k = int(rng.integers(0, max_k + 1))
            coeffs[(j, k)] = complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
        out.append(BiDegreeSeries(coeffs))
    return out


def koszul_vectors(seed=DEFAULT_SEED, count=100, n_max=64):
    """Random complex directions (unit l2 norm keeps the identity checks
    comparable to the absolute entrywise tolerance)."""
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        n = int(rng.integers(2, n_max + 1))
        c = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        out.append(c / np.linalg.norm(c))
    return out


def wolff_corpus(alphas=(1.0, 0.5)):
    """The pinned solver instances: F = (z/2, 1/2), H = z/2, h in {1, z, z^2},
    plus a constant tuple and a three-component instance."""
    out = []
    for alpha in alphas:
        for h in ([1.0], [0.0, 1.0], [0.0, 0.0, 1.0]):
            out.append(
                WolffInstance(
                    F=VectorSeries([[0.0, 0.5], [0.5]]),
                    H=PowerSeries([0.0, 0.5]),
                    h=PowerSeries(h),
                    alpha=alpha,
                )
            )
    out.append(
        WolffInstance(
            F=VectorSeries([[0.6], [0.8]]),
            H=PowerSeries([0.5]),
            h=PowerSeries([0.0, 1.0]),
            alpha=1.0,
        )
    )
    out.append(
        WolffInstance(
            F=VectorSeries([[0.0, 0.5], [0.25, -0.25], [0.5]]),
            H=PowerSeries([0.0, 0.5]),
            h=PowerSeries([0.0, 1.0]),
            alpha=0.5,
        )
    )
    return out
