"""Cauchy and Beurling transforms, harmonic extension and the operator T.

Everything is computed mode-wise; no two-dimensional singular quadrature is
ever performed. For a bi-degree polynomial input the Cauchy transform is an
exact coefficient map:

    z^j zbar^k             -> z^j zbar^(k+1) / (k+1)          (j <= k)
    z^j zbar^k             -> (z^j zbar^(k+1) - z^(j-k-1)) / (k+1)   (j > k)

obtained from the geometric expansion of 1/(w-z) split at |z|; dbar of the
image returns the input exactly, and the analytic correction in the j > k
case is what the integral kernel -1/pi (w-z)^{-1} against planar dA selects.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .rotation.modes import ModeBank, angular_decompose
from .rotation.operators import bl_profile, tl_values
from .series import BiDegreeSeries, PowerSeries


@dataclass
class TransformResult:
    """Grid values plus, when available, exact series/mode representations."""

    values: np.ndarray | None = None
    series: BiDegreeSeries | None = None
    modes: ModeBank | None = None
    dbar_residual: float | None = None
    meta: dict = field(default_factory=dict)


def cauchy_series(k):
    """Exact Cauchy transform of a bi-degree polynomial, as a BiDegreeSeries."""
    if isinstance(k, PowerSeries):
        k = k.to_bidegree()
    out = {}

    def add(key, c):
        out[key] = out.get(key, 0.0) + c

    for (j, kk), c in k.coeffs.items():
        add((j, kk + 1), c / (kk + 1.0))
        if j > kk:
            add((j - kk - 1, 0), -c / (kk + 1.0))
    return BiDegreeSeries(out)


def cauchy_transform(k, eval_points=None, rule=None, residual_h=None):
    """Cauchy transform of a bi-degree polynomial; solves dbar u = k exactly.

    Returns the exact series, values at the requested interior points, a mode
    bank when a radial rule is supplied, and the finite-difference dbar
    residual when residual_h is given.
    """
    khat = cauchy_series(k)
    values = None
    if eval_points is not None:
        z = np.asarray(eval_points, dtype=complex)
        if np.any(np.abs(z) >= 1.0):
            raise ValueError("Cauchy transform evaluation requires |z| < 1")
        values = khat(z)
    modes = angular_decompose(khat, rule.radial if hasattr(rule, "radial") else rule) if rule is not None else None
    out = TransformResult(values=values, series=khat, modes=modes)
    if residual_h is not None:
        out.dbar_residual = dbar_residual(k, khat, h=residual_h)
    return out


_TEST_RADII = (0.15, 0.35, 0.55, 0.75)
_TEST_ANGLES = 8


def dbar_test_points():
    angles = 2.0 * np.pi * np.arange(_TEST_ANGLES) / _TEST_ANGLES + 0.1
    return np.concatenate([r * np.exp(1j * angles) for r in _TEST_RADII])


def dbar_residual(k, khat, h=1e-3, points=None):
    """max |dbar_h khat - k| over interior test points; dbar_h is the centered
    finite-difference conjugate derivative (second order in h)."""
    if isinstance(khat, TransformResult):
        khat = khat.series
    if isinstance(k, PowerSeries):
        k = k.to_bidegree()
    z = dbar_test_points() if points is None else np.asarray(points, dtype=complex)
    if np.any(np.abs(z) + h >= 1.0):
        raise ValueError("stencil leaves the disk; shrink h or the test set")
    dbar = (
        khat(z + h) - khat(z - h) + 1j * (khat(z + 1j * h) - khat(z - 1j * h))
    ) / (4.0 * h)
    return float(np.max(np.abs(dbar - k(z))))


def beurling_transform(phi, rule, convention="standard"):
    """B(phi) = d/dz of the Cauchy transform, assembled mode-by-mode.

    Input mode l contributes output mode l - 2 with profile B_l f_l. The
    default "standard" convention has B_1 = -Id on analytic modes;
    "derivative" matches d/dz of cauchy_transform on every mode.
    """
    if isinstance(phi, PowerSeries):
        phi = phi.to_bidegree()
    radial = rule.radial if hasattr(rule, "radial") else rule
    bank_in = angular_decompose(phi, radial)
    out = ModeBank(alpha=radial.alpha, rule=radial)
    for l, prof in bank_in.profiles.items():
        image, log_coef = bl_profile(l, prof, convention=convention)
        if log_coef != 0.0:
            raise ValueError(
                "mode profiles from an angular decomposition cannot produce "
                "logarithmic Beurling terms"
            )
        if not image.is_zero():
            # distinct input modes land on distinct output modes l - 2
            out.profiles[l - 2] = image
    return TransformResult(modes=out, meta={"convention": convention})


def poisson_extension(boundary, eval_points=None):
    """Harmonic extension of boundary data sum a_n e^{int}: sum a_n r^|n| e^{in t}.

    boundary: mapping n -> a_n (negative n allowed) or a PowerSeries read as
    its boundary trace. Exact: modes extend as z^n (n >= 0) or zbar^|n|.
    """
    if isinstance(boundary, PowerSeries):
        boundary = {n: c for n, c in enumerate(boundary.coeffs)}
    coeffs = {}
    for n, c in boundary.items():
        n = int(n)
        key = (n, 0) if n >= 0 else (0, -n)
        coeffs[key] = coeffs.get(key, 0.0) + complex(c)
    ext = BiDegreeSeries(coeffs)
    values = None
    if eval_points is not None:
        values = ext(np.asarray(eval_points, dtype=complex))
    return TransformResult(values=values, series=ext)


def operator_T(f, rule, positive_reading="fl"):
    """(Tf)(s e^{it}) = 2 pi sum_l e^{i(l-1)t} (T_l f_l)(s) on the rule grid.

    positive_reading selects which profile feeds the l > 0 kernel:
    "fl" (default) uses the mode's own profile, "f0" feeds the zeroth
    profile through every positive-mode kernel.
    """
    if positive_reading not in ("fl", "f0"):
        raise ValueError("positive_reading must be 'fl' or 'f0'")
    if isinstance(f, PowerSeries):
        f = f.to_bidegree()
    radial = rule.radial if hasattr(rule, "radial") else rule
    bank_in = angular_decompose(f, radial)
    nodes = radial.nodes
    out = ModeBank(alpha=radial.alpha, rule=radial)
    for l, prof in bank_in.profiles.items():
        src = prof
        if l > 0 and positive_reading == "f0":
            src = bank_in.profiles.get(0)
            if src is None:
                continue
        vals = 2.0 * np.pi * tl_values(l, src, nodes)
        out._samples[l - 1] = vals  # distinct l -> distinct output mode
    if hasattr(rule, "angular_count"):
        theta = rule.angles()
        grid_vals = np.zeros((radial.count, theta.size), dtype=complex)
        for m, vals in out._samples.items():
            grid_vals += vals[:, None] * np.exp(1j * m * theta)[None, :]
    else:
        grid_vals = None
    return TransformResult(values=grid_vals, modes=out, meta={"positive_reading": positive_reading})
