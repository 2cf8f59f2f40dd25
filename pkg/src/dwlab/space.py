"""Norms, kernels and multiplier surrogates for the weighted Dirichlet space.

The canonical norm is the coefficient form (sum (n+1)^alpha |a_n|^2)^(1/2);
the integral and boundary-difference forms are equivalent, not equal, and are
provided for cross-checks. Multiplier norms are approximated from below by
compressions onto span{z^0..z^N} in the orthonormal basis e_n = z^n/(n+1)^{alpha/2}.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .quadrature import gauss_legendre, integrate_disk
from .series import PowerSeries, WeightParam

DEFAULT_SLACK = 0.05


def _alpha(alpha):
    return alpha.alpha if isinstance(alpha, WeightParam) else WeightParam(alpha).alpha


def series_norm(f, alpha):
    """Coefficient norm (sum (n+1)^alpha |a_n|^2)^(1/2)."""
    a = _alpha(alpha)
    terms = [(n + 1.0) ** a * abs(c) ** 2 for n, c in enumerate(f.coeffs)]
    return math.sqrt(math.fsum(terms))


def integral_norm(f, alpha, rule):
    """Quadrature value of (int |f|^2 dsigma + int_D |f'|^2 dA_alpha)^(1/2)."""
    a = _alpha(alpha)
    if abs(rule.alpha - a) > 1e-15:
        raise ValueError("rule was built for a different alpha")
    boundary = np.mean(np.abs(f(rule.boundary_nodes())) ** 2)
    fp = f.derivative()
    area = integrate_disk(lambda z: np.abs(fp(z)) ** 2, rule, weighted=True).real
    return math.sqrt(boundary.real + area)


def besov_mode_constant(n, alpha, n_quad=256, check_tol=1e-9):
    """c_alpha(n) = (1/2pi) int |e^{ins}-1|^2 / |e^{is}-1|^{1+alpha} ds.

    The integrand behaves like n^2 s^(1-alpha) at 0, so the half-period is
    integrated on panels graded geometrically toward 0 (spectral per panel).
    The value is accepted only if doubling the per-panel order moves it by
    less than check_tol.
    """
    a = _alpha(alpha)
    n = abs(int(n))
    if n == 0:
        return 0.0

    def value(npts):
        p = max(12, int(np.ceil(npts / 32)))
        x, w = gauss_legendre(p)
        graded = np.pi * 2.0 ** (-np.arange(41, -1, -1.0))
        graded[0] = 0.0
        # split any panel holding more than ~one oscillation of sin(n s / 2)
        edges = [0.0]
        for lo, hi in zip(graded[:-1], graded[1:]):
            parts = max(1, int(np.ceil((hi - lo) * n / 6.0)))
            edges.extend(lo + (hi - lo) * np.arange(1, parts + 1) / parts)
        edges = np.asarray(edges)
        total = 0.0
        for lo, hi in zip(edges[:-1], edges[1:]):
            mid, half = 0.5 * (lo + hi), 0.5 * (hi - lo)
            s = mid + half * x
            integrand = (4.0 * np.sin(0.5 * n * s) ** 2) / (2.0 * np.sin(0.5 * s)) ** (1.0 + a)
            total += float(np.sum(w * integrand)) * half
        return total / np.pi

    v1, v2 = value(n_quad), value(2 * n_quad)
    if abs(v2 - v1) > check_tol * max(1.0, abs(v2)):
        raise ValueError(
            f"mode-constant quadrature failed self-consistency at alpha={a}: "
            f"{v1!r} vs {v2!r}"
        )
    return v2


def besov_boundary_norm(trig_coeffs, alpha, M=None):
    """Boundary norm of sum a_n e^{int}: (sum|a_n|^2 + sum |a_n|^2 c_alpha(n))^(1/2).

    trig_coeffs: mapping n -> a_n (n may be negative); a PowerSeries is accepted
    and read as its boundary trace. M controls the 1-D quadrature resolution.
    """
    a = _alpha(alpha)
    if isinstance(trig_coeffs, PowerSeries):
        trig_coeffs = {n: c for n, c in enumerate(trig_coeffs.coeffs)}
    items = [(int(n), complex(c)) for n, c in trig_coeffs.items() if c != 0]
    if not items:
        return 0.0
    nmax = max(abs(n) for n, _ in items)
    n_quad = max(256, 8 * nmax) if M is None else max(int(M), 8 * nmax)
    total = math.fsum(abs(c) ** 2 for _, c in items)
    double = math.fsum(
        abs(c) ** 2 * besov_mode_constant(n, a, n_quad=n_quad) for n, c in items
    )
    return math.sqrt(total + double)


@dataclass(frozen=True)
class RKValue:
    value: complex
    tail_bound: float


def rk_eval(w, z, alpha, N=200):
    """Partial sum of the reproducing kernel K_w(z) with a geometric tail bound."""
    a = _alpha(alpha)
    if abs(z) >= 1 or abs(w) >= 1:
        raise ValueError("kernel evaluation requires |z| < 1 and |w| < 1")
    x = z * np.conj(w)
    n = np.arange(N + 1)
    value = complex(np.sum(x**n / (n + 1.0) ** a))
    q = abs(x)
    tail = q ** (N + 1) / (1.0 - q) if q > 0 else 0.0
    return RKValue(value=value, tail_bound=float(tail))


def pick_coeffs(alpha, N=200):
    """Coefficients c_1..c_N of 1 - 1/k(x) for k(x) = sum (n+1)^(-alpha) x^n.

    Triangular reciprocal recurrence; the complete-Pick property says every
    c_n is positive.
    """
    a = _alpha(alpha)
    b = (np.arange(N + 1) + 1.0) ** (-a)
    q = np.zeros(N + 1)
    q[0] = 1.0
    for n in range(1, N + 1):
        q[n] = -math.fsum(b[j] * q[n - j] for j in range(1, n + 1))
    return -q[1:]


@dataclass(frozen=True)
class MultiplierCompression:
    """Largest singular value of multiplication-by-phi compressed to span{z^0..z^N}."""

    phi: PowerSeries
    alpha: float
    N: int
    sigma_max: float


def compression_matrix(phi, alpha, N):
    """Matrix of M_phi on the orthonormal basis e_n = z^n/(n+1)^{alpha/2}, n <= N."""
    a = _alpha(alpha)
    c = phi.coeffs
    A = np.zeros((N + 1, N + 1), dtype=complex)
    for n in range(N + 1):
        top = min(N, n + len(c) - 1)
        i = np.arange(n, top + 1)
        A[i, n] = c[i - n] * ((i + 1.0) / (n + 1.0)) ** (a / 2.0)
    return A


def multiplier_compression_norm(phi, alpha, N=64):
    a = _alpha(alpha)
    A = compression_matrix(phi, a, N)
    sigma = float(np.linalg.svd(A, compute_uv=False)[0])
    return MultiplierCompression(phi=phi, alpha=a, N=N, sigma_max=sigma)


def column_compression_norm(F, alpha, N=64):
    """Compression norm of the column operator h -> (f_1 h, .., f_n h)."""
    a = _alpha(alpha)
    blocks = [compression_matrix(f, a, N) for f in F]
    stacked = np.vstack(blocks)
    return float(np.linalg.svd(stacked, compute_uv=False)[0])


def block_compression_norm(entries, alpha, N=64):
    """Compression norm of a matrix multiplier given as a grid of PowerSeries.

    entries: sequence of rows, each a sequence of PowerSeries (or None for 0).
    """
    a = _alpha(alpha)
    nrows = len(entries)
    ncols = len(entries[0])
    dim = N + 1
    big = np.zeros((nrows * dim, ncols * dim), dtype=complex)
    for i, row in enumerate(entries):
        for j, e in enumerate(row):
            if e is None or (isinstance(e, PowerSeries) and e.is_zero()):
                continue
            big[i * dim : (i + 1) * dim, j * dim : (j + 1) * dim] = compression_matrix(e, a, N)
    return float(np.linalg.svd(big, compute_uv=False)[0])


def schwarz_pick_check(phi, alpha, N=64, rule=None, slack=DEFAULT_SLACK):
    """Check max_grid (1-|z|^2)|phi'(z)| <= sigma_max(phi) (1+slack).

    sigma_max is a lower bound of the true multiplier norm, hence the slack.
    """
    a = _alpha(alpha)
    if rule is None:
        from .quadrature import build_disk_rule

        rule = build_disk_rule(a)
    z = rule.grid()
    lhs = float(np.max((1.0 - np.abs(z) ** 2) * np.abs(phi.derivative()(z))))
    comp = multiplier_compression_norm(phi, a, N)
    return {
        "check": "schwarz_pick",
        "alpha": a,
        "lhs_max": lhs,
        "sigma_max": comp.sigma_max,
        "slack": slack,
        "passed": bool(lhs <= comp.sigma_max * (1.0 + slack)),
    }


def carleson_check(H, g, alpha, rule=None, N=64, slack=DEFAULT_SLACK):
    """Check int |H'|^2 |g|^2 dA_alpha <= 4 sigma_max(H)^2 ||g||^2 (1+slack)."""
    a = _alpha(alpha)
    if rule is None:
        from .quadrature import build_disk_rule

        rule = build_disk_rule(a)
    Hp = H.derivative()
    lhs = integrate_disk(lambda z: np.abs(Hp(z)) ** 2 * np.abs(g(z)) ** 2, rule).real
    comp = multiplier_compression_norm(H, a, N)
    rhs = 4.0 * comp.sigma_max**2 * series_norm(g, a) ** 2
    return {
        "check": "carleson",
        "alpha": a,
        "lhs": float(lhs),
        "rhs": float(rhs),
        "sigma_max": comp.sigma_max,
        "slack": slack,
        "passed": bool(lhs <= rhs * (1.0 + slack)),
    }


def gap_series(m, alpha, N=200):
    """Partial sums for the lacunary series sum z^(n^(4m+1)) / n^(2 m alpha).

    Returns the H-infinity bound of the truncation (convergent in N) and the
    coefficient-norm of the truncation (divergent in N), demonstrating that a
    bounded analytic function need not lie in the space. m = 0 selects the
    canonical choice floor(1/alpha) + 1.
    """
    a = _alpha(alpha)
    m = int(m)
    if m == 0:
        m = int(math.floor(1.0 / a)) + 1
    if m < 1:
        raise ValueError("m must be positive (or the 0 sentinel)")
    n = np.arange(1, N + 1, dtype=float)
    sup_bound = float(math.fsum(n ** (-2.0 * m * a)))
    norm_sq = math.fsum((n ** (4 * m + 1) + 1.0) ** a / n ** (4.0 * m * a))
    return {
        "check": "gap_series",
        "alpha": a,
        "m": m,
        "N": N,
        "sup_bound": sup_bound,
        "series_norm": math.sqrt(norm_sq),
    }
