"""Quadrature on the disk for dA_alpha = (1-|z|^2)^(1-alpha) dA.

The radial factor (1-r^2)^(1-alpha) r dr on (0,1) reduces, through u = r^2,
to the Jacobi weight (1/2)(1-u)^(1-alpha) du on (0,1); nodes and weights come
from the Golub-Welsch eigenproblem for the shifted Jacobi recurrence. Angular
integration is a uniform trapezoid, spectrally exact below the aliasing limit.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .errors import NonConvergence, QuadratureBuildError
from .series import WeightParam


def jacobi_recurrence_u(a, nmax):
    """Monic three-term recurrence of the weight (1-u)^a du on (0,1).

    Returns (alpha_n, beta_n) with beta_0 = total mass 1/(a+1).
    """
    al = np.zeros(nmax)
    be = np.zeros(nmax)
    al[0] = -a / (a + 2.0)
    n = np.arange(1, nmax)
    al[1:] = -a * a / ((2 * n + a) * (2 * n + a + 2.0))
    be[0] = 2.0 ** (a + 1.0) / (a + 1.0)
    if nmax > 1:
        be[1] = 4.0 * (a + 1.0) / ((a + 2.0) ** 2 * (a + 3.0))
    n = np.arange(2, nmax)
    be[2:] = (
        4.0 * n**2 * (n + a) ** 2 / ((2 * n + a) ** 2 * (2 * n + a + 1.0) * (2 * n + a - 1.0))
    )
    # shift [-1,1] -> (0,1): u = (x+1)/2
    alu = (al + 1.0) / 2.0
    beu = be / 4.0
    beu[0] = 1.0 / (a + 1.0)  # mass of (1-u)^a du on (0,1)
    return alu, beu


def gauss_jacobi_01(a, n):
    """Gauss rule for integral_0^1 g(u) (1-u)^a du by Golub-Welsch."""
    if n < 1:
        raise ValueError("rule size must be positive")
    alu, beu = jacobi_recurrence_u(a, n)
    try:
        nodes, vecs = eigh_tridiagonal(alu, np.sqrt(beu[1:n]))
    except Exception as exc:  # pragma: no cover - LAPACK failure path
        raise QuadratureBuildError(n, str(exc)) from exc
    weights = beu[0] * vecs[0, :] ** 2
    return nodes, weights


def gauss_sqrtjacobi_01(exponent, n):
    """Nodes/weights for integral_0^1 g(s) (1-s^2)^exponent s ds, exponent > -1."""
    u, wu = gauss_jacobi_01(exponent, n)
    return np.sqrt(u), 0.5 * wu


@dataclass(frozen=True)
class RadialRule:
    """Gauss rule for the measure (1-r^2)^(1-alpha) r dr on (0,1)."""

    nodes: np.ndarray
    weights: np.ndarray
    alpha: float

    @property
    def count(self):
        return len(self.nodes)

    def plain_weights(self):
        """Weights for plain dr-type sums: w_i / ((1-r_i^2)^(1-alpha) r_i)."""
        mu = (1.0 - self.nodes**2) ** (1.0 - self.alpha) * self.nodes
        return self.weights / mu

    def total_mass(self):
        return float(np.sum(self.weights))

    def to_csv(self, path):
        with open(path, "w") as fh:
            fh.write("r,w\n")
            for r, w in zip(self.nodes, self.weights):
                fh.write(f"{r:.17g},{w:.17g}\n")


def build_radial_rule(alpha, n_r):
    """Gauss-type rule for (1-r^2)^(1-alpha) r dr, built through u = r^2."""
    wp = alpha if isinstance(alpha, WeightParam) else WeightParam(alpha)
    if n_r < 4:
        raise ValueError("n_r must be at least 4")
    r, w = gauss_sqrtjacobi_01(1.0 - wp.alpha, n_r)
    return RadialRule(nodes=r, weights=w, alpha=wp.alpha)


@dataclass(frozen=True)
class DiskRule:
    """Tensor rule: radial Gauss nodes x uniform angles theta_j = 2 pi j / M."""

    radial: RadialRule
    angular_count: int

    @property
    def alpha(self):
        return self.radial.alpha

    def angles(self):
        M = self.angular_count
        return 2.0 * np.pi * np.arange(M) / M

    def grid(self):
        """Complex nodes, shape (n_r, M)."""
        return self.radial.nodes[:, None] * np.exp(1j * self.angles())[None, :]

    def area_weights(self, weighted=True):
        """Weights for dA_alpha (weighted=True) or plain dA sums, shape (n_r, M)."""
        M = self.angular_count
        wr = self.radial.weights if weighted else self.radial.plain_weights() * self.radial.nodes
        return np.broadcast_to((wr * 2.0 * np.pi / M)[:, None], (len(wr), M)).copy()

    def boundary_nodes(self):
        return np.exp(1j * self.angles())


def build_disk_rule(alpha, n_r=64, angular=256):
    if angular < 4:
        raise ValueError("angular count must be at least 4")
    return DiskRule(radial=build_radial_rule(alpha, n_r), angular_count=int(angular))


def integrate_disk(f, rule, weighted=True):
    """Tensor quadrature of f over the disk against dA_alpha or plain dA.

    f may be a callable/evaluable object (called on the complex grid) or an
    array of samples matching the grid shape.
    """
    z = rule.grid()
    vals = f(z) if callable(f) else np.asarray(f)
    if vals.shape != z.shape:
        raise ValueError(f"samples have shape {vals.shape}, grid is {z.shape}")
    return complex(np.sum(vals * rule.area_weights(weighted=weighted)))


def boundary_mean(f, rule):
    """Trapezoid value of the normalized boundary integral of f over d sigma."""
    zb = rule.boundary_nodes()
    vals = f(zb) if callable(f) else np.asarray(f)
    return complex(np.mean(vals))


def refine_until(evaluate, alpha, tol, n_r0=16, angular0=64, max_doublings=8):
    """Double (n_r, M) until successive values of evaluate(rule) agree.

    evaluate: rule -> complex/float. Returns (value, achieved_gap, rules_used).
    Raises NonConvergence with the iterate list if the cap is reached.
    """
    if tol < 1e-13:
        raise ValueError("tolerance below 1e-13 is not resolvable in doubles")
    iterates = []
    n_r, M = n_r0, angular0
    prev = None
    for _ in range(max_doublings + 1):
        rule = build_disk_rule(alpha, n_r=n_r, angular=M)
        val = evaluate(rule)
        iterates.append(val)
        if prev is not None:
            gap = abs(val - prev) / max(abs(val), 1.0)
            if gap <= tol:
                return val, gap, iterates
        prev = val
        n_r *= 2
        M *= 2
    raise NonConvergence(iterates, tol)


# --- shared panel helpers (used by the certification and witness machinery) --

_GL_CACHE = {}


def gauss_legendre(n):
    if n not in _GL_CACHE:
        _GL_CACHE[n] = np.polynomial.legendre.leggauss(n)
    return _GL_CACHE[n]


def graded_edges(levels=26):
    """Panel edges on (0,1), geometric toward both endpoints."""
    left = [2.0 ** (-(levels - j)) for j in range(levels)]
    right = [1.0 - x for x in left[::-1][1:]]
    return np.array([0.0] + left + right)
