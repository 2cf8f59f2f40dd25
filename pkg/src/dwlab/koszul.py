"""The pair-column matrix Q with QQ* = (CC*)I - C*C and range Q = ker C.

Columns are indexed by ordered pairs (i, j), i < j, in lexicographic order;
column (i, j) holds c_j at row i and -c_i at row j. The cancellation
C Q = 0 is exact in floating point: each column contributes
c_i c_j - c_j c_i, two identical products.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .quadrature import integrate_disk
from .series import VectorSeries
from .space import DEFAULT_SLACK, besov_boundary_norm, multiplier_compression_norm
from .transforms import poisson_extension


def pair_indices(n):
    return [(i, j) for i in range(n) for j in range(i + 1, n)]


@dataclass(frozen=True)
class PairColumnMatrix:
    """Q built from a vector c; entries are 0 or +-c_k."""

    c: np.ndarray

    @property
    def n(self):
        return len(self.c)

    @property
    def pairs(self):
        return pair_indices(self.n)

    @property
    def shape(self):
        n = self.n
        return (n, n * (n - 1) // 2)

    def dense(self):
        n = self.n
        Q = np.zeros(self.shape, dtype=complex)
        for col, (i, j) in enumerate(self.pairs):
            Q[i, col] = self.c[j]
            Q[j, col] = -self.c[i]
        return Q

    def triplets(self):
        out = []
        for col, (i, j) in enumerate(self.pairs):
            out.append((i, col, complex(self.c[j])))
            out.append((j, col, complex(-self.c[i])))
        return out

    def to_json(self):
        """Sparse triplet form: rows of [row, col_pair, re, im]."""
        return {
            "n": self.n,
            "pairs": [list(p) for p in self.pairs],
            "triplets": [
                [r, c, v.real, v.imag] for r, c, v in self.triplets()
            ],
        }

    def qq_star(self):
        Q = self.dense()
        return Q @ Q.conj().T

    def identity_residual(self):
        """max entry of QQ* - ((CC*) I - C* C); zero in exact arithmetic."""
        c = self.c
        target = float(np.sum(np.abs(c) ** 2)) * np.eye(self.n) - np.outer(np.conj(c), c)
        return float(np.max(np.abs(self.qq_star() - target)))

    def cq_residual(self):
        return float(np.max(np.abs(self.c @ self.dense()))) if self.n > 1 else 0.0

    def rank(self, rel_threshold=1e-10):
        s = np.linalg.svd(self.dense(), compute_uv=False)
        if s.size == 0 or s[0] == 0.0:
            return 0
        return int(np.sum(s > rel_threshold * s[0]))


def build_Q(c):
    return PairColumnMatrix(c=np.asarray(c, dtype=complex))


def q_field(F, z):
    """Q(F(z)) at a point z inside the disk."""
    if abs(z) >= 1:
        raise ValueError("q_field requires |z| < 1")
    return build_Q(F.value(z))


def q_derivative(F, z):
    """Entrywise analytic derivative Q'(z): same pattern with f_k -> f_k'."""
    if abs(z) >= 1:
        raise ValueError("q_derivative requires |z| < 1")
    return build_Q(F.derivative().value(z)).dense()


def q_apply(cvals, kvals):
    """Pointwise Q(c) k for grids: cvals (..., n), kvals (..., P) -> (..., n).

    Row i of column (i, j) carries c_j, row j carries -c_i.
    """
    cvals = np.asarray(cvals)
    kvals = np.asarray(kvals)
    n = cvals.shape[-1]
    out = np.zeros(cvals.shape, dtype=complex)
    for col, (i, j) in enumerate(pair_indices(n)):
        out[..., i] += cvals[..., j] * kvals[..., col]
        out[..., j] -= cvals[..., i] * kvals[..., col]
    return out


def q_star_apply(cvals, vvals):
    """Pointwise Q(c)* v: (..., n) x (..., n) -> (..., P)."""
    cvals = np.asarray(cvals)
    vvals = np.asarray(vvals)
    n = cvals.shape[-1]
    pairs = pair_indices(n)
    out = np.zeros(cvals.shape[:-1] + (len(pairs),), dtype=complex)
    for col, (i, j) in enumerate(pairs):
        out[..., col] = np.conj(cvals[..., j]) * vvals[..., i] - np.conj(cvals[..., i]) * vvals[..., j]
    return out


def harmonic_estimate_check(F, w_coeffs, alpha, rule, N=64, slack=DEFAULT_SLACK):
    """Check int ||Q' w_vec||^2 dA_alpha <= 8 ||w_vec||_HD^2 (1 + slack).

    w_coeffs: boundary trigonometric-polynomial data n -> a_n, extended
    harmonically and placed in every pair slot of the vector w_vec. The
    normalization surrogate (compression norm of each f_j at most 1) is
    checked and warned about, since the estimate's context assumes it.
    """
    if not isinstance(F, VectorSeries):
        F = VectorSeries(F)
    for f in F:
        comp = multiplier_compression_norm(f, alpha, N)
        if comp.sigma_max > 1.0 + 1e-12:
            warnings.warn(
                f"component compression norm {comp.sigma_max:.6g} exceeds 1; "
                "the harmonic estimate is stated under the unit-column normalization",
                stacklevel=2,
            )
            break
    z = rule.grid()
    wvals = poisson_extension(w_coeffs, eval_points=z).values
    fprime = F.derivative().value(z)
    n = len(F)
    npairs = n * (n - 1) // 2
    kvals = np.broadcast_to(wvals[..., None], wvals.shape + (npairs,))
    qw = q_apply(fprime, kvals)
    lhs = integrate_disk(np.sum(np.abs(qw) ** 2, axis=-1), rule, weighted=True).real
    w_norm_sq = besov_boundary_norm(w_coeffs, alpha) ** 2
    rhs = 8.0 * npairs * w_norm_sq
    return {
        "check": "harmonic_estimate",
        "alpha": rule.alpha,
        "lhs": float(lhs),
        "rhs": float(rhs),
        "pairs": npairs,
        "slack": slack,
        "passed": bool(lhs <= rhs * (1.0 + slack)),
    }
