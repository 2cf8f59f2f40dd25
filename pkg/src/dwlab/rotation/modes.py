"""Angular decomposition f(r e^{i theta}) = sum_l f_l(r) e^{il theta}.

Profiles arising from a BiDegreeSeries are radial polynomials with powers
l + 2k; they are kept in coefficient form (exact) alongside samples on the
radial rule. Sample-only banks (from grid data) support the same norms via
quadrature.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..quadrature import RadialRule, gauss_sqrtjacobi_01
from ..series import BiDegreeSeries


@dataclass(frozen=True)
class RadialProfile:
    """Finite combination sum_p c_p r^p with integer powers p >= 0."""

    powers: tuple
    coeffs: tuple

    @staticmethod
    def from_terms(terms):
        merged = {}
        for p, c in terms:
            merged[int(p)] = merged.get(int(p), 0.0) + complex(c)
        items = sorted((p, c) for p, c in merged.items() if c != 0)
        if not items:
            return RadialProfile(powers=(), coeffs=())
        return RadialProfile(
            powers=tuple(p for p, _ in items), coeffs=tuple(c for _, c in items)
        )

    def __call__(self, r):
        r = np.asarray(r, dtype=float)
        out = np.zeros(r.shape, dtype=complex)
        for p, c in zip(self.powers, self.coeffs):
            out += c * r**p
        return out

    def is_zero(self):
        return len(self.powers) == 0

    @property
    def min_power(self):
        return self.powers[0] if self.powers else 0

    @property
    def max_power(self):
        return self.powers[-1] if self.powers else 0

    def l2_alpha_norm_sq(self, alpha):
        """Exact int_0^1 |f(r)|^2 (1-r^2)^(1-alpha) r dr by a Gauss rule."""
        if self.is_zero():
            return 0.0
        n = self.max_power + 2
        r, w = gauss_sqrtjacobi_01(1.0 - alpha, n)
        return float(np.sum(w * np.abs(self(r)) ** 2))


@dataclass
class ModeBank:
    """Per-mode radial profiles, sampled at the nodes of a RadialRule.

    profiles holds exact coefficient forms when the bank came from a
    BiDegreeSeries; sample-only banks keep profiles empty and store samples.
    """

    alpha: float
    rule: RadialRule
    profiles: dict = field(default_factory=dict)
    _samples: dict = field(default_factory=dict)

    def mode_indices(self):
        keys = set(self.profiles) | set(self._samples)
        return sorted(keys)

    def samples(self, l):
        if l in self._samples:
            return self._samples[l]
        prof = self.profiles.get(l)
        if prof is None:
            return np.zeros(self.rule.count, dtype=complex)
        vals = prof(self.rule.nodes)
        self._samples[l] = vals
        return vals

    def norm_sq(self):
        """A_alpha norm squared: sum_l ||f_l||^2 over L^2((1-r^2)^(1-alpha) r dr).

        Exact for coefficient profiles; quadrature on the rule otherwise.
        """
        total = 0.0
        for l in self.mode_indices():
            total += mode_norm(self, l) ** 2
        return total

    def norm(self):
        return math.sqrt(self.norm_sq())

    def to_csv(self, path):
        with open(path, "w") as fh:
            fh.write("l,r,re,im\n")
            for l in self.mode_indices():
                vals = self.samples(l)
                for r, v in zip(self.rule.nodes, vals):
                    fh.write(f"{l},{r:.17g},{v.real:.17g},{v.imag:.17g}\n")


def mode_norm(bank, l):
    prof = bank.profiles.get(l)
    if prof is not None:
        return math.sqrt(prof.l2_alpha_norm_sq(bank.alpha))
    vals = bank._samples.get(l)
    if vals is None:
        return 0.0
    return math.sqrt(float(np.sum(bank.rule.weights * np.abs(vals) ** 2)))


def angular_decompose(f, rule):
    """Exact regrouping of a BiDegreeSeries by angular mode l = j - k."""
    if not isinstance(f, BiDegreeSeries):
        f = f.to_bidegree()
    alpha_guess = rule.alpha
    profiles = {
        l: RadialProfile.from_terms(terms) for l, terms in f.modes().items()
    }
    profiles = {l: p for l, p in profiles.items() if not p.is_zero()}
    return ModeBank(alpha=alpha_guess, rule=rule, profiles=profiles)


def mode_bank_from_samples(values, rule, drop_tol=0.0):
    """FFT decomposition of grid samples, shape (n_r, M), into a sampled bank.

    Mode index l runs over the FFT frequencies of the angular axis.
    """
    values = np.asarray(values, dtype=complex)
    n_r, M = values.shape
    if n_r != rule.count:
        raise ValueError("sample grid does not match the radial rule")
    coeffs = np.fft.fft(values, axis=1) / M
    freqs = np.fft.fftfreq(M, d=1.0 / M).astype(int)
    bank = ModeBank(alpha=rule.alpha, rule=rule)
    for col, l in enumerate(freqs):
        vals = coeffs[:, col]
        if drop_tol and np.max(np.abs(vals)) <= drop_tol:
            continue
        bank._samples[int(l)] = vals.copy()
    return bank


def synthesize(bank, theta):
    """Reassemble sum_l f_l(r) e^{il theta} on the tensor grid (nodes x theta)."""
    theta = np.asarray(theta, dtype=float)
    out = np.zeros((bank.rule.count, theta.size), dtype=complex)
    for l in bank.mode_indices():
        out += bank.samples(l)[:, None] * np.exp(1j * l * theta)[None, :]
    return out


def negative_mode_energy(bank):
    """(sum_{l<0} ||f_l||^2) / (total), the analyticity defect of a bank."""
    total = 0.0
    neg = 0.0
    for l in bank.mode_indices():
        e = mode_norm(bank, l) ** 2
        total += e
        if l < 0:
            neg += e
    if total == 0.0:
        return 0.0
    return neg / total
