"""The radial operator families T_l and B_l acting on polynomial profiles.

Both evaluate their split-kernel piecewise formulas, dividing the radial
integral at the evaluation point. Profiles are polynomials in r, so every
segment integral has an elementary antiderivative; the lone special case is
the logarithmic tail integral (power exactly -1), which cannot occur for
profiles coming from an angular decomposition.

B_l carries a sign convention switch for the analytic modes l >= 1: the
"standard" convention negates the multiple-of-identity term (so B_1 = -Id),
the "derivative" convention keeps the sign that matches d/dz of the Cauchy
transform. The two agree for l <= 0.
"""
from __future__ import annotations

import numpy as np

from .modes import RadialProfile


def _as_profile(profile):
    if isinstance(profile, RadialProfile):
        return profile
    if isinstance(profile, (tuple, list)) and len(profile) == 2 and hasattr(profile[0], "__len__"):
        powers, coeffs = profile
        return RadialProfile.from_terms(zip(powers, coeffs))
    coeffs = np.asarray(profile, dtype=complex).ravel()
    return RadialProfile.from_terms(enumerate(coeffs))


def _one_minus_pow(s, m):
    """1 - s^m, stable near s = 1."""
    return -np.expm1(m * np.log(s))


def tl_values(l, profile, s):
    """(T_l f)(s) for a polynomial profile f, evaluated at points s in (0,1)."""
    f = _as_profile(profile)
    s = np.atleast_1d(np.asarray(s, dtype=float))
    if np.any((s <= 0) | (s >= 1)):
        raise ValueError("T_l evaluation points must lie strictly inside (0,1)")
    out = np.zeros(s.shape, dtype=complex)
    if f.is_zero():
        return out
    l = int(l)
    if l <= 0:
        geo = np.zeros_like(s)
        for n in range(0, -l + 1):
            geo += s ** (2 * n)
        for p, c in zip(f.powers, f.coeffs):
            inner = c * s ** (p + 1) / (p + 2 - l)
            out -= geo * inner
            tail = c * s ** (1 - l) * _one_minus_pow(s, p + 2 - l) / (p + 2 - l)
            out += tail / (1.0 - s**2)
    else:
        for p, c in zip(f.powers, f.coeffs):
            m = p + 3 - l
            if m == 0:
                out += c * s ** (l - 1) * np.log(1.0 / s) / (1.0 - s**2)
            else:
                out += c * (s ** (l - 1) - s ** (p + 2)) / (m * (1.0 - s**2))
    return out


def apply_Tl(l, profile, s):
    """Public alias: evaluate the split T_l kernel at the given points."""
    return tl_values(l, profile, s)


def bl_profile(l, profile, convention="standard"):
    """Exact coefficient form of B_l f for a polynomial profile f.

    Returns (RadialProfile, log_coef); a nonzero log_coef means an extra term
    log_coef * s^(l-2) * ln(1/s), possible only for user-supplied profiles.
    """
    if convention not in ("standard", "derivative"):
        raise ValueError("convention must be 'standard' or 'derivative'")
    f = _as_profile(profile)
    l = int(l)
    if f.is_zero():
        return RadialProfile.from_terms([]), 0.0
    terms = []
    log_coef = 0.0
    if l == 0:
        for p, c in zip(f.powers, f.coeffs):
            terms.append((p, -2.0 * c / (p + 2)))
            terms.append((p, c))
    elif l >= 1:
        ident = -1.0 if convention == "standard" else 1.0
        for p, c in zip(f.powers, f.coeffs):
            m = p + 2 - l
            if m == 0:
                log_coef += -2.0 * (l - 1) * c
            else:
                # -2(l-1) s^{l-2} (1 - s^m)/m  =  -2(l-1)(s^{l-2} - s^p)/m
                terms.append((l - 2, -2.0 * (l - 1) * c / m))
                terms.append((p, 2.0 * (l - 1) * c / m))
            terms.append((p, ident * c))
    else:
        if f.min_power < -l:
            raise ValueError(
                f"profile must vanish to order {-l} at 0 for mode l={l}; "
                f"lowest power present is {f.min_power}"
            )
        for p, c in zip(f.powers, f.coeffs):
            terms.append((p, -2.0 * (1 - l) * c / (p + 2 - l)))
            terms.append((p, c))
    return RadialProfile.from_terms(terms), log_coef


def apply_Bl(l, profile, s, convention="standard"):
    """(B_l f)(s) at points s, using the exact coefficient form."""
    poly, log_coef = bl_profile(l, profile, convention=convention)
    s = np.atleast_1d(np.asarray(s, dtype=float))
    out = poly(s)
    if log_coef != 0.0:
        out = out + log_coef * s ** (l - 2) * np.log(1.0 / s)
    return out
