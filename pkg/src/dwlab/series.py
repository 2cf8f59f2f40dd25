"""Function representations on the disk: power series, bi-degree series, tuples.

A PowerSeries is an analytic polynomial sum a_n z^n; a BiDegreeSeries is a
smooth polynomial sum a_{jk} z^j zbar^k. Coefficients below TRIM_TOL in
modulus are treated as structural zeros so degrees are canonical.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

TRIM_TOL = 1e-300


@dataclass(frozen=True)
class WeightParam:
    """Weight exponent for the space; only 0 < alpha <= 1 is supported."""

    alpha: float

    def __post_init__(self):
        a = float(self.alpha)
        if not (0.0 < a <= 1.0) or not math.isfinite(a):
            raise ValueError(f"alpha must lie in (0, 1], got {self.alpha!r}")
        object.__setattr__(self, "alpha", a)


def _trim(coeffs):
    c = np.asarray(coeffs, dtype=complex)
    if c.ndim != 1:
        raise ValueError("coefficients must be one-dimensional")
    nz = np.nonzero(np.abs(c) >= TRIM_TOL)[0]
    if nz.size == 0:
        return np.zeros(1, dtype=complex)
    return np.array(c[: nz[-1] + 1], dtype=complex)


class PowerSeries:
    """Analytic polynomial sum_{n<=N} a_n z^n with canonically trimmed degree."""

    def __init__(self, coeffs):
        self.coeffs = _trim(coeffs)

    @property
    def degree(self):
        return len(self.coeffs) - 1

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        out = np.zeros_like(z)
        for c in self.coeffs[::-1]:
            out = out * z + c
        return out

    def derivative(self):
        n = np.arange(1, len(self.coeffs))
        return PowerSeries(self.coeffs[1:] * n) if len(self.coeffs) > 1 else PowerSeries([0.0])

    def conj_series(self):
        return PowerSeries(np.conj(self.coeffs))

    def __mul__(self, other):
        if isinstance(other, PowerSeries):
            return PowerSeries(np.convolve(self.coeffs, other.coeffs))
        return PowerSeries(self.coeffs * other)

    __rmul__ = __mul__

    def __add__(self, other):
        a, b = self.coeffs, other.coeffs
        n = max(len(a), len(b))
        out = np.zeros(n, dtype=complex)
        out[: len(a)] += a
        out[: len(b)] += b
        return PowerSeries(out)

    def power(self, k):
        out = PowerSeries([1.0])
        for _ in range(k):
            out = out * self
        return out

    def is_zero(self):
        return len(self.coeffs) == 1 and self.coeffs[0] == 0

    def to_bidegree(self):
        return BiDegreeSeries({(n, 0): c for n, c in enumerate(self.coeffs) if abs(c) >= TRIM_TOL})

    def __repr__(self):
        return f"PowerSeries({list(self.coeffs)!r})"


class BiDegreeSeries:
    """Polynomial in z and zbar: sum a_{jk} z^j zbar^k with finite support."""

    def __init__(self, coeffs):
        clean = {}
        for (j, k), c in dict(coeffs).items():
            j, k = int(j), int(k)
            if j < 0 or k < 0:
                raise ValueError("bi-degree indices must be nonnegative")
            c = complex(c)
            if abs(c) >= TRIM_TOL:
                clean[(j, k)] = clean.get((j, k), 0.0) + c
        self.coeffs = {key: c for key, c in clean.items() if abs(c) >= TRIM_TOL}

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        zb = np.conj(z)
        out = np.zeros_like(z)
        for (j, k), c in self.coeffs.items():
            out = out + c * z**j * zb**k
        return out

    def dz(self):
        """Analytic derivative d/dz."""
        return BiDegreeSeries(
            {(j - 1, k): j * c for (j, k), c in self.coeffs.items() if j >= 1}
        )

    def dzbar(self):
        return BiDegreeSeries(
            {(j, k - 1): k * c for (j, k), c in self.coeffs.items() if k >= 1}
        )

    def conj_series(self):
        return BiDegreeSeries({(k, j): np.conj(c) for (j, k), c in self.coeffs.items()})

    def __add__(self, other):
        out = dict(self.coeffs)
        for key, c in other.coeffs.items():
            out[key] = out.get(key, 0.0) + c
        return BiDegreeSeries(out)

    def __sub__(self, other):
        out = dict(self.coeffs)
        for key, c in other.coeffs.items():
            out[key] = out.get(key, 0.0) - c
        return BiDegreeSeries(out)

    def __mul__(self, other):
        if isinstance(other, BiDegreeSeries):
            out = {}
            for (j1, k1), c1 in self.coeffs.items():
                for (j2, k2), c2 in other.coeffs.items():
                    key = (j1 + j2, k1 + k2)
                    out[key] = out.get(key, 0.0) + c1 * c2
            return BiDegreeSeries(out)
        return BiDegreeSeries({key: c * other for key, c in self.coeffs.items()})

    __rmul__ = __mul__

    def total_degree(self):
        if not self.coeffs:
            return 0
        return max(j + k for j, k in self.coeffs)

    def modes(self):
        """Group coefficients by angular mode l = j - k.

        Returns {l: [(power_of_r, coeff), ...]} with power = j + k, sorted.
        """
        out = {}
        for (j, k), c in self.coeffs.items():
            out.setdefault(j - k, []).append((j + k, c))
        return {l: sorted(terms) for l, terms in sorted(out.items())}

    def is_analytic(self):
        return all(k == 0 for (_, k) in self.coeffs)

    def __repr__(self):
        return f"BiDegreeSeries({self.coeffs!r})"


@dataclass
class VectorSeries:
    """Row tuple F = (f_1 .. f_n) of analytic polynomials."""

    components: list = field(default_factory=list)

    def __post_init__(self):
        self.components = [
            f if isinstance(f, PowerSeries) else PowerSeries(f) for f in self.components
        ]
        if not self.components:
            raise ValueError("VectorSeries needs at least one component")

    def __len__(self):
        return len(self.components)

    def __iter__(self):
        return iter(self.components)

    def value(self, z):
        """Row value F(z), shape (*z.shape, n)."""
        z = np.asarray(z, dtype=complex)
        return np.stack([f(z) for f in self.components], axis=-1)

    def ff_star(self, z):
        """Pointwise F(z) F(z)^* = sum_j |f_j(z)|^2 (real, nonnegative)."""
        v = self.value(z)
        return np.sum(np.abs(v) ** 2, axis=-1)

    def derivative(self):
        return VectorSeries([f.derivative() for f in self.components])

    def scale(self, factor):
        return VectorSeries([f * factor for f in self.components])


# ---------------------------------------------------------------------------
# JSON wire format: [[n, re, im], ...] for analytic, [[j, k, re, im], ...] for
# bi-degree entries. Mixed-length rows are rejected.

def series_to_json(series):
    if isinstance(series, PowerSeries):
        return [
            [n, float(c.real), float(c.imag)]
            for n, c in enumerate(series.coeffs)
            if abs(c) >= TRIM_TOL or n == 0
        ]
    return [
        [j, k, float(c.real), float(c.imag)] for (j, k), c in sorted(series.coeffs.items())
    ]


def series_from_json(data):
    if isinstance(data, dict) and "coeffs" in data:
        data = data["coeffs"]
    rows = list(data)
    if not rows:
        return PowerSeries([0.0])
    width = {len(r) for r in rows}
    if width == {3}:
        n_max = max(int(r[0]) for r in rows)
        c = np.zeros(n_max + 1, dtype=complex)
        for n, re, im in rows:
            c[int(n)] += complex(re, im)
        return PowerSeries(c)
    if width == {4}:
        return BiDegreeSeries({(int(j), int(k)): complex(re, im) for j, k, re, im in rows})
    raise ValueError("series rows must all be [n,re,im] or all [j,k,re,im]")
