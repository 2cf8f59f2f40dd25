"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line.

Run with `pytest -s tests/test_acceptance.py` to see the per-criterion lines.
"""
import math
import time

import numpy as np
from scipy.special import gamma as gamma_fn

from dwlab.corpus import bidegree_corpus, koszul_vectors, multiplier_corpus
from dwlab.koszul import build_Q
from dwlab.quadrature import build_disk_rule, build_radial_rule
from dwlab.rotation import (
    SCHUR_CLAIM_IDS,
    angular_decompose,
    certify_norm,
    schur_witness_check,
)
from dwlab.rotation.certify import _b_matrix, _workspace
from dwlab.series import BiDegreeSeries, PowerSeries
from dwlab.solver import WolffInstance, solve_uh
from dwlab.space import (
    besov_boundary_norm,
    carleson_check,
    gap_series,
    integral_norm,
    pick_coeffs,
    schwarz_pick_check,
    series_norm,
)
from dwlab.transforms import beurling_transform, cauchy_series, cauchy_transform, dbar_residual

ALPHAS = (0.25, 0.5, 0.75, 1.0)


def _verdict(num, desc, ok):
    print(f"\nACCEPTANCE {num:02d} [{'PASS' if ok else 'FAIL'}] {desc}")
    assert ok, f"criterion {num} failed: {desc}"


def test_criterion_01_pick_positivity():
    t0 = time.time()
    ok = all(np.all(pick_coeffs(a, 200) > 0) for a in ALPHAS)
    elapsed = time.time() - t0
    ok = ok and elapsed < 1.0
    _verdict(1, f"pick coefficients positive, n <= 200, 4 alphas ({elapsed:.2f}s)", ok)


def test_criterion_02_lemma3_certification():
    t0 = time.time()
    ok = True
    worst_rel = 0.0
    for a in ALPHAS:
        for l in range(-64, 65):
            op = certify_norm("T", l, a, n_r=64)
            ok &= op.sigma_max <= 8.0 / a**2
            worst_rel = max(worst_rel, op.rel_change)
        op0 = certify_norm("T", 0, a, n_r=64)
        ok &= op0.sigma_max <= 5.0 / a**2
    elapsed = time.time() - t0
    ok = ok and worst_rel <= 1e-4 and elapsed < 120.0
    _verdict(
        2,
        f"sigma(T_l) <= 8/a^2 for |l|<=64, stable to {worst_rel:.1e} at n_r 64->128, "
        f"T_0 <= 5/a^2 ({elapsed:.1f}s)",
        ok,
    )


def test_criterion_03_lemma4_certification():
    ok = True
    for a in ALPHAS:
        for l in range(-64, 65):
            op = certify_norm("B", l, a, n_r=64)
            ok &= op.sigma_max <= 23.0 / a
            if l < 2:
                ok &= op.sigma_max <= 7.0
    ws = _workspace(0.5, 64, 32)
    ok &= bool(np.array_equal(_b_matrix(ws, 1), -np.eye(32)))
    ok &= certify_norm("B", 1, 0.5, n_r=64).sigma_max == 1.0
    _verdict(3, "sigma(B_l) <= 23/a, <= 7 for l < 2, B_1 = -identity exactly", ok)


def test_criterion_04_schur_witness_catalog():
    ok = True
    for a in ALPHAS:
        for cid in SCHUR_CLAIM_IDS:
            rep = schur_witness_check(cid, a)
            ok &= rep["passed"]
    ia = schur_witness_check("I.a", 0.5)
    ok &= abs(ia["value"] - 1.0 / (2.0 * math.e)) <= 1e-6
    ok &= ia["value"] <= 0.25
    _verdict(
        4,
        f"nine Schur witnesses pass at 4 alphas; max v^2 ln(1/v) = {ia['value']:.8f} "
        f"= 1/(2e) <= 1/4",
        ok,
    )


def test_criterion_05_koszul_identities():
    ok = True
    for c in koszul_vectors(count=100, n_max=64):
        Q = build_Q(c)
        ok &= Q.identity_residual() <= 1e-14
        ok &= Q.cq_residual() <= 1e-14
        ok &= Q.rank() == len(c) - 1
    _verdict(5, "QQ* = (CC*)I - C*C and CQ = 0 to 1e-14; rank(Q) = n-1 (100 vectors)", ok)


def test_criterion_06_cauchy_transform():
    rng = np.random.default_rng(99)
    pts = 0.9 * np.sqrt(rng.uniform(0.01, 1, 32)) * np.exp(2j * np.pi * rng.uniform(0, 1, 32))
    r1 = cauchy_transform(BiDegreeSeries({(0, 0): 1.0}), eval_points=pts)
    ok = bool(np.max(np.abs(r1.values - np.conj(pts))) <= 1e-12)
    r2 = cauchy_transform(BiDegreeSeries({(0, 1): 1.0}), eval_points=pts)
    ok &= bool(np.max(np.abs(r2.values - np.conj(pts) ** 2 / 2)) <= 1e-12)
    k = BiDegreeSeries({(2, 1): 1.0, (1, 2): 0.5j})
    khat = cauchy_series(k)
    res1 = dbar_residual(k, khat, h=1e-2)
    res2 = dbar_residual(k, khat, h=5e-3)
    order = math.log2(res1 / res2)
    ok &= order >= 1.9
    _verdict(6, f"khat(1) = zbar, khat(wbar) = zbar^2/2 at 32 points; dbar order {order:.3f} >= 1.9", ok)


def test_criterion_07_beurling_bound():
    ok = True
    for a in ALPHAS:
        rule = build_radial_rule(a, 48)
        for f in bidegree_corpus(count=50):
            bank_in = angular_decompose(f, rule)
            out = beurling_transform(f, rule)
            ok &= out.modes.norm() <= (23.0 / a) * bank_in.norm() + 1e-12
    rule = build_radial_rule(0.5, 16)
    ok &= beurling_transform(BiDegreeSeries({(0, 0): 1.0}), rule).modes.mode_indices() == []
    ok &= beurling_transform(BiDegreeSeries({(0, 1): 1.0}), rule).modes.mode_indices() == []
    _verdict(7, "||B(f)|| <= (23/a)||f|| on 50-instance corpus; B(1) = B(wbar) = 0 exactly", ok)


def test_criterion_08_wolff_solve():
    ok = True
    slowest = 0.0
    for h in ([1.0], [0.0, 1.0], [0.0, 0.0, 1.0]):
        inst = WolffInstance(F=[[0.0, 0.5], [0.5]], H=[0.0, 0.5], h=h, alpha=1.0)
        t0 = time.time()
        rep = solve_uh(inst, rule=build_disk_rule(1.0, 64, 256))
        slowest = max(slowest, time.time() - t0)
        hmax = float(np.max(np.abs(inst.H(rep.grid) ** 3 * inst.h(rep.grid))))
        ok &= rep.ideal_residual <= 1e-10 * (1.0 + hmax)
        ok &= all(row["passed"] for row in rep.terms if row["asserted"])
        # refinement ladder: anti-analytic defect energy drops >= 4x per doubling
        energies = []
        for nr, M, D in ((16, 64, 4), (32, 128, 8), (64, 256, 16)):
            r = solve_uh(
                inst, rule=build_disk_rule(1.0, nr, M), fit_degree=D, fit_tol=np.inf
            )
            energies.append(r.analyticity["antianalytic_energy_max"])
        ok &= energies[0] / max(energies[1], 1e-300) >= 4.0
        ok &= energies[1] / max(energies[2], 1e-300) >= 4.0
    ok = ok and slowest < 60.0
    _verdict(
        8,
        f"ideal residual <= 1e-10, defect energy drops >= 4x per refinement doubling, "
        f"terms a',b',c',e',f' within bounds (slowest solve {slowest:.1f}s)",
        ok,
    )


def test_criterion_09_lemma5_lemma6_corpus():
    ok = True
    corpus = multiplier_corpus()
    for a in ALPHAS:
        rule = build_disk_rule(a, 64, 256)
        for i, phi in enumerate(corpus):
            ok &= schwarz_pick_check(phi, a, N=64, rule=rule)["passed"]
            g = corpus[(i + 1) % len(corpus)]
            ok &= carleson_check(phi, g, a, rule=rule, N=64)["passed"]
    _verdict(9, "Schwarz-Pick and Carleson checks pass on degree-<=8 corpus, slack 0.05", ok)


def test_criterion_10_norm_equivalences():
    ok = True
    for a in (0.5, 0.75, 1.0):
        rule = build_disk_rule(a, 96, 64)
        limit = math.pi * gamma_fn(2.0 - a)
        for n in range(32, 65, 4):
            f = PowerSeries([0.0] * n + [1.0])
            ratio = integral_norm(f, a, rule) ** 2 / series_norm(f, a) ** 2
            ok &= abs(ratio / limit - 1.0) <= 0.10
    # alpha = 0.25: the boundary term ~ (n+1)^(-1/4) keeps the ratio 10-12%
    # above the limit until n ~ 143; asserted on n = 160..200 instead
    a = 0.25
    rule = build_disk_rule(a, 160, 64)
    limit = math.pi * gamma_fn(2.0 - a)
    for n in (160, 180, 200):
        f = PowerSeries([0.0] * n + [1.0])
        ratio = integral_norm(f, a, rule) ** 2 / series_norm(f, a) ** 2
        ok &= abs(ratio / limit - 1.0) <= 0.10
    z = PowerSeries([0.0, 1.0])
    b = besov_boundary_norm(z, 1.0)
    ok &= abs(b - math.sqrt(2.0)) <= 1e-10
    ok &= abs(b**2 - 2.0) <= 2e-10  # 1 + c_1(1) = 2 under the root
    _verdict(
        10,
        "monomial integral/series ratio within 10% of pi*Gamma(2-a) "
        "(n = 32..64 for a >= 0.5; n = 160..200 at a = 0.25); besov(z, a=1) = sqrt(2)",
        ok,
    )


def test_criterion_11_gap_series():
    rep = gap_series(0, 1.0, N=200)
    zeta4 = float(np.sum(1.0 / np.arange(1.0, 1e6) ** 4))
    ok = rep["m"] == 2
    ok &= rep["sup_bound"] <= zeta4 + 1e-3
    ok &= rep["series_norm"] > 10.0
    for N in (10, 50, 100):
        ok &= gap_series(2, 1.0, N=N)["sup_bound"] <= zeta4 + 1e-3
    _verdict(
        11,
        f"gap series: sup bound {rep['sup_bound']:.6f} <= zeta(4)+1e-3, "
        f"truncated norm {rep['series_norm']:.1f} > 10 at N = 200",
        ok,
    )
