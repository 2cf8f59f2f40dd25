"""Command-line front end: certifications, solves, space checks, transforms.

Exit codes: 0 all selected checks passed; 1 a verification/bound failed;
2 configuration, input or degenerate-instance error. Reports go to stdout or
--out (JSON or CSV); with --out a matplotlib figure is rendered next to the
report unless --no-plot is given. DWLAB_THREADS caps sweep parallelism.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np
from scipy.special import gamma as gamma_fn

from . import __version__
from .corpus import DEFAULT_SEED, multiplier_corpus, wolff_corpus
from .errors import AllZeroH, ConfigError, DegenerateF, DwlabError, FitResidualTooLarge
from .koszul import harmonic_estimate_check
from .quadrature import build_disk_rule, integrate_disk, refine_until
from .reporting import build_report, write_csv, write_json
from .rotation import SCHUR_CLAIM_IDS, certify_norm, schur_witness_check
from .series import WeightParam, series_from_json
from .solver import instance_from_json, mobius_normalize, solve_uh
from .space import (
    besov_boundary_norm,
    carleson_check,
    gap_series,
    integral_norm,
    pick_coeffs,
    rk_eval,
    schwarz_pick_check,
    series_norm,
)
from .transforms import beurling_transform, cauchy_transform, dbar_residual

CERTIFY_COLUMNS = [
    "family",
    "alpha",
    "l",
    "n_r",
    "sigma_max",
    "sigma_refined",
    "rel_change",
    "bound",
    "regime_bound",
    "margin",
    "passed",
]

SPACE_CHECKS = ("pick", "rk", "gap", "equiv", "schwarz", "carleson", "harmonic")


def _parse_alphas(text):
    try:
        alphas = [WeightParam(float(tok)).alpha for tok in text.split(",") if tok]
    except ValueError as exc:
        raise ConfigError(f"bad --alpha: {exc}") from exc
    if not alphas:
        raise ConfigError("--alpha needs at least one value")
    return alphas


def _threads():
    try:
        return max(1, int(os.environ.get("DWLAB_THREADS", "1")))
    except ValueError:
        return 1


def _figure_path(out):
    root, _ = os.path.splitext(out)
    return root + ".png"


def _emit(report, rows, columns, args, renderer=None, renderer_arg=None):
    if args.format == "csv":
        write_csv(rows, columns, args.out)
    else:
        write_json(report, args.out)
    if args.out and not args.no_plot and renderer is not None:
        from . import figures

        getattr(figures, renderer)(renderer_arg if renderer_arg is not None else rows, _figure_path(args.out))


# --------------------------------------------------------------------------


def cmd_certify(args):
    alphas = _parse_alphas(args.alpha)
    fams = ["T", "B"] if args.family == "both" else [args.family]
    ls = list(range(-args.lmax, args.lmax + 1))
    tasks = [(fam, a, l) for fam in fams for a in alphas for l in ls]
    # warm the per-(alpha, n_r) caches serially; the sweep itself is pure
    from .rotation.certify import _workspace

    for a in alphas:
        _workspace(a, args.nr, args.trunc)
        _workspace(a, 2 * args.nr, args.trunc)

    def run(task):
        fam, a, l = task
        return certify_norm(fam, l, a, n_r=args.nr, basis_dim=args.trunc).report_row()

    nthreads = _threads()
    if nthreads > 1:
        with ThreadPoolExecutor(max_workers=nthreads) as pool:
            rows = list(pool.map(run, tasks))
    else:
        rows = [run(t) for t in tasks]
    rows.sort(key=lambda r: (r["family"], r["alpha"], r["l"]))
    witness_rows = []
    if not args.no_witness:
        for a in alphas:
            for cid in SCHUR_CLAIM_IDS:
                witness_rows.append(schur_witness_check(cid, a))
    ok = all(r["passed"] for r in rows) and all(r["passed"] for r in witness_rows)
    report = build_report(
        "certify", _config_echo(args), {"certified": rows, "witnesses": witness_rows}, "pass" if ok else "fail"
    )
    if args.format == "csv":
        write_csv(rows, CERTIFY_COLUMNS, args.out)
        if args.out and witness_rows:
            write_csv(
                witness_rows,
                ["claim", "alpha", "value", "bound", "margin", "argmax_v", "argmax_l", "passed"],
                os.path.splitext(args.out)[0] + ".witness.csv",
            )
    else:
        write_json(report, args.out)
    if args.out and not args.no_plot:
        from . import figures

        figures.render_certify(rows, _figure_path(args.out))
    return 0 if ok else 1


# --------------------------------------------------------------------------


def _space_rows(args):
    alphas = _parse_alphas(args.alpha)
    selected = SPACE_CHECKS if args.check == "all" else tuple(args.check.split(","))
    for name in selected:
        if name not in SPACE_CHECKS:
            raise ConfigError(f"unknown space check {name!r}; choose from {SPACE_CHECKS}")
    rows = []
    rng_seed = args.seed

    def skipped(name, reason):
        rows.append({"check": name, "status": "skipped", "reason": reason, "passed": True})

    for name in SPACE_CHECKS:
        if name not in selected:
            skipped(name, "not selected")
            continue
        if name == "pick":
            for a in alphas:
                c = pick_coeffs(a, args.trunc)
                rows.append(
                    {
                        "check": "pick",
                        "alpha": a,
                        "N": args.trunc,
                        "min_cn": float(np.min(c)),
                        "passed": bool(np.all(c > 0)),
                    }
                )
        elif name == "rk":
            for a in alphas:
                w = 0.3 + 0.1j
                f = series_from_json([[0, 0.0, 0.0], [1, 0.0, 0.0], [2, 1.0, 0.0]])
                n = np.arange(len(f.coeffs))
                inner = complex(np.sum(f.coeffs * w**n))
                rk = rk_eval(w, w, a, N=200)
                err = abs(inner - f(w))
                rows.append(
                    {
                        "check": "rk",
                        "alpha": a,
                        "reproducing_error": float(err),
                        "tail_bound": rk.tail_bound,
                        "passed": bool(err <= rk.tail_bound + 1e-12),
                    }
                )
        elif name == "gap":
            for a in alphas:
                rep = gap_series(0, a, N=args.trunc)
                row = dict(rep)
                row["check"] = "gap"
                if abs(a - 1.0) < 1e-12:
                    zeta4 = float(np.sum(1.0 / np.arange(1.0, 1e5) ** 4))
                    row["passed"] = bool(
                        rep["sup_bound"] <= zeta4 + 1e-3 and rep["series_norm"] > 10.0
                    )
                else:
                    row["passed"] = bool(rep["series_norm"] > rep["sup_bound"])
                rows.append(row)
        elif name == "equiv":
            limit_tol = 0.10
            for a in alphas:
                ns = range(160, 201, 8) if a <= 0.25 + 1e-12 else range(32, 65, 4)
                limit = math.pi * gamma_fn(2.0 - a)
                worst = 0.0
                rule = build_disk_rule(a, 96, 512)
                for n in ns:
                    f = series_from_json([[n, 1.0, 0.0]])
                    ratio = integral_norm(f, a, rule) ** 2 / series_norm(f, a) ** 2
                    worst = max(worst, abs(ratio / limit - 1.0))
                rows.append(
                    {
                        "check": "equiv",
                        "alpha": a,
                        "n_range": f"{ns.start}..{ns.stop - 1}",
                        "limit": limit,
                        "worst_rel_dev": worst,
                        "passed": bool(worst <= limit_tol),
                    }
                )
            z1 = series_from_json([[0, 0.0, 0.0], [1, 1.0, 0.0]])
            b = besov_boundary_norm(z1, 1.0)
            rows.append(
                {
                    "check": "equiv",
                    "alpha": 1.0,
                    "quantity": "besov(z) vs series(z)",
                    "besov": b,
                    "series": series_norm(z1, 1.0),
                    "passed": bool(abs(b - math.sqrt(2.0)) <= 1e-10),
                }
            )
        elif name == "schwarz":
            corpus = multiplier_corpus(seed=rng_seed)
            for a in alphas:
                rule = build_disk_rule(a, 64, 256)
                ok = True
                worst = 0.0
                for phi in corpus:
                    rep = schwarz_pick_check(phi, a, N=args.trunc_small, rule=rule)
                    ok &= rep["passed"]
                    worst = max(worst, rep["lhs_max"] / rep["sigma_max"])
                rows.append(
                    {"check": "schwarz", "alpha": a, "worst_ratio": worst, "passed": bool(ok)}
                )
        elif name == "carleson":
            corpus = multiplier_corpus(seed=rng_seed)
            for a in alphas:
                rule = build_disk_rule(a, 64, 256)
                ok = True
                worst = 0.0
                for i, H in enumerate(corpus):
                    g = corpus[(i + 1) % len(corpus)]
                    rep = carleson_check(H, g, a, rule=rule, N=args.trunc_small)
                    ok &= rep["passed"]
                    worst = max(worst, rep["lhs"] / rep["rhs"])
                rows.append(
                    {"check": "carleson", "alpha": a, "worst_ratio": worst, "passed": bool(ok)}
                )
        elif name == "harmonic":
            for inst in wolff_corpus()[:2]:
                rule = build_disk_rule(inst.alpha, 48, 192)
                for wdata in ({0: 1.0}, {1: 0.5, -1: 0.5}):
                    rep = harmonic_estimate_check(inst.F, wdata, inst.alpha, rule, N=args.trunc_small)
                    rep["w_modes"] = sorted(wdata)
                    rows.append(rep)
    return rows


def cmd_space(args):
    rows = _space_rows(args)
    ok = all(r.get("passed", True) for r in rows)
    report = build_report("space", _config_echo(args), rows, "pass" if ok else "fail")
    columns = sorted({k for r in rows for k in r})
    _emit(report, rows, columns, args, renderer="render_space")
    return 0 if ok else 1


# --------------------------------------------------------------------------


def cmd_solve(args):
    if not args.infile:
        raise ConfigError("solve needs --in INSTANCE.json")
    try:
        with open(args.infile) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read instance: {exc}") from exc
    instance, opts = instance_from_json(data)
    rule = build_disk_rule(instance.alpha, args.nr, args.angular)
    mobius_info = None
    if args.mobius and abs(instance.H(0.0)) == 0.0:
        instance, mobius_info = mobius_normalize(instance)
    report = solve_uh(
        instance,
        rule=rule,
        fit_tol=float(opts.get("fit_tol", args.tol if args.tol else 1e-8)),
        fit_degree=opts.get("fit_degree"),
    )
    anti_gate = float(opts.get("analyticity_gate", 1e-8))
    anti_ok = report.analyticity["antianalytic_energy_max"] <= anti_gate
    ok = report.passed and anti_ok
    payload = report.to_dict()
    payload["mobius"] = mobius_info
    payload["analyticity_gate"] = anti_gate
    out_report = build_report("solve", _config_echo(args), payload, "pass" if ok else "fail")
    term_columns = ["term", "value", "bound", "asserted", "slack", "passed", "note"]
    if args.format == "csv":
        write_csv(report.terms, term_columns, args.out)
    else:
        write_json(out_report, args.out)
    if args.out and not args.no_plot:
        from . import figures

        figures.render_solve(report, _figure_path(args.out))
    return 0 if ok else 1


# --------------------------------------------------------------------------


def cmd_transform(args):
    if not args.infile:
        raise ConfigError("transform needs --in SERIES.json")
    try:
        with open(args.infile) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read series: {exc}") from exc
    series = series_from_json(data.get("coeffs", data) if isinstance(data, dict) else data)
    if hasattr(series, "to_bidegree"):
        series = series.to_bidegree()
    if isinstance(data, dict) and "alpha" in data:
        alpha = WeightParam(float(data["alpha"])).alpha
    else:
        alpha = _parse_alphas(args.alpha)[0]
    rule = build_disk_rule(alpha, args.nr, args.angular)
    ct = cauchy_transform(series, rule=rule)
    res1 = dbar_residual(series, ct, h=1e-3)
    res2 = dbar_residual(series, ct, h=5e-4)
    order = math.log2(res1 / res2) if res2 > 1e-14 else None
    bt = beurling_transform(series, rule)
    bank_rows = []
    for l in bt.modes.mode_indices():
        vals = bt.modes.samples(l)
        for r, v in zip(rule.radial.nodes, vals):
            bank_rows.append({"l": l, "r": float(r), "re": float(v.real), "im": float(v.imag)})
    from .series import series_to_json

    payload = {
        "alpha": alpha,
        "cauchy_series": series_to_json(ct.series),
        "dbar_residual_h1e-3": res1,
        "dbar_residual_h5e-4": res2,
        "observed_order": order,
        "beurling_modes": sorted(bt.modes.mode_indices()),
    }
    report = build_report("transform", _config_echo(args), payload, "pass")
    if args.format == "csv":
        write_csv(bank_rows, ["l", "r", "re", "im"], args.out)
    else:
        write_json(report, args.out)
    if args.out and not args.no_plot:
        from . import figures

        figures.render_transform(bank_rows, _figure_path(args.out))
    return 0


# --------------------------------------------------------------------------


def cmd_quadcheck(args):
    from scipy.special import beta as beta_fn

    alphas = _parse_alphas(args.alpha)
    rows = []
    ok = True
    for a in alphas:
        rule = build_disk_rule(a, args.nr, args.angular)
        mass = integrate_disk(lambda z: np.ones_like(z), rule).real
        want = math.pi / (2.0 - a)
        rows.append(
            {
                "quantity": f"dA_alpha mass (alpha={a:g})",
                "value": mass,
                "target": want,
                "rel_error": (mass - want) / want,
            }
        )
        for k in (1, 2, 4, 8):
            got = integrate_disk(lambda z: (z * np.conj(z)) ** k, rule).real
            tgt = math.pi * beta_fn(k + 1, 2.0 - a)
            rows.append(
                {
                    "quantity": f"|z|^{2*k} (alpha={a:g})",
                    "value": got,
                    "target": tgt,
                    "rel_error": (got - tgt) / tgt,
                }
            )
        got = integrate_disk(lambda z: z**2 * np.conj(z), rule)
        rows.append(
            {
                "quantity": f"z^2 zbar (alpha={a:g})",
                "value": abs(got),
                "target": 0.0,
                "rel_error": abs(got),
            }
        )
        val, gap, iterates = refine_until(
            lambda rl: integrate_disk(lambda z: np.sqrt(np.abs(z)), rl).real, a, 1e-8
        )
        rows.append(
            {
                "quantity": f"refine |z|^(1/2) (alpha={a:g})",
                "value": val,
                "target": val,
                "rel_error": gap,
                "refinements": len(iterates),
            }
        )
    tol = args.tol or 1e-12
    for r in rows:
        if "refine" not in r["quantity"] and abs(r["rel_error"]) > tol:
            ok = False
    report = build_report("quadcheck", _config_echo(args), rows, "pass" if ok else "fail")
    _emit(
        report,
        rows,
        ["quantity", "value", "target", "rel_error"],
        args,
        renderer="render_quadcheck",
    )
    return 0 if ok else 1


# --------------------------------------------------------------------------


def _config_echo(args):
    keys = (
        "command",
        "alpha",
        "family",
        "check",
        "lmax",
        "nr",
        "angular",
        "trunc",
        "trunc_small",
        "tol",
        "seed",
        "infile",
        "out",
        "format",
    )
    cfg = {"version": __version__}
    for k in keys:
        if hasattr(args, k):
            cfg[k] = getattr(args, k)
    return cfg


def build_parser():
    p = argparse.ArgumentParser(prog="dwlab", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--alpha", default="0.25,0.5,0.75,1.0", help="comma list in (0,1]")
        sp.add_argument("--nr", type=int, default=64, help="radial rule size")
        sp.add_argument("--angular", type=int, default=256, help="angular grid size")
        sp.add_argument("--tol", type=float, default=None, help="tolerance override")
        sp.add_argument("--seed", type=int, default=DEFAULT_SEED)
        sp.add_argument("--in", dest="infile", default=None, help="input JSON path")
        sp.add_argument("--out", default=None, help="report output path")
        sp.add_argument("--format", choices=("json", "csv"), default="json")
        sp.add_argument("--no-plot", action="store_true", help="skip figure rendering")

    sp = sub.add_parser("certify", help="operator-norm certificates and Schur witnesses")
    common(sp)
    sp.add_argument("--family", choices=("T", "B", "both"), default="both")
    sp.add_argument("--lmax", type=int, default=64)
    sp.add_argument("--trunc", type=int, default=32, help="compression basis dimension")
    sp.add_argument("--no-witness", action="store_true")
    sp.set_defaults(func=cmd_certify)

    sp = sub.add_parser("solve", help="run the ideal solver on an instance file")
    common(sp)
    sp.add_argument(
        "--mobius",
        action="store_true",
        help="precompose with a Moebius map when H(0) = 0 (the pipeline itself does not need it)",
    )
    sp.set_defaults(func=cmd_solve)

    sp = sub.add_parser("space", help="norms/kernel/multiplier checks")
    common(sp)
    sp.add_argument("--check", default="all", help="comma list or 'all'")
    sp.add_argument("--trunc", type=int, default=200, help="series truncation")
    sp.add_argument("--trunc-small", dest="trunc_small", type=int, default=64)
    sp.set_defaults(func=cmd_space)

    sp = sub.add_parser("transform", help="Cauchy/Beurling transform of a series file")
    common(sp)
    sp.set_defaults(func=cmd_transform)

    sp = sub.add_parser("quadcheck", help="quadrature exactness diagnostics")
    common(sp)
    sp.set_defaults(func=cmd_quadcheck)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"dwlab: config error: {exc}", file=sys.stderr)
        return 2
    except (DegenerateF, AllZeroH, FitResidualTooLarge) as exc:
        print(f"dwlab: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except DwlabError as exc:
        print(f"dwlab: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"dwlab: config error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
