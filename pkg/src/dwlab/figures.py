"""Figure rendering for CLI reports (written next to the delimited output)."""
from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np


def render_certify(rows, path):
    fig, ax = plt.subplots(figsize=(7.0, 4.2))
    fams = sorted({r["family"] for r in rows})
    alphas = sorted({r["alpha"] for r in rows})
    for fam in fams:
        for alpha in alphas:
            sel = [r for r in rows if r["family"] == fam and r["alpha"] == alpha]
            if not sel:
                continue
            sel.sort(key=lambda r: r["l"])
            ls = [r["l"] for r in sel]
            ax.plot(ls, [r["sigma_max"] for r in sel], lw=1.0, label=f"{fam}, a={alpha:g}")
            ax.plot(ls, [r["bound"] for r in sel], ls="--", lw=0.8, color="gray")
    ax.set_xlabel("mode l")
    ax.set_ylabel("certified sigma_max (dashed: bound)")
    ax.set_yscale("log")
    ax.legend(fontsize=7, ncol=2)
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)


def render_schur(rows, path):
    fig, ax = plt.subplots(figsize=(7.0, 4.2))
    labels = [f"{r['claim']}@{r['alpha']:g}" for r in rows]
    x = np.arange(len(rows))
    ax.bar(x - 0.2, [r["value"] for r in rows], width=0.4, label="max LHS")
    ax.bar(x + 0.2, [r["bound"] for r in rows], width=0.4, label="bound")
    ax.set_xticks(x)
    ax.set_xticklabels(labels, rotation=75, fontsize=6)
    ax.set_yscale("log")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)


def render_solve(report, path):
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9.0, 4.0))
    rows = [r for r in report.terms if r["bound"] is not None]
    x = np.arange(len(rows))
    ax1.bar(x - 0.2, [max(r["value"], 1e-300) for r in rows], width=0.4, label="value")
    ax1.bar(x + 0.2, [r["bound"] for r in rows], width=0.4, label="bound")
    ax1.set_xticks(x)
    ax1.set_xticklabels([r["term"] for r in rows])
    ax1.set_yscale("log")
    ax1.set_title("term estimates")
    ax1.legend(fontsize=8)
    vals = np.sum(np.abs(report.u) ** 2, axis=0)
    n_r, M = vals.shape
    theta = 2.0 * np.pi * np.arange(M) / M
    r = np.abs(report.grid[:, 0])
    im = ax2.pcolormesh(theta, r, vals, shading="auto")
    fig.colorbar(im, ax=ax2, label="||u(z)||^2")
    ax2.set_title(f"ideal residual {report.ideal_residual:.2e}")
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)


def render_space(rows, path):
    fig, ax = plt.subplots(figsize=(7.0, 4.2))
    checks = [f"{r.get('check','?')}@{r.get('alpha','')}" for r in rows]
    ok = [1.0 if r.get("passed", True) else 0.0 for r in rows]
    ax.bar(np.arange(len(rows)), ok, color=["C2" if o else "C3" for o in ok])
    ax.set_xticks(np.arange(len(rows)))
    ax.set_xticklabels(checks, rotation=75, fontsize=6)
    ax.set_ylabel("pass = 1")
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)


def render_transform(bank_rows, path):
    fig, ax = plt.subplots(figsize=(7.0, 4.2))
    modes = sorted({r["l"] for r in bank_rows})
    mags = []
    for l in modes:
        vals = [abs(complex(r["re"], r["im"])) for r in bank_rows if r["l"] == l]
        mags.append(max(vals) if vals else 0.0)
    ax.stem(modes, np.maximum(mags, 1e-300))
    ax.set_yscale("log")
    ax.set_xlabel("output mode")
    ax.set_ylabel("max |profile|")
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)


def render_quadcheck(rows, path):
    fig, ax = plt.subplots(figsize=(7.0, 4.2))
    labels = [r["quantity"] for r in rows]
    errs = [max(abs(r["rel_error"]), 1e-18) for r in rows]
    ax.bar(np.arange(len(rows)), errs)
    ax.set_xticks(np.arange(len(rows)))
    ax.set_xticklabels(labels, rotation=60, fontsize=6)
    ax.set_yscale("log")
    ax.set_ylabel("relative error")
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)
