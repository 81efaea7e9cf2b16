"""Matplotlib rendering of report figures written next to CSV outputs."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402


def plot_error_curves(curves, path, title="nonlinear approximation"):
    """Error curves on linear and log scale (log view up to half the terms)."""
    fig, (ax_lin, ax_log) = plt.subplots(1, 2, figsize=(11.5, 4.3))
    for curve in curves:
        ax_lin.plot(curve.terms, curve.errors, lw=1.2, label=curve.method)
        half = len(curve.errors) // 2 + 1
        log_err = curve.errors[:half].clip(min=1e-16)
        ax_log.semilogy(curve.terms[:half], log_err, lw=1.2, label=curve.method)
    ax_lin.set_xlabel("terms kept")
    ax_lin.set_ylabel("relative $\\ell_2$ error")
    ax_lin.set_title(title)
    ax_log.set_xlabel("terms kept (up to 50%)")
    ax_log.set_ylabel("relative $\\ell_2$ error (log)")
    ax_log.set_title("log view")
    ax_log.legend(fontsize=8, loc="lower left")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_kscore(rows, path, title="cluster scores"):
    """One panel per cluster count: score against feature count per method."""
    clusters = sorted(set(r[0] for r in rows))
    methods = sorted(set(r[2] for r in rows))
    fig, axes = plt.subplots(
        1, len(clusters), figsize=(3.6 * len(clusters), 3.4), squeeze=False
    )
    for ax, d in zip(axes[0], clusters):
        for method in methods:
            pts = sorted((r[1], r[3]) for r in rows if r[0] == d and r[2] == method)
            if pts:
                ax.plot([p[0] for p in pts], [p[1] for p in pts], "o-", label=method)
        ax.set_title(f"{d} clusters")
        ax.set_xlabel("features")
        ax.set_ylabel("score")
    axes[0][0].legend(fontsize=8)
    fig.suptitle(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
