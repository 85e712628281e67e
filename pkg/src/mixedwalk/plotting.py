"""Figures written next to the JSON/CSV reports."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .charpoly import index_set  # noqa: E402
from .matrices import NUMERIC, time_evolution  # noqa: E402

VERDICT_COLORS = {"Periodic": "tab:green", "NotPeriodic": "tab:red", "UndecidedNumeric": "tab:gray"}


def _finish(fig, path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def plot_spectrum(g, eta, path, tau: int | None = None, title: str | None = None) -> Path:
    """Eigenvalues of U_theta on the unit circle, with the tau-th roots of unity if a period is known."""
    eig = np.linalg.eigvals(time_evolution(g, eta, NUMERIC).data)
    fig, ax = plt.subplots(figsize=(4.5, 4.5))
    t = np.linspace(0, 2 * np.pi, 400)
    ax.plot(np.cos(t), np.sin(t), color="0.8", lw=1)
    if tau:
        roots = np.exp(2j * np.pi * np.arange(tau) / tau)
        ax.scatter(roots.real, roots.imag, s=80, facecolors="none", edgecolors="tab:blue",
                   label=f"{tau}-th roots of unity")
    ax.scatter(eig.real, eig.imag, s=18, color="k", zorder=3, label="Spec(U)")
    ax.set_aspect("equal")
    ax.set_xlim(-1.25, 1.25)
    ax.set_ylim(-1.25, 1.25)
    ax.legend(loc="lower left", fontsize=7)
    ax.set_title(title or f"n={g.n}, m={g.m}, eta={eta}", fontsize=9)
    return _finish(fig, path)


def plot_experiment(report, path) -> Path:
    """Verdict counts and the alpha_{2n-2} values of every instance."""
    fig, (ax0, ax1) = plt.subplots(1, 2, figsize=(9, 3.5))
    counts = report.counts
    names = sorted(counts)
    ax0.bar(names, [counts[k] for k in names], color=[VERDICT_COLORS.get(k, "tab:blue") for k in names])
    ax0.set_ylabel("instances")
    ax0.set_title(f"{report.experiment}: {report.aggregate}", fontsize=9)
    for lbl in ax0.get_xticklabels():
        lbl.set_fontsize(8)
    xs, ys, cs = [], [], []
    for r in report.rows:
        if r.get("alpha_2n_2") is None:
            continue
        try:
            val = float(_to_float(r["alpha_2n_2"]))
        except ValueError:
            continue
        xs.append(r["index"])
        ys.append(val)
        cs.append(VERDICT_COLORS.get(r["verdict"], "tab:blue"))
    if xs:
        ax1.scatter(xs, ys, s=6, c=cs)
        ax1.set_xlabel("instance index")
        ax1.set_ylabel(r"$\alpha_{2n-2}$")
    else:
        ax1.text(0.5, 0.5, "no rational alpha values", ha="center", va="center", transform=ax1.transAxes)
    return _finish(fig, path)


def _to_float(text: str) -> float:
    from fractions import Fraction

    return float(Fraction(text))


def plot_index_sets(n: int, path, js: tuple[int, ...] | None = None) -> Path:
    """The lattice I = {(i, l) : 0 <= l <= i <= n} with the members of chosen I_j highlighted."""
    js = js if js is not None else (2 * n, 2 * n - 1, 2 * n - 2, 2 * n - 3)
    fig, ax = plt.subplots(figsize=(4.5, 4.5))
    pts = [(i, l) for i in range(n + 1) for l in range(i + 1)]
    ax.scatter(*zip(*pts), s=14, color="0.6")
    for j in js:
        if 0 <= j <= 2 * n:
            members = sorted(index_set(n, j))
            ax.plot(*zip(*members), marker="o", lw=1, label=f"$I_{{{j}}}$")
    ax.plot([0, n], [0, n], color="k", lw=0.8)
    ax.set_xlabel("i")
    ax.set_ylabel("l")
    ax.set_aspect("equal")
    ax.legend(fontsize=7)
    return _finish(fig, path)
