"""Cardinality tables and figures for the ``report`` command."""

from __future__ import annotations

import csv
import os

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .construction import ArgMode, BudgetExceeded, Options, build_subtyping  # noqa: E402
from .operators import WcPolicy, intervals, wc  # noqa: E402
from .poset import chain  # noqa: E402

LEVEL_FIELDS = ["arg_mode", "wc_policy", "depth", "elements", "covers"]
CHAIN_FIELDS = ["n", "wc_paper", "wc_semantic", "intervals"]


def level_rows(table, depth, budget):
    rows = []
    for mode, policy in (("wildcards", "paper"), ("wildcards", "semantic"), ("intervals", "paper")):
        try:
            S = build_subtyping(table, depth, Options(mode, policy), budget)
            sizes, covers = S.level_sizes, S.level_covers
        except BudgetExceeded as exc:
            sizes, covers = exc.partial.level_sizes, exc.partial.level_covers
        for i, (n, c) in enumerate(zip(sizes, covers)):
            rows.append({"arg_mode": mode, "wc_policy": policy if mode == "wildcards" else "",
                         "depth": i, "elements": n, "covers": c})
    return rows


def chain_rows(max_n=10):
    rows = []
    for n in range(2, max_n + 1):
        P = chain(n)
        rows.append({"n": n, "wc_paper": len(wc(P, WcPolicy.PAPER)),
                     "wc_semantic": len(wc(P, WcPolicy.SEMANTIC)), "intervals": len(intervals(P))})
    return rows


def write_csv(path, fields, rows, delimiter=","):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.DictWriter(fh, fieldnames=fields, delimiter=delimiter)
        w.writeheader()
        w.writerows(rows)


def plot_levels(rows, path):
    fig, ax = plt.subplots(figsize=(5, 3.5))
    series = {}
    for r in rows:
        key = r["arg_mode"] if r["arg_mode"] == "intervals" else f"wildcards ({r['wc_policy']})"
        series.setdefault(key, []).append((r["depth"], r["elements"]))
    for key, pts in series.items():
        xs, ys = zip(*pts)
        ax.plot(xs, ys, marker="o", label=key)
    ax.set_yscale("log")
    ax.set_xlabel("depth k")
    ax.set_ylabel("elements of S_k")
    ax.set_xticks(sorted({r["depth"] for r in rows}))
    ax.legend(frameon=False)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_chains(rows, path):
    fig, ax = plt.subplots(figsize=(5, 3.5))
    ns = [r["n"] for r in rows]
    ax.plot(ns, [r["wc_paper"] for r in rows], marker="o", label="wc, paper (3n-2)")
    ax.plot(ns, [r["wc_semantic"] for r in rows], marker="s", label="wc, semantic (3n-3)")
    ax.plot(ns, [r["intervals"] for r in rows], marker="^", label="intervals (n(n+1)/2)")
    ax.set_xlabel("chain length n")
    ax.set_ylabel("type arguments")
    ax.legend(frameon=False)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def write_report(table, depth, out_dir, budget, delimiter=","):
    """Write ``levels.csv``, ``chains.csv`` and one PNG for each; return the paths."""
    os.makedirs(out_dir, exist_ok=True)
    levels = level_rows(table, depth, budget)
    chains = chain_rows()
    paths = {
        "levels_csv": os.path.join(out_dir, "levels.csv"),
        "chains_csv": os.path.join(out_dir, "chains.csv"),
        "levels_png": os.path.join(out_dir, "levels.png"),
        "chains_png": os.path.join(out_dir, "chains.png"),
    }
    write_csv(paths["levels_csv"], LEVEL_FIELDS, levels, delimiter)
    write_csv(paths["chains_csv"], CHAIN_FIELDS, chains, delimiter)
    plot_levels(levels, paths["levels_png"])
    plot_chains(chains, paths["chains_png"])
    return paths


__all__ = ["write_report", "level_rows", "chain_rows", "ArgMode"]
