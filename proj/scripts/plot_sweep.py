#!/usr/bin/env python3
"""Plot error versus compression ratio from an `optisketch sweep` CSV.

usage: plot_sweep.py results.csv [out.png]
"""
import sys

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import pandas as pd


def main():
    if len(sys.argv) < 2:
        sys.exit(__doc__)
    df = pd.read_csv(sys.argv[1])
    out = sys.argv[2] if len(sys.argv) > 2 else "sweep.png"

    means = df[~df.metric.str.endswith(("_stderr", "_median")) & (df.metric != "none")]
    errs = df[df.metric.str.endswith("_stderr")].copy()
    errs["metric"] = errs.metric.str.removesuffix("_stderr")
    means = means.merge(errs[["algorithm", "backend", "m", "metric", "value"]],
                        on=["algorithm", "backend", "m", "metric"], how="left", suffixes=("", "_se"))

    panels = means.groupby(["algorithm", "metric"])
    fig, axes = plt.subplots(1, len(panels), figsize=(4 * len(panels), 3.5), squeeze=False)
    for ax, ((alg, metric), cell) in zip(axes[0], panels):
        for backend, rows in cell.groupby("backend"):
            rows = rows.sort_values("compression_ratio")
            ax.errorbar(rows.compression_ratio, rows.value, yerr=rows.value_se, marker="o", label=backend, capsize=3)
        ax.set_title(alg)
        ax.set_xlabel("m / n")
        ax.set_ylabel(metric.replace("_", " "))
        ax.set_yscale("log")
        ax.legend()
    fig.tight_layout()
    fig.savefig(out, dpi=120)
    print(f"wrote {out}")


if __name__ == "__main__":
    main()
