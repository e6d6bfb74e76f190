"""Plot the CSV files written by sweep_fig3.py and sweep_fig4.py.

Needs matplotlib, which the package itself does not depend on.
"""

import argparse
import csv
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402


def load(path):
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    return {k: [float(r[k]) for r in rows] for k in rows[0]}


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--results", type=Path, default=Path("results"))
    args = ap.parse_args()

    fig3 = sorted(args.results.glob("fig3_*.csv"))
    if fig3:
        fig, axes = plt.subplots(1, len(fig3), figsize=(5 * len(fig3), 4), squeeze=False)
        for ax, path in zip(axes[0], fig3):
            d = load(path)
            ax.semilogx(d["alpha"], d["A"], "-", label="A")
            ax.semilogx(d["alpha"], d["absC"], "--", label="|C|")
            ax.set_xlabel("alpha")
            ax.set_title(path.stem)
            ax.set_ylim(-0.02, 1.02)
            ax.legend()
        fig.tight_layout()
        fig.savefig(args.results / "fig3.png", dpi=150)

    fig4 = sorted(args.results.glob("fig4_*.csv"))
    if fig4:
        fig, ax = plt.subplots(figsize=(5, 4))
        for path, style in zip(fig4, ("-", "--")):
            d = load(path)
            ax.semilogx(d["gamma"], d["absC"], style, label=f"alpha = {d['alpha'][0]:g}")
        ax.set_xlabel("gamma")
        ax.set_ylabel("|C|")
        ax.legend()
        fig.tight_layout()
        fig.savefig(args.results / "fig4.png", dpi=150)


if __name__ == "__main__":
    main()
