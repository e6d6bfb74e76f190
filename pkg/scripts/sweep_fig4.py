"""Write the loss-rate scans at chi = 0.01 for alpha = 1e3 and 1e4 as CSV."""

import argparse
from pathlib import Path

from kerrparity.cli import FIG4_COLUMNS, render
from kerrparity.scenarios import GammaSweep, GeometricGrid, fig4_sweep


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out-dir", type=Path, default=Path("results"))
    ap.add_argument("--points", type=int, default=50)
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args()
    args.out_dir.mkdir(parents=True, exist_ok=True)

    grid = GeometricGrid(1e-6, 1e-2, args.points)
    for alpha in (1e3, 1e4):
        rows = fig4_sweep(GammaSweep(alpha, grid), args.workers)
        path = args.out_dir / f"fig4_alpha{alpha:g}.csv"
        path.write_text(render(rows, "csv", FIG4_COLUMNS))
        print(f"{path}: {len(rows)} rows")


if __name__ == "__main__":
    main()
