"""Plot a bench CSV against the Jetson TX2 reference curves.

usage: python3 tools/plot_bench.py bench.csv [--reference data/reference_framerate.csv] [--out bench.png]
"""

import argparse
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import pandas as pd

ROOT = Path(__file__).resolve().parent.parent


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("bench_csv", type=Path)
    parser.add_argument("--reference", type=Path, default=ROOT / "data" / "reference_framerate.csv")
    parser.add_argument("--out", type=Path, default=Path("bench.png"))
    args = parser.parse_args()

    bench = pd.read_csv(args.bench_csv, comment="#")
    reference = pd.read_csv(args.reference, comment="#")

    fig, (ax_local, ax_ref) = plt.subplots(1, 2, figsize=(10, 4))
    ax_local.plot(bench["n_objects"], bench["fps"], marker="o", label="this host")
    ax_local.set_title("measured")
    for (mode, clocks), curve in reference.groupby(["mode", "clocks"]):
        if mode == "max_n":
            ax_ref.plot(curve["n_objects"], curve["fps"], marker="o", linestyle="--", label=f"TX2 {mode} ({clocks} clocks)")
    ax_ref.set_title("reference (Jetson TX2)")
    for ax in (ax_local, ax_ref):
        ax.set_xlabel("tracked objects")
        ax.set_ylabel("frame rate (fps)")
        ax.grid(alpha=0.3)
        ax.legend()
    fig.tight_layout()
    fig.savefig(args.out, dpi=120)
    print(f"wrote {args.out}")


if __name__ == "__main__":
    main()
