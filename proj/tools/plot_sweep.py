#!/usr/bin/env python3
"""Plot a sweep's results.csv: log-log risk (or estimate) vs n.

Usage: plot_sweep.py <results_dir> [out.png]
"""

import csv
import json
import sys
from collections import defaultdict
from pathlib import Path


def main() -> int:
    if len(sys.argv) < 2:
        print(__doc__, file=sys.stderr)
        return 2
    results_dir = Path(sys.argv[1])
    out = Path(sys.argv[2]) if len(sys.argv) > 2 else results_dir / "plot.png"

    with open(results_dir / "results.csv", newline="") as fh:
        rows = list(csv.DictReader(fh))
    summary = json.loads((results_dir / "summary.json").read_text())

    value_key = "risk_l2_sq" if "risk_l2_sq" in rows[0] else "estimate"
    by_n = defaultdict(list)
    for row in rows:
        by_n[int(row["n"])].append(float(row[value_key]))

    try:
        import matplotlib

        matplotlib.use("Agg")
        import matplotlib.pyplot as plt
    except ImportError:
        print("matplotlib not available; per-n means:")
        for n in sorted(by_n):
            vals = by_n[n]
            print(f"  n={n}: mean={sum(vals) / len(vals):.6g} ({len(vals)} reps)")
        return 0

    fig, ax = plt.subplots(figsize=(6, 4.5))
    ns = sorted(by_n)
    ax.boxplot([by_n[n] for n in ns], positions=range(len(ns)), widths=0.5)
    means = [sum(by_n[n]) / len(by_n[n]) for n in ns]
    ax.plot(range(len(ns)), means, "o-", label="mean")
    ax.set_xticks(range(len(ns)), [str(n) for n in ns])
    ax.set_yscale("log")
    ax.set_xlabel("n")
    ax.set_ylabel(value_key)
    slope = summary.get("slope")
    if slope is not None:
        ax.set_title(f"{summary['experiment']}: slope {slope:.3f} (r2 {summary['r_squared']:.3f})")
    ax.legend()
    fig.tight_layout()
    fig.savefig(out, dpi=150)
    print(f"wrote {out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
