#!/usr/bin/env python3
"""Plot per-type entropy curves from a profiles CSV.

Reads the CSV written by `daa profile --out ...` (or
scripts/run_evaluation.py) and draws one mean curve per file type with
a one-standard-deviation band, plus the ideal random reference when a
reference CSV is supplied.

Usage:
    python3 scripts/plot_profiles.py runs/demo/profiles.csv \
        --reference runs/demo/reference.csv --out curves.png
"""

import argparse
import csv
import sys
from collections import defaultdict
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from daa import load_reference


def read_profiles(path: Path) -> dict[str, list[tuple[int, float, float]]]:
    rows = defaultdict(list)
    with open(path, newline="", encoding="utf-8") as handle:
        for row in csv.DictReader(
            line for line in handle if not line.startswith("#")
        ):
            rows[row["file_type"]].append(
                (int(row["prefix_len"]), float(row["mean_entropy"]), float(row["stddev"]))
            )
    return dict(rows)


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("profiles", help="profiles CSV")
    parser.add_argument("--reference", help="optional reference CSV to overlay")
    parser.add_argument("--out", default="profiles.png", help="output image")
    args = parser.parse_args()

    profiles = read_profiles(Path(args.profiles))
    if not profiles:
        print("no profile rows found", file=sys.stderr)
        return 1

    fig, ax = plt.subplots(figsize=(8, 5))
    for file_type, points in sorted(profiles.items()):
        xs = [p for p, _, _ in points]
        means = [m for _, m, _ in points]
        sigmas = [s for _, _, s in points]
        (line,) = ax.plot(xs, means, label=file_type, linewidth=1.8)
        ax.fill_between(
            xs,
            [m - s for m, s in zip(means, sigmas)],
            [m + s for m, s in zip(means, sigmas)],
            alpha=0.15,
            color=line.get_color(),
        )

    if args.reference:
        ref = load_reference(args.reference)
        ax.plot(
            ref.curve.prefix_lens,
            ref.curve.entropies,
            "k--",
            label="random reference",
            linewidth=1.2,
        )

    ax.set_xlabel("header prefix length (bytes)")
    ax.set_ylabel("Shannon entropy (bits)")
    ax.set_ylim(0, 8)
    ax.legend(loc="lower right", fontsize=9)
    ax.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(args.out, dpi=120)
    print(f"wrote {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
