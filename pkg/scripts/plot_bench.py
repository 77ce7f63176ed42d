"""Stacked stage-time bars per config from a bench CSV.

Mean iteration counts go on top of each bar, success rates in parentheses.

    python scripts/plot_bench.py results/default.csv -o default.png
"""
import argparse
import sys
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

sys.path.insert(0, str(Path(__file__).resolve().parents[1]))

from app.bench.summary import summarize_csv  # noqa: E402
from app.schemas.report import STAGES  # noqa: E402


def plot(csv_path: Path, out: Path, step: int = 0) -> Path:
    summary = summarize_csv(csv_path)
    labels = [c.config_id for c in summary.configs]
    x = np.arange(len(labels))
    bottom = np.zeros(len(labels))

    fig, ax = plt.subplots(figsize=(max(6, 1.2 * len(labels)), 4.5))
    for stage in STAGES:
        heights = []
        for c in summary.configs:
            if step:
                seconds = next((s.mean_seconds for s in c.steps if s.step == step), None)
            else:
                seconds = c.mean_seconds
            heights.append(getattr(seconds, stage) if seconds else 0.0)
        ax.bar(x, heights, bottom=bottom, label=stage)
        bottom += np.asarray(heights)

    for xi, top, c in zip(x, bottom, summary.configs):
        iters = "-" if c.mean_inner is None else f"{c.mean_inner:.0f}"
        ax.annotate(f"{iters}\n({c.success_rate:.0f}%)", (xi, top), ha="center", va="bottom", fontsize=8)

    ax.set_xticks(x)
    ax.set_xticklabels(labels, rotation=30, ha="right")
    ax.set_ylabel("mean time [s]")
    ax.set_title(summary.experiment if not step else f"{summary.experiment}, step {step}")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(out, dpi=150)
    plt.close(fig)
    return out


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("csv", type=Path)
    parser.add_argument("-o", "--output", type=Path, default=None)
    parser.add_argument("--step", type=int, default=0, help="plot one time step instead of the whole run")
    args = parser.parse_args()
    out = args.output or args.csv.with_suffix(".png")
    print(plot(args.csv, out, args.step))
    return 0


if __name__ == "__main__":
    sys.exit(main())
